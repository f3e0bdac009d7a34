#pragma once

#include <cstdint>
#include <numbers>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "beltrami/fields.hpp"
#include "beltrami/norms.hpp"
#include "beltrami/solver.hpp"
#include "beltrami/zeros.hpp"

namespace beltrami {

struct ConfigError : Error {
  using Error::Error;
};

/// Sectioned key = value text. '#' starts a comment; keys outside a section are rejected.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& origin = "<config>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  const std::string& raw(const std::string& section, const std::string& key) const;
  /// Keys that were never read through the typed accessors.
  std::vector<std::string> unused() const;

  double number(const std::string& section, const std::string& key, double fallback) const;
  int integer(const std::string& section, const std::string& key, int fallback) const;
  bool boolean(const std::string& section, const std::string& key, bool fallback) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key,
                              const std::vector<double>& fallback) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  mutable std::map<std::string, bool> used_;
};

/// Parse a real number; a trailing "pi" multiplies by pi ("16pi", "0.5 pi").
double parse_number(const std::string& s);

struct Theorem1Params {
  std::vector<double> M{1.0, 2.0};
  std::vector<double> L{4.0, 8.0, 16.0};
  double lambda = 1.0;
  double alpha = 2.0;
  double c_star = 1.0;
  int n_min = 64;
};

struct OracleParams {
  double lambda = 2.0;
  int n = 64;
  /// Nonlinear flow used for the dt-halving order measurement.
  int order_n = 32;
  double order_nu = 0.05;
  double order_t_end = 0.5;
  double order_dt = 0.02;
};

struct SweepParams {
  std::vector<double> L{4.0, 8.0, 16.0, 32.0};
  double lambda = 1.0;
  double t_fixed = 0.25;
  std::vector<double> t{0.25, 0.35, 0.5, 0.7, 1.0};
  std::vector<double> heat_t{0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
  int n_max = 256;
};

struct ExperimentConfig {
  std::string experiment = "theorem2";
  GridSpec grid{128, 4.0 * std::numbers::pi};
  DatumConfig datum;
  SolverConfig solver;
  ScanConfig scan;
  TimeGrid time_grid;
  Theorem1Params theorem1;
  OracleParams oracle;
  SweepParams sweep;
  FirstZeroConfig first_zero;
  std::vector<int> first_zero_N{8, 16};
  double second_amplitude = 1.0;
  double closeness_limit = 0.1;
  double near_origin = 0.5;
  /// Seeding radius for the intermediate zero-count snapshots; <= 0 scans the whole box.
  double series_region = 2.0;
  std::vector<double> duhamel_times{0.001, 0.0025, 0.005, 0.01};
  bool write_snapshots = false;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;

  /// Cross-field checks; throws ConfigError naming the violated invariant.
  void validate() const;
  void print(std::ostream& os) const;
};

/// Defaults for an experiment, then overrides from the file.
ExperimentConfig default_config(const std::string& experiment);
ExperimentConfig load_config(const std::string& experiment, const KeyValueFile& kv);

const std::vector<std::string>& experiment_names();

}  // namespace beltrami
