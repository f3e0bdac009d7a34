#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/config.hpp"

namespace beltrami {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);
/// 0 PASS, 1 FAIL, 2 INCONCLUSIVE.
int exit_code(Verdict v);

struct Report {
  std::string command;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> summary;  ///< human-readable lines
  nlohmann::json data;               ///< measured values, also written as summary.json

  void add(const std::string& line) { summary.push_back(line); }
  void write(const std::filesystem::path& dir) const;
};

using Progress = std::function<void(const std::string&)>;

/// Raised by cmd_theorem2 when a stage throws; what() names the stage.
struct StageError : Error {
  using Error::Error;
};

Report cmd_theorem1(const ExperimentConfig& cfg, const Progress& progress = {});
Report cmd_theorem2(const ExperimentConfig& cfg, const Progress& progress = {});
Report cmd_oracle(const ExperimentConfig& cfg, const Progress& progress = {});
Report cmd_lemma_sweep(const ExperimentConfig& cfg, const Progress& progress = {});
Report cmd_first_zero(const ExperimentConfig& cfg, const Progress& progress = {});

Report run_command(const ExperimentConfig& cfg, const Progress& progress = {});

/// Smallest power of two >= n_min giving four points per period of frequency lambda.
int resolving_points(double box_length, double lambda, int n_min);

/// Taylor-Green datum (sin x cos y cos z, -cos x sin y cos z, 0).
SpectralField taylor_green(const GridSpec& g);

struct OrderStudy {
  std::vector<double> dt;
  std::vector<double> difference;  ///< |u_dt - u_{dt/2}|_inf at t_end
  double ratio = 0.0;              ///< difference[0] / difference[1]
  double energy_residual = 0.0;
};
/// Successive dt halvings of a nonlinear flow; the ratio tends to 16 for a fourth-order scheme.
OrderStudy dt_halving(const SpectralField& u0, const SolverConfig& base);

}  // namespace beltrami
