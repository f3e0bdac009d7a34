#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "beltrami/field.hpp"
#include "beltrami/spectral_ops.hpp"

namespace beltrami {

struct CflViolation : Error {
  using Error::Error;
};

struct SolverConfig {
  double nu = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  std::vector<double> snapshot_times;  ///< sorted; 0 and t_end are always captured
  bool dealias = true;
  std::string scheme = "ifrk4";
  double cfl_limit = 0.5;
  int sobolev_order = 3;
  void validate() const;
};

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;       ///< (1/2) ||u||^2
  double enstrophy = 0.0;    ///< (1/2) ||omega||^2
  double dissipated = 0.0;   ///< nu int_0^t ||grad u||^2 ds
  std::vector<double> hk;    ///< ||u||_{H^k}, k = 0..r
  double div_max = 0.0;
  double cfl = 0.0;
};

struct Trajectory {
  GridSpec grid;
  double nu = 1.0;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<Diagnostics> diagnostics;  ///< one row per step, plus t = 0

  /// Snapshot at t (exact match within 1e-12 relative), or throws.
  const SpectralField& at(double t) const;
  /// max_t |E(t) + nu int ||grad u||^2 - E(0)| / E(0).
  double energy_residual() const;
  void write_csv(const std::filesystem::path& path) const;
  /// Velocity snapshots plus a JSON index of {t, path}.
  void write_snapshots(const std::filesystem::path& dir) const;
};

/// Integrating-factor RK4 for  du/dt = P(u x omega) + nu Lap u  on a fixed step.
/// The diffusion is applied through exact e^{nu Lap h} multipliers.
class Stepper {
 public:
  Stepper(const GridSpec& g, double nu, bool dealias = true);

  SpectralField step(const SpectralField& u, double dt);
  /// P(u x curl u), dealiased; also reports max |u| of the input.
  SpectralField nonlinear(const SpectralField& u, double* max_speed = nullptr) const;
  double last_max_speed() const { return max_speed_; }

 private:
  struct Factors {
    Eigen::ArrayXd half, full;
  };
  const Factors& factors(double dt);

  GridSpec grid_;
  double nu_;
  bool dealias_;
  double max_speed_ = 0.0;
  std::map<double, Factors> cache_;
};

/// One step from u with cfg.dt. Throws CflViolation when max|u| dt / h > cfg.cfl_limit.
SpectralField step(const SpectralField& u, const SolverConfig& cfg);

/// Integrate to cfg.t_end. Each interval between capture times is split into equal
/// steps no larger than cfg.dt, so snapshots land on the requested times exactly.
/// `observer` (if set) is called at every captured snapshot.
Trajectory run(const SpectralField& u0, const SolverConfig& cfg,
               const std::function<void(double, const SpectralField&)>& observer = {});

SpectralField vorticity(const SpectralField& u);

/// omega(t) - e^{nu t Lap} omega(0) from the trajectory.
PhysicalField duhamel_remainder(const Trajectory& traj, double t);

/// Galerkin datum: truncated to the 2/3 band and Leray projected.
SpectralField prepare_initial(const SpectralField& u0, bool dealias = true);

}  // namespace beltrami
