#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "beltrami/solver.hpp"

namespace beltrami {

enum class ZeroClass { Hyperbolic, NonHyperbolic, Degenerate };
std::string to_string(ZeroClass c);

struct Classification {
  ZeroClass kind = ZeroClass::Degenerate;
  std::array<std::complex<double>, 3> eigenvalues;
};

struct ZeroRecord {
  Eigen::Vector3d location = Eigen::Vector3d::Zero();
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
  std::array<std::complex<double>, 3> eigenvalues;
  ZeroClass kind = ZeroClass::Degenerate;
  double residual = 0.0;
  bool boundary = false;  ///< within 2 cells of the box boundary

  nlohmann::json to_json(double t) const;
};

struct ScanConfig {
  int stride = 1;
  double newton_tol = 1e-10;  ///< on |f|, relative to the field's max magnitude
  int max_iter = 50;
  double tol_det = 1e-8;      ///< relative to spectral radius cubed
  double tol_re = 1e-6;       ///< relative to spectral radius
  double dedup_radius = -1.0; ///< <= 0 means one grid spacing
  double seed_fraction = 1e-2;
  double seed_percentile = 0.10;
  double region = -1.0;       ///< seed only cells within this distance of the origin; <= 0 scans the box
  void validate() const;
};

struct ScanStats {
  std::size_t seeds = 0;
  std::size_t converged = 0;
  std::size_t dropped = 0;
};

/// Value and Jacobian of the trigonometric interpolant at an arbitrary point.
class OffGridEvaluator {
 public:
  explicit OffGridEvaluator(const SpectralField& f);
  Eigen::Vector3d value(const Eigen::Vector3d& x) const;
  /// jac(i, j) = d f_i / d x_j
  Eigen::Matrix3d jacobian(const Eigen::Vector3d& x) const;
  void evaluate(const Eigen::Vector3d& x, Eigen::Vector3d& v, Eigen::Matrix3d* jac) const;
  const GridSpec& grid() const { return f_.grid; }

 private:
  SpectralField f_;
  int band_ = 0;  ///< all coefficients with some |m_a| > band_ are zero
};

Eigen::Vector3d eval_off_grid(const SpectralField& f, const Eigen::Vector3d& x);
Eigen::Matrix3d jacobian_at(const SpectralField& f, const Eigen::Vector3d& x);

/// Eigenvalues from the characteristic cubic in closed form, then classification
/// relative to the spectral radius.
Classification classify(const Eigen::Matrix3d& jac, double tol_det = 1e-8, double tol_re = 1e-6);
std::array<std::complex<double>, 3> cubic_eigenvalues(const Eigen::Matrix3d& jac);

std::vector<ZeroRecord> scan_zeros(const SpectralField& f, const ScanConfig& cfg = {}, ScanStats* stats = nullptr);

/// Newton refinement from a single starting point (no seeding).
std::optional<ZeroRecord> refine_zero(const OffGridEvaluator& ev, const Eigen::Vector3d& x0, const ScanConfig& cfg,
                                      double scale);

struct ZeroCount {
  double t = 0.0;
  int count = 0;        ///< interior zeros
  int hyperbolic = 0;   ///< interior hyperbolic zeros
  int boundary = 0;     ///< flagged and excluded
  std::vector<ZeroRecord> zeros;
};

ZeroCount count_zeros(const SpectralField& vort, double t, const ScanConfig& cfg);
std::vector<ZeroCount> zero_count_series(const Trajectory& traj, const ScanConfig& cfg);

/// Interior hyperbolic zero of the vorticity within `radius` of the origin.
bool has_zero_near_origin(const SpectralField& u, double radius, const ScanConfig& cfg);

struct FirstZeroResult {
  bool found = false;
  double t_lo = 0.0;  ///< no zero near the origin
  double t_hi = 0.0;  ///< zero near the origin
  int solver_restarts = 0;
};

struct FirstZeroConfig {
  double t_min = 0.0;
  double t_max = 1.0;
  int coarse_points = 16;   ///< coarse scan, logarithmic in t
  double width = 1e-3;      ///< target bracket width in units of 1/(nu N^2)
  double radius = 0.5;
};

/// Bracket the first time an interior hyperbolic vorticity zero appears within
/// `radius` of the origin: coarse scan, then bisection with solver restarts.
FirstZeroResult first_zero_time(const SpectralField& u0, const SolverConfig& solver, double N,
                                const FirstZeroConfig& fz, const ScanConfig& scan);

}  // namespace beltrami
