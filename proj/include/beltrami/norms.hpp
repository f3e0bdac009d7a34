#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/fields.hpp"

namespace beltrami {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// (int |f|^p dx)^{1/p} by the midpoint rule, |f| Euclidean; p = inf is the grid max.
template <int C>
double lp_norm(const Physical<C>& f, double p);

/// (box^3 sum_k w (1+|k|^2)^r |c_k|^2)^{1/2}; homogeneous uses |k|^{2r}.
template <int C>
double sobolev_norm(const Spectral<C>& f, double r, bool homogeneous = false);

/// Dyadic block Delta_j = S_j - S_{j-1}, S_j = chi(|k| / 2^j); support 2^{j-2} < |k| < 2^j.
template <int C>
Spectral<C> lp_block(const Spectral<C>& f, int j);

struct DyadicRange {
  int j_min;
  int j_max;
};
/// Blocks meeting the resolved band. With `dealiased` the top is the 2/3-rule corner,
/// otherwise the Nyquist corner. S_{j_min-1} vanishes off k = 0 and S_{j_max} = 1 on the band.
DyadicRange dyadic_range(const GridSpec& g, bool dealiased = false);

struct BesovParams {
  double s = -1.0;
  double p = kInf;
  double q = kInf;
  void validate() const;
};

/// Logarithmic time grid, trapezoid rule in log t.
struct TimeGrid {
  double t_min = 1e-4;
  double t_max = 1e2;
  int per_decade = 32;
  std::vector<double> points() const;
  void validate() const;
};

struct NormReport {
  double value = 0.0;
  std::string method;  // dyadic | caloric | direct
  int j_min = 0, j_max = 0;
  double t_min = 0.0, t_max = 0.0;
  std::string quadrature;
  /// Largest contribution at the ends of the summation range, relative to value.
  double truncation = 0.0;
  nlohmann::json to_json() const;
};

template <int C>
NormReport besov_dyadic(const Spectral<C>& f, const BesovParams& bp);
template <int C>
NormReport besov_dyadic(const Spectral<C>& f, const BesovParams& bp, DyadicRange range);

/// ||t^{-s/2} ||e^{t Lap} f||_{L^p}||_{L^q(dt/t)} over the grid; q = inf is the max.
template <int C>
NormReport besov_caloric(const Spectral<C>& f, const BesovParams& bp, const TimeGrid& tg);

/// Omega(t) = (e^{t Lap} u0 . grad) e^{t Lap} u0, dealiased; optionally Leray projected.
SpectralField omega_u0_spectral(const SpectralField& u0, double t, bool project = true);
PhysicalField omega_u0(const SpectralField& u0, double t, bool project = true);

struct ENormReport {
  double integrated_besov = 0.0;  ///< int ||F||_{B^{-1}_{inf,1}} dt
  double square_function = 0.0;   ///< sum_j 2^{-j} (int ||Delta_j F||_inf^2 t dt)^{1/2}
  double value = 0.0;
  NormReport meta;
  nlohmann::json to_json() const;
};

/// ||P Omega_{u0}||_E on the given time grid and block range.
ENormReport e_norm(const SpectralField& u0, const TimeGrid& tg, DyadicRange range);
ENormReport e_norm(const SpectralField& u0, const TimeGrid& tg);

struct CgCheck {
  double lhs = 0.0;        ///< ||P Omega||_E
  double rhs = 0.0;        ///< exp(-C* ||u0||^4_{B^{-1}_{inf,2}}) / C*
  double besov_inf2 = 0.0;
  bool satisfied = false;
  double margin() const { return rhs - lhs; }
};
CgCheck check_cg_condition(const SpectralField& u0, double c_star, const TimeGrid& tg);

/// ||e^{t Lap}(phi_L B_lam) - phi_L e^{t Lap} B_lam||_{L^p}, both terms from the
/// periodized product on the grid.
double commutator_norm(const GridSpec& g, const LocalizerSpec& loc, double lambda, double t, double p);

enum class Weight { Linear, Quadratic };
/// max (1+|x|)^gamma |f(x)| (Linear) or (1+|x|^2)^gamma |f(x)| (Quadratic).
template <int C>
double weighted_sup(const Physical<C>& f, double gamma, Weight w = Weight::Linear);

/// Least-squares slope of log y against log x.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace beltrami
