#pragma once

#include <Eigen/Dense>

#include "beltrami/field.hpp"
#include "beltrami/spectral_ops.hpp"

namespace beltrami {

/// Shear Beltrami field B_N(x) = (sin N x3, cos N x3, 0); curl B_N = N B_N.
Eigen::Vector3d eval_B_N(double N, const Eigen::Vector3d& x);
/// W(x) = (sin x2, sin x3, sin x1); curl curl W = W.
Eigen::Vector3d eval_W(const Eigen::Vector3d& x);

struct BeltramiSpec {
  enum class Family { Shear };
  double frequency = 1.0;
  Family family = Family::Shear;
  void validate() const;
};

/// Radial localizer. Inverse power: phi(x) = (1 + |x/L|^2)^{-alpha}.
/// Gaussian: psi(x) = exp(-|x/L|^2 / width), with width = 8 nu T for the
/// reconnection construction.
struct LocalizerSpec {
  enum class Kind { InversePower, Gaussian };
  Kind kind = Kind::InversePower;
  double alpha = 2.0;
  double width = 8.0;
  double dilation = 1.0;

  static LocalizerSpec inverse_power(double alpha, double dilation = 1.0) {
    return {Kind::InversePower, alpha, 8.0, dilation};
  }
  static LocalizerSpec gaussian(double nu_t) { return {Kind::Gaussian, 2.0, 8.0 * nu_t, 1.0}; }

  void validate() const;
  double value(const Eigen::Vector3d& x) const;
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const;
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const;
  /// Continuum transform  int phi(x) e^{-ik.x} dx  at |k|.
  double fourier(double k) const;
  /// Inverse powers with alpha <= 3/2 are not integrable, so the transform does not exist.
  bool has_fourier() const { return kind == Kind::Gaussian || alpha > 1.5; }
};

/// How a non-periodic localizer is placed on the periodic box.
///  Sampled: point samples on [-L/2, L/2)^3, periodized implicitly.
///  Poisson: exact Fourier coefficients of the lattice sum  sum_m phi(x + L m).
enum class Periodization { Sampled, Poisson };

struct DatumConfig {
  double nu = 1.0;
  double T = 1.0;
  int N = 8;
  double alpha = 2.0;
  double beta = 4.0;
  double M = 1.0;
  double L = 8.0;
  int r = 3;

  double rho() const;
  void validate() const;
};

struct FieldPair {
  SpectralField u;
  SpectralField omega;
};

/// B_N as an exact spectral field; requires N * box / (2 pi) to be an integer mode.
SpectralField beltrami_field(const GridSpec& g, double N);
/// W as an exact spectral field; requires a 2 pi periodic box.
SpectralField w_field(const GridSpec& g);

/// Localizer samples / Fourier coefficients on the grid.
PhysicalScalar sample_localizer(const GridSpec& g, const LocalizerSpec& loc);
SpectralScalar localizer_spectrum(const GridSpec& g, const LocalizerSpec& loc, Periodization mode);

/// phi * B_N and psi * W on the box, built either from samples or in closed form.
SpectralField localized_beltrami(const GridSpec& g, const LocalizerSpec& loc, double N, Periodization mode);
SpectralField localized_w(const GridSpec& g, const LocalizerSpec& loc, Periodization mode);

/// Default: Poisson when the localizer transform exists, otherwise Sampled.
Periodization default_periodization(const LocalizerSpec& loc);

/// Throws Error unless the shear mode N sits on the grid with >= 4 points per period.
void require_resolved(const GridSpec& g, double N);

/// u01 = curl(phi B_N), omega01 = curl u01.
FieldPair build_u01(const GridSpec& g, int N, double alpha);
FieldPair build_u01(const GridSpec& g, int N, double alpha, Periodization mode);
/// Pointwise formulas N phi B_N + grad phi x B_N and the five-term vorticity.
PhysicalField u01_analytic(const GridSpec& g, int N, double alpha);
PhysicalField omega01_analytic(const GridSpec& g, int N, double alpha);

/// curl curl(psi W) with psi = exp(-|x|^2 / (8 nu T)).
SpectralField curl_curl_psi_w(const GridSpec& g, double nu_t);
/// Pointwise curl curl(psi W) from the expansion psi W + grad psi x curl W + (W.grad) grad psi - lap psi W - (grad psi.grad) W.
Eigen::Vector3d curl_curl_psi_w_at(const Eigen::Vector3d& x, double nu_t);

/// u02 = e^{-nu T Lap} curl(psi W), omega02 = curl u02. Propagates GuardExceeded.
FieldPair build_u02_omega02(const GridSpec& g, double nu, double T, double guard = kDefaultHeatGuard);

struct Theorem2Datum {
  double rho = 1.0;
  FieldPair first;   ///< u01, omega01
  FieldPair second;  ///< u02, omega02
  FieldPair total;   ///< rho (u01 + u02), rho (omega01 + omega02)
};

/// u0 = rho (u01 + u02) with rho = N^{-beta}. `second_amplitude` scales u02 (0 gives the
/// no-reconnection control).
Theorem2Datum build_theorem2_datum(const GridSpec& g, const DatumConfig& cfg, double second_amplitude = 1.0);

/// u0 = M curl(phi_L B_lambda). Requires L <= box/8.
SpectralField build_theorem1_datum(const GridSpec& g, double M, double L, double lambda, double alpha);
PhysicalField theorem1_analytic(const GridSpec& g, double M, double L, double lambda, double alpha);

/// Smallest 2 pi multiple box holding a dilation L (box >= 8 L).
double theorem1_box(double L);

/// F_N(t) = (1/N) int_{-N/2}^{N/2} exp(-2 nu t xi^2) d xi, closed form via erf.
double f_N(double N, double nu, double t);

/// Sample a pointwise vector function on the grid.
template <class F>
PhysicalField sample(const GridSpec& g, F&& f) {
  PhysicalField out(g);
  for_each_point(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const Eigen::Vector3d v = f(g.point(i1, i2, i3));
    for (int c = 0; c < 3; ++c) out[c][Eigen::Index(idx)] = v[c];
  });
  return out;
}

}  // namespace beltrami
