#pragma once

#include <Eigen/Dense>

#include "beltrami/field.hpp"
#include "beltrami/transform.hpp"

namespace beltrami {

struct GuardExceeded : Error {
  using Error::Error;
};

/// Wavevector tables for one grid in the half-complex layout.
/// `k[a]` are derivative symbols (Nyquist modes zeroed so first derivatives of
/// real fields stay real); `k2` is the true |k|^2 used by diffusion multipliers.
struct Wavenumbers {
  std::array<Eigen::ArrayXd, 3> k;
  Eigen::ArrayXd k2;
  Eigen::ArrayXd kd2;     ///< |k|^2 built from the derivative symbols
  Eigen::ArrayXd inv_kd2; ///< 1/kd2, 0 where kd2 = 0
  Eigen::ArrayXd weight;  ///< multiplicity of each stored coefficient in the full spectrum
  Eigen::ArrayXd dealias; ///< 1 inside |m_a| <= n/3 for every axis, else 0
};

/// Cached per grid (thread-local).
const Wavenumbers& wavenumbers(const GridSpec& g);

SpectralField curl(const SpectralField& f);
SpectralScalar divergence(const SpectralField& f);
SpectralField gradient(const SpectralScalar& g);
/// d/dx_axis applied componentwise.
template <int C>
Spectral<C> derivative(const Spectral<C>& f, int axis);
template <int C>
Spectral<C> laplacian(const Spectral<C>& f);

/// u(k) -> u(k) - k (k.u(k)) / |k|^2 for k != 0.
SpectralField leray_project(const SpectralField& f);
/// In place: 2/3-rule truncation followed by the Leray projection.
void dealias_project(SpectralField& f);

/// e^{s Laplacian}; s < 0 is delegated to inverse_heat with the default guard.
template <int C>
Spectral<C> heat_semigroup(const Spectral<C>& f, double s);

inline constexpr double kDefaultHeatGuard = 1e6;

/// e^{-s Laplacian} for s > 0. Throws GuardExceeded when an amplified coefficient
/// exceeds `guard` times the largest input coefficient, or overflows.
template <int C>
Spectral<C> inverse_heat(const Spectral<C>& f, double s, double guard = kDefaultHeatGuard);

/// Zero all modes outside the 2/3-rule band.
template <int C>
Spectral<C> dealias(const Spectral<C>& f);

/// Inverse of curl on mean-free divergence-free fields: u = curl (-Laplacian)^{-1} w.
SpectralField biot_savart(const SpectralField& vorticity);

/// Smooth cutoff of the ball B_{1/2}: 1 on |xi| <= 1/2, 0 on |xi| >= 1.
double smooth_cutoff(double r);
/// P_{<= rho}: multiply by smooth_cutoff(|k| / rho).
template <int C>
Spectral<C> low_pass(const Spectral<C>& f, double rho);
template <int C>
Spectral<C> high_pass(const Spectral<C>& f, double rho);

/// Apply a radial multiplier m(|k|^2) componentwise.
template <int C, class M>
Spectral<C> radial_multiplier(const Spectral<C>& f, M&& m) {
  const auto& w = wavenumbers(f.grid);
  Eigen::ArrayXd sym = w.k2.unaryExpr(std::forward<M>(m));
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) out.comp[c] = f.comp[c] * sym;
  return out;
}

/// Pointwise cross product a x b.
PhysicalField cross(const PhysicalField& a, const PhysicalField& b);
/// Pointwise dot product.
PhysicalScalar dot(const PhysicalField& a, const PhysicalField& b);

/// (a.grad) b evaluated pseudospectrally; the product is dealiased when asked.
SpectralField convective_term(const SpectralField& a, const SpectralField& b, bool dealiased = true);

/// Discrete L2 inner product  int f.g dx  computed from coefficients.
template <int C>
double inner_product(const Spectral<C>& f, const Spectral<C>& g);

/// Scalar component of a field, or a field from three scalars.
SpectralScalar component(const SpectralField& f, int c);

}  // namespace beltrami
