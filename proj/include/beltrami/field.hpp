#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "beltrami/grid.hpp"

namespace beltrami {

using Complex = std::complex<double>;

/// Real samples of a C-component field on the grid.
template <int C>
struct Physical {
  GridSpec grid;
  std::array<Eigen::ArrayXd, C> comp;

  Physical() = default;
  explicit Physical(const GridSpec& g) : grid(g) {
    for (auto& c : comp) c = Eigen::ArrayXd::Zero(Eigen::Index(g.physical_size()));
  }

  Eigen::ArrayXd& operator[](int i) { return comp[i]; }
  const Eigen::ArrayXd& operator[](int i) const { return comp[i]; }

  bool all_finite() const {
    for (const auto& c : comp)
      if (!c.isFinite().all()) return false;
    return true;
  }

  /// Pointwise Euclidean magnitude.
  Eigen::ArrayXd magnitude() const {
    Eigen::ArrayXd s = Eigen::ArrayXd::Zero(comp[0].size());
    for (const auto& c : comp) s += c.square();
    return s.sqrt();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comp) m = std::max(m, c.abs().maxCoeff());
    return m;
  }

  Physical& operator+=(const Physical& o) {
    require_same_grid(grid, o.grid);
    for (int i = 0; i < C; ++i) comp[i] += o.comp[i];
    return *this;
  }
  Physical& operator-=(const Physical& o) {
    require_same_grid(grid, o.grid);
    for (int i = 0; i < C; ++i) comp[i] -= o.comp[i];
    return *this;
  }
  Physical& operator*=(double s) {
    for (auto& c : comp) c *= s;
    return *this;
  }
  friend Physical operator+(Physical a, const Physical& b) { return a += b; }
  friend Physical operator-(Physical a, const Physical& b) { return a -= b; }
  friend Physical operator*(double s, Physical a) { return a *= s; }

  Eigen::Vector3d at(std::size_t idx) const
    requires(C == 3)
  {
    return {comp[0][Eigen::Index(idx)], comp[1][Eigen::Index(idx)], comp[2][Eigen::Index(idx)]};
  }
};

/// Fourier coefficients c_k of a real C-component field, f(x) = sum_k c_k e^{ik.x},
/// in the half-complex layout of GridSpec.
template <int C>
struct Spectral {
  GridSpec grid;
  std::array<Eigen::ArrayXcd, C> comp;

  Spectral() = default;
  explicit Spectral(const GridSpec& g) : grid(g) {
    for (auto& c : comp) c = Eigen::ArrayXcd::Zero(Eigen::Index(g.spectral_size()));
  }

  Eigen::ArrayXcd& operator[](int i) { return comp[i]; }
  const Eigen::ArrayXcd& operator[](int i) const { return comp[i]; }

  bool all_finite() const {
    for (const auto& c : comp)
      if (!c.isFinite().all()) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comp) m = std::max(m, c.abs().maxCoeff());
    return m;
  }

  Spectral& operator+=(const Spectral& o) {
    require_same_grid(grid, o.grid);
    for (int i = 0; i < C; ++i) comp[i] += o.comp[i];
    return *this;
  }
  Spectral& operator-=(const Spectral& o) {
    require_same_grid(grid, o.grid);
    for (int i = 0; i < C; ++i) comp[i] -= o.comp[i];
    return *this;
  }
  Spectral& operator*=(double s) {
    for (auto& c : comp) c *= s;
    return *this;
  }
  friend Spectral operator+(Spectral a, const Spectral& b) { return a += b; }
  friend Spectral operator-(Spectral a, const Spectral& b) { return a -= b; }
  friend Spectral operator*(double s, Spectral a) { return a *= s; }
};

using PhysicalField = Physical<3>;
using PhysicalScalar = Physical<1>;
using SpectralField = Spectral<3>;
using SpectralScalar = Spectral<1>;

/// Multiplicity of a half-layout coefficient in the full spectrum.
inline double hermitian_weight(const GridSpec& g, int l1) {
  return (l1 == 0 || l1 == g.n / 2) ? 1.0 : 2.0;
}

}  // namespace beltrami
