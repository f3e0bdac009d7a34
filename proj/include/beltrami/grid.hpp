#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace beltrami {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : Error {
  using Error::Error;
};

/// Periodic box [-L/2, L/2)^3 sampled with n points per axis.
///
/// Physical arrays are stored x1-fastest: index = i1 + n*(i2 + n*i3), with
/// x_a = -L/2 + i_a*h. Spectral arrays use the real-to-complex half layout:
/// index = l1 + (n/2+1)*(i2 + n*i3), where l1 in [0, n/2] and i2, i3 map to
/// signed integers m in [-n/2, n/2).
struct GridSpec {
  int n = 64;
  double box_length = 2.0 * std::numbers::pi;

  GridSpec() = default;
  GridSpec(int points, double length) : n(points), box_length(length) { validate(); }

  void validate() const {
    if (n < 4 || (n & (n - 1)) != 0)
      throw Error("grid: n must be a power of two >= 4, got " + std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
      throw Error("grid: box length must be positive");
  }

  /// True when the box length is an integer multiple of 2*pi.
  bool two_pi_periodic(double tol = 1e-12) const {
    const double q = box_length / (2.0 * std::numbers::pi);
    return std::abs(q - std::round(q)) < tol * std::max(1.0, q);
  }

  /// Number of 2*pi periods in the box (rounded); unit wavenumber index.
  int periods() const { return static_cast<int>(std::lround(box_length / (2.0 * std::numbers::pi))); }

  double spacing() const { return box_length / n; }
  double cell_volume() const { return std::pow(spacing(), 3); }
  double box_volume() const { return std::pow(box_length, 3); }
  double fundamental() const { return 2.0 * std::numbers::pi / box_length; }
  /// Largest resolved wavenumber (Nyquist).
  double nyquist() const { return fundamental() * (n / 2); }
  /// Per-axis 2/3-rule cutoff: modes with |m| > n/3 are removed.
  int dealias_cutoff() const { return n / 3; }

  int nh() const { return n / 2 + 1; }
  std::size_t physical_size() const { return std::size_t(n) * n * n; }
  std::size_t spectral_size() const { return std::size_t(nh()) * n * n; }

  double coordinate(int i) const { return -0.5 * box_length + i * spacing(); }
  /// Signed mode number for a full-length axis index.
  int mode(int i) const { return i < n / 2 ? i : i - n; }
  double wavenumber(int m) const { return fundamental() * m; }

  std::size_t physical_index(int i1, int i2, int i3) const {
    return std::size_t(i1) + std::size_t(n) * (std::size_t(i2) + std::size_t(n) * i3);
  }
  std::size_t spectral_index(int l1, int i2, int i3) const {
    return std::size_t(l1) + std::size_t(nh()) * (std::size_t(i2) + std::size_t(n) * i3);
  }

  Eigen::Vector3d point(int i1, int i2, int i3) const {
    return {coordinate(i1), coordinate(i2), coordinate(i3)};
  }

  /// Grid index nearest to x (wrapped into the box).
  int nearest_index(double x) const {
    const long i = std::lround((x + 0.5 * box_length) / spacing());
    return static_cast<int>(((i % n) + n) % n);
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n == b.n && a.box_length == b.box_length;
  }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw GridMismatch("grid mismatch");
}

/// Visit every stored spectral coefficient with its signed mode numbers.
/// f(index, m1, m2, m3).
template <class F>
void for_each_mode(const GridSpec& g, F&& f) {
  const int n = g.n, nh = g.nh();
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3) {
    const int m3 = g.mode(i3);
    for (int i2 = 0; i2 < n; ++i2) {
      const int m2 = g.mode(i2);
      for (int l1 = 0; l1 < nh; ++l1, ++idx) f(idx, l1, m2, m3);
    }
  }
}

/// Visit every grid point. f(index, i1, i2, i3).
template <class F>
void for_each_point(const GridSpec& g, F&& f) {
  const int n = g.n;
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1, ++idx) f(idx, i1, i2, i3);
}

}  // namespace beltrami
