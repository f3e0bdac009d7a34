#include "beltrami/spectral_ops.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace beltrami {

namespace {
const Complex I{0.0, 1.0};
}

const Wavenumbers& wavenumbers(const GridSpec& g) {
  thread_local std::map<std::pair<int, double>, Wavenumbers> cache;
  auto [it, inserted] = cache.try_emplace({g.n, g.box_length});
  Wavenumbers& w = it->second;
  if (!inserted) return w;

  const auto size = Eigen::Index(g.spectral_size());
  for (auto& a : w.k) a.resize(size);
  w.k2.resize(size);
  w.kd2.resize(size);
  w.weight.resize(size);
  w.dealias.resize(size);
  const int half = g.n / 2, cut = g.dealias_cutoff();
  for_each_mode(g, [&](std::size_t idx, int l1, int m2, int m3) {
    const auto i = Eigen::Index(idx);
    const int m1 = l1;
    const double k1 = g.wavenumber(m1), k2 = g.wavenumber(m2), k3 = g.wavenumber(m3);
    w.k[0][i] = (m1 == half) ? 0.0 : k1;
    w.k[1][i] = (m2 == -half) ? 0.0 : k2;
    w.k[2][i] = (m3 == -half) ? 0.0 : k3;
    w.k2[i] = k1 * k1 + k2 * k2 + k3 * k3;
    w.kd2[i] = w.k[0][i] * w.k[0][i] + w.k[1][i] * w.k[1][i] + w.k[2][i] * w.k[2][i];
    w.weight[i] = hermitian_weight(g, l1);
    w.dealias[i] = (m1 <= cut && std::abs(m2) <= cut && std::abs(m3) <= cut) ? 1.0 : 0.0;
  });
  w.inv_kd2 = (w.kd2 > 0.0).select(w.kd2.inverse(), 0.0);
  return w;
}

SpectralField curl(const SpectralField& f) {
  const auto& w = wavenumbers(f.grid);
  SpectralField out(f.grid);
  out[0] = I * (w.k[1] * f[2] - w.k[2] * f[1]);
  out[1] = I * (w.k[2] * f[0] - w.k[0] * f[2]);
  out[2] = I * (w.k[0] * f[1] - w.k[1] * f[0]);
  return out;
}

SpectralScalar divergence(const SpectralField& f) {
  const auto& w = wavenumbers(f.grid);
  SpectralScalar out(f.grid);
  out[0] = I * (w.k[0] * f[0] + w.k[1] * f[1] + w.k[2] * f[2]);
  return out;
}

SpectralField gradient(const SpectralScalar& s) {
  const auto& w = wavenumbers(s.grid);
  SpectralField out(s.grid);
  for (int a = 0; a < 3; ++a) out[a] = I * w.k[a] * s[0];
  return out;
}

template <int C>
Spectral<C> derivative(const Spectral<C>& f, int axis) {
  const auto& w = wavenumbers(f.grid);
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) out[c] = I * w.k[axis] * f[c];
  return out;
}

template <int C>
Spectral<C> laplacian(const Spectral<C>& f) {
  const auto& w = wavenumbers(f.grid);
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) out[c] = -w.k2 * f[c];
  return out;
}

SpectralField leray_project(const SpectralField& f) {
  const auto& w = wavenumbers(f.grid);
  const Eigen::ArrayXcd kdotf = (w.k[0] * f[0] + w.k[1] * f[1] + w.k[2] * f[2]) * w.inv_kd2;
  SpectralField out(f.grid);
  for (int a = 0; a < 3; ++a) out[a] = f[a] - w.k[a] * kdotf;
  return out;
}

void dealias_project(SpectralField& f) {
  const auto& w = wavenumbers(f.grid);
  const Eigen::Index size = f[0].size();
  Complex* c0 = f[0].data();
  Complex* c1 = f[1].data();
  Complex* c2 = f[2].data();
  for (Eigen::Index i = 0; i < size; ++i) {
    if (w.dealias[i] == 0.0) {
      c0[i] = c1[i] = c2[i] = 0.0;
      continue;
    }
    const double k0 = w.k[0][i], k1 = w.k[1][i], k2 = w.k[2][i];
    const Complex p = (k0 * c0[i] + k1 * c1[i] + k2 * c2[i]) * w.inv_kd2[i];
    c0[i] -= k0 * p;
    c1[i] -= k1 * p;
    c2[i] -= k2 * p;
  }
}

template <int C>
Spectral<C> heat_semigroup(const Spectral<C>& f, double s) {
  if (s < 0.0) return inverse_heat(f, -s);
  if (s == 0.0) return f;
  const auto& w = wavenumbers(f.grid);
  const Eigen::ArrayXd m = (-s * w.k2).exp();
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) out[c] = f[c] * m;
  return out;
}

template <int C>
Spectral<C> inverse_heat(const Spectral<C>& f, double s, double guard) {
  if (!(s > 0.0)) throw Error("inverse_heat: s must be positive");
  const auto& w = wavenumbers(f.grid);
  const double ceiling = guard * f.max_abs();
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) {
    out[c].resize(f[c].size());
    for (Eigen::Index i = 0; i < f[c].size(); ++i) {
      const Complex v = f[c][i];
      if (v == 0.0) {
        out[c][i] = 0.0;
        continue;
      }
      // log-domain comparison so that overflow is reported, not propagated
      const double log_amp = std::log(std::abs(v)) + s * w.k2[i];
      if (!(log_amp <= std::log(ceiling)))
        throw GuardExceeded("inverse_heat: amplification exceeds guard at |k|^2=" + std::to_string(w.k2[i]));
      out[c][i] = v * std::exp(s * w.k2[i]);
    }
  }
  return out;
}

template <int C>
Spectral<C> dealias(const Spectral<C>& f) {
  const auto& w = wavenumbers(f.grid);
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) out[c] = f[c] * w.dealias;
  return out;
}

SpectralField biot_savart(const SpectralField& vorticity) {
  const double mean = std::max({std::abs(vorticity[0][0]), std::abs(vorticity[1][0]), std::abs(vorticity[2][0])});
  if (mean > 1e-12 * std::max(1.0, vorticity.max_abs()))
    throw Error("biot_savart: vorticity has nonzero mean");
  const auto& w = wavenumbers(vorticity.grid);
  SpectralField out = curl(vorticity);
  for (int a = 0; a < 3; ++a) out[a] *= w.inv_kd2;
  return out;
}

double smooth_cutoff(double r) {
  auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double a = g(1.0 - r), b = g(r - 0.5);
  return a / (a + b);
}

template <int C>
Spectral<C> low_pass(const Spectral<C>& f, double rho) {
  return radial_multiplier(f, [rho](double k2) { return smooth_cutoff(std::sqrt(k2) / rho); });
}

template <int C>
Spectral<C> high_pass(const Spectral<C>& f, double rho) {
  return radial_multiplier(f, [rho](double k2) { return 1.0 - smooth_cutoff(std::sqrt(k2) / rho); });
}

PhysicalField cross(const PhysicalField& a, const PhysicalField& b) {
  require_same_grid(a.grid, b.grid);
  PhysicalField out(a.grid);
  out[0] = a[1] * b[2] - a[2] * b[1];
  out[1] = a[2] * b[0] - a[0] * b[2];
  out[2] = a[0] * b[1] - a[1] * b[0];
  return out;
}

PhysicalScalar dot(const PhysicalField& a, const PhysicalField& b) {
  require_same_grid(a.grid, b.grid);
  PhysicalScalar out(a.grid);
  out[0] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return out;
}

SpectralField convective_term(const SpectralField& a, const SpectralField& b, bool dealiased) {
  require_same_grid(a.grid, b.grid);
  const SpectralField as = dealiased ? dealias(a) : a;
  const SpectralField bs = dealiased ? dealias(b) : b;
  const PhysicalField ap = inverse_transform(as);
  PhysicalField acc(a.grid);
  for (int axis = 0; axis < 3; ++axis) {
    const PhysicalField db = inverse_transform(derivative(bs, axis));
    for (int c = 0; c < 3; ++c) acc[c] += ap[axis] * db[c];
  }
  SpectralField out = forward_transform(acc);
  return dealiased ? dealias(out) : out;
}

template <int C>
double inner_product(const Spectral<C>& f, const Spectral<C>& g) {
  require_same_grid(f.grid, g.grid);
  const auto& w = wavenumbers(f.grid);
  double s = 0.0;
  for (int c = 0; c < C; ++c) s += (w.weight * (f[c] * g[c].conjugate()).real()).sum();
  return s * f.grid.box_volume();
}

SpectralScalar component(const SpectralField& f, int c) {
  SpectralScalar s(f.grid);
  s[0] = f[c];
  return s;
}

#define BELTRAMI_INSTANTIATE(C)                                                   \
  template Spectral<C> derivative(const Spectral<C>&, int);                       \
  template Spectral<C> laplacian(const Spectral<C>&);                             \
  template Spectral<C> heat_semigroup(const Spectral<C>&, double);                \
  template Spectral<C> inverse_heat(const Spectral<C>&, double, double);          \
  template Spectral<C> dealias(const Spectral<C>&);                               \
  template Spectral<C> low_pass(const Spectral<C>&, double);                      \
  template Spectral<C> high_pass(const Spectral<C>&, double);                     \
  template double inner_product(const Spectral<C>&, const Spectral<C>&);

BELTRAMI_INSTANTIATE(1)
BELTRAMI_INSTANTIATE(3)
#undef BELTRAMI_INSTANTIATE

}  // namespace beltrami
