#include "beltrami/fields.hpp"

#include <cmath>
#include <numbers>

#include "beltrami/transform.hpp"

namespace beltrami {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

/// Integer grid mode of a physical frequency, or throws.
int grid_mode(const GridSpec& g, double freq, const char* what) {
  const double m = freq * g.box_length / (2.0 * kPi);
  const double mr = std::round(m);
  if (std::abs(m - mr) > 1e-9 * std::max(1.0, std::abs(m)))
    throw Error(std::string(what) + ": frequency is not a mode of the box (box must be a multiple of 2 pi / frequency)");
  return static_cast<int>(mr);
}

/// Coefficients of phi_per(x) e^{i q.x}: Phi(|k - q|) / box^3.
Eigen::ArrayXcd shifted_spectrum(const GridSpec& g, const LocalizerSpec& loc, const Eigen::Vector3d& q) {
  Eigen::ArrayXcd out(Eigen::Index(g.spectral_size()));
  const double inv_vol = 1.0 / g.box_volume();
  for_each_mode(g, [&](std::size_t idx, int l1, int m2, int m3) {
    const Eigen::Vector3d k(g.wavenumber(l1), g.wavenumber(m2), g.wavenumber(m3));
    out[Eigen::Index(idx)] = loc.fourier((k - q).norm()) * inv_vol;
  });
  return out;
}

}  // namespace

Eigen::Vector3d eval_B_N(double N, const Eigen::Vector3d& x) {
  return {std::sin(N * x[2]), std::cos(N * x[2]), 0.0};
}

Eigen::Vector3d eval_W(const Eigen::Vector3d& x) {
  return {std::sin(x[1]), std::sin(x[2]), std::sin(x[0])};
}

void BeltramiSpec::validate() const {
  if (!(frequency >= 1.0)) throw Error("beltrami: frequency must be >= 1");
}

void LocalizerSpec::validate() const {
  if (!(dilation > 0.0)) throw Error("localizer: dilation L must be positive");
  if (kind == Kind::InversePower && !(alpha >= 1.0)) throw Error("localizer: alpha must be >= 1");
  if (kind == Kind::Gaussian && !(width > 0.0)) throw Error("localizer: gaussian width must be positive");
}

double LocalizerSpec::value(const Eigen::Vector3d& x) const {
  const double r2 = x.squaredNorm() / (dilation * dilation);
  if (kind == Kind::Gaussian) return std::exp(-r2 / width);
  return std::pow(1.0 + r2, -alpha);
}

Eigen::Vector3d LocalizerSpec::gradient(const Eigen::Vector3d& x) const {
  const double L2 = dilation * dilation;
  const double r2 = x.squaredNorm() / L2;
  if (kind == Kind::Gaussian) return (-2.0 / (width * L2) * std::exp(-r2 / width)) * x;
  return (-2.0 * alpha / L2 * std::pow(1.0 + r2, -alpha - 1.0)) * x;
}

Eigen::Matrix3d LocalizerSpec::hessian(const Eigen::Vector3d& x) const {
  const double L2 = dilation * dilation;
  const double r2 = x.squaredNorm() / L2;
  const Eigen::Matrix3d xx = x * x.transpose();
  if (kind == Kind::Gaussian) {
    const double w = width * L2;
    return std::exp(-r2 / width) * (-2.0 / w * Eigen::Matrix3d::Identity() + 4.0 / (w * w) * xx);
  }
  const double s = 1.0 + r2;
  return -2.0 * alpha / L2 * std::pow(s, -alpha - 1.0) * Eigen::Matrix3d::Identity() +
         4.0 * alpha * (alpha + 1.0) / (L2 * L2) * std::pow(s, -alpha - 2.0) * xx;
}

double LocalizerSpec::fourier(double k) const {
  const double L = dilation;
  if (kind == Kind::Gaussian) {
    const double s = width * L * L;
    return std::pow(kPi * s, 1.5) * std::exp(-0.25 * s * k * k);
  }
  if (!has_fourier()) throw Error("localizer: inverse power with alpha <= 3/2 has no Fourier transform");
  const double q = L * k;
  const double nu = alpha - 1.5;
  double phi_hat;
  if (std::abs(alpha - 2.0) < 1e-15) {
    phi_hat = kPi * kPi * std::exp(-q);
  } else if (q < 1e-8) {
    phi_hat = std::pow(kPi, 1.5) * std::tgamma(nu) / std::tgamma(alpha);
  } else if (q > 700.0) {
    phi_hat = 0.0;
  } else {
    phi_hat = std::pow(2.0 * kPi, 1.5) * std::pow(2.0, 1.0 - alpha) / std::tgamma(alpha) * std::pow(q, nu) *
              std::cyl_bessel_k(nu, q);
  }
  return L * L * L * phi_hat;
}

double DatumConfig::rho() const { return std::pow(double(N), -beta); }

void DatumConfig::validate() const {
  if (!(nu > 0.0)) throw Error("datum: nu must be positive");
  if (!(T > 0.0)) throw Error("datum: T must be positive");
  if (!(L > 0.0)) throw Error("datum: L must be positive");
  if (!(M > 0.0)) throw Error("datum: M must be positive");
  if (N < 1) throw Error("datum: N must be >= 1");
  if (!(alpha >= 1.0)) throw Error("datum: alpha must be >= 1");
  if (!(beta > 0.0)) throw Error("datum: beta must be positive");
  if (r < 0) throw Error("datum: r must be >= 0");
}

void require_resolved(const GridSpec& g, double N) {
  const int m = grid_mode(g, N, "resolution");
  if (4 * m > g.n)
    throw Error("resolution insufficient: frequency " + std::to_string(N) + " is mode " + std::to_string(m) +
                " but n=" + std::to_string(g.n) + " needs >= 4 points per period");
}

SpectralField beltrami_field(const GridSpec& g, double N) {
  const int m = grid_mode(g, N, "beltrami_field");
  if (2 * m >= g.n) throw Error("beltrami_field: frequency at or beyond Nyquist");
  SpectralField out(g);
  // sin(N x3) = (e^{iNx3} - e^{-iNx3}) / 2i, cos(N x3) = (e^{iNx3} + e^{-iNx3}) / 2
  const auto up = g.spectral_index(0, 0, m);
  const auto dn = g.spectral_index(0, 0, (g.n - m) % g.n);
  out[0][Eigen::Index(up)] += 1.0 / (2.0 * I);
  out[0][Eigen::Index(dn)] -= 1.0 / (2.0 * I);
  out[1][Eigen::Index(up)] += 0.5;
  out[1][Eigen::Index(dn)] += 0.5;
  return out;
}

SpectralField w_field(const GridSpec& g) {
  const int m = grid_mode(g, 1.0, "w_field");
  SpectralField out(g);
  // component c is sin(x_axis) with axis = (c + 1) % 3
  for (int c = 0; c < 3; ++c) {
    const int axis = (c + 1) % 3;
    std::array<int, 3> up{0, 0, 0}, dn{0, 0, 0};
    up[axis] = m;
    dn[axis] = g.n - m;
    if (axis == 0) {
      // only non-negative m1 is stored; sin(x1) = Im e^{ix1}, coefficient at +m is 1/(2i)
      out[c][Eigen::Index(g.spectral_index(m, 0, 0))] = 1.0 / (2.0 * I);
    } else {
      out[c][Eigen::Index(g.spectral_index(up[0], up[1], up[2]))] = 1.0 / (2.0 * I);
      out[c][Eigen::Index(g.spectral_index(dn[0], dn[1], dn[2]))] = -1.0 / (2.0 * I);
    }
  }
  return out;
}

PhysicalScalar sample_localizer(const GridSpec& g, const LocalizerSpec& loc) {
  PhysicalScalar out(g);
  for_each_point(g, [&](std::size_t idx, int i1, int i2, int i3) {
    out[0][Eigen::Index(idx)] = loc.value(g.point(i1, i2, i3));
  });
  return out;
}

Periodization default_periodization(const LocalizerSpec& loc) {
  return loc.has_fourier() ? Periodization::Poisson : Periodization::Sampled;
}

SpectralScalar localizer_spectrum(const GridSpec& g, const LocalizerSpec& loc, Periodization mode) {
  loc.validate();
  if (mode == Periodization::Sampled) return forward_transform(sample_localizer(g, loc));
  SpectralScalar out(g);
  out[0] = shifted_spectrum(g, loc, Eigen::Vector3d::Zero());
  return out;
}

SpectralField localized_beltrami(const GridSpec& g, const LocalizerSpec& loc, double N, Periodization mode) {
  loc.validate();
  if (mode == Periodization::Sampled)
    return forward_transform(sample(g, [&](const Eigen::Vector3d& x) { return loc.value(x) * eval_B_N(N, x); }));
  grid_mode(g, N, "localized_beltrami");
  const Eigen::ArrayXcd sp = shifted_spectrum(g, loc, {0.0, 0.0, N});
  const Eigen::ArrayXcd sm = shifted_spectrum(g, loc, {0.0, 0.0, -N});
  SpectralField out(g);
  out[0] = (sp - sm) / (2.0 * I);
  out[1] = 0.5 * (sp + sm);
  return out;
}

SpectralField localized_w(const GridSpec& g, const LocalizerSpec& loc, Periodization mode) {
  loc.validate();
  if (mode == Periodization::Sampled)
    return forward_transform(sample(g, [&](const Eigen::Vector3d& x) { return loc.value(x) * eval_W(x); }));
  grid_mode(g, 1.0, "localized_w");
  SpectralField out(g);
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d q = Eigen::Vector3d::Zero();
    q[(c + 1) % 3] = 1.0;
    out[c] = (shifted_spectrum(g, loc, q) - shifted_spectrum(g, loc, -q)) / (2.0 * I);
  }
  return out;
}

FieldPair build_u01(const GridSpec& g, int N, double alpha, Periodization mode) {
  require_resolved(g, N);
  const auto loc = LocalizerSpec::inverse_power(alpha);
  SpectralField u = curl(localized_beltrami(g, loc, N, mode));
  SpectralField w = curl(u);
  return {std::move(u), std::move(w)};
}

FieldPair build_u01(const GridSpec& g, int N, double alpha) {
  return build_u01(g, N, alpha, default_periodization(LocalizerSpec::inverse_power(alpha)));
}

PhysicalField u01_analytic(const GridSpec& g, int N, double alpha) {
  const auto loc = LocalizerSpec::inverse_power(alpha);
  return sample(g, [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const Eigen::Vector3d B = eval_B_N(N, x);
    return N * loc.value(x) * B + loc.gradient(x).cross(B);
  });
}

PhysicalField omega01_analytic(const GridSpec& g, int N, double alpha) {
  const auto loc = LocalizerSpec::inverse_power(alpha);
  return sample(g, [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const Eigen::Vector3d B = eval_B_N(N, x);
    const Eigen::Vector3d dB3(N * std::cos(N * x[2]), -N * std::sin(N * x[2]), 0.0);  // d/dx3 B_N
    const Eigen::Vector3d grad = loc.gradient(x);
    const Eigen::Matrix3d H = loc.hessian(x);
    return double(N) * N * loc.value(x) * B + N * grad.cross(B) + H * B - H.trace() * B - grad[2] * dB3;
  });
}

SpectralField curl_curl_psi_w(const GridSpec& g, double nu_t) {
  const auto loc = LocalizerSpec::gaussian(nu_t);
  return curl(curl(localized_w(g, loc, Periodization::Poisson)));
}

Eigen::Vector3d curl_curl_psi_w_at(const Eigen::Vector3d& x, double nu_t) {
  const auto loc = LocalizerSpec::gaussian(nu_t);
  const Eigen::Vector3d W = eval_W(x);
  const Eigen::Vector3d curlW(-std::cos(x[2]), -std::cos(x[0]), -std::cos(x[1]));
  Eigen::Matrix3d gradW = Eigen::Matrix3d::Zero();  // gradW(i, j) = d W_i / d x_j
  gradW(0, 1) = std::cos(x[1]);
  gradW(1, 2) = std::cos(x[2]);
  gradW(2, 0) = std::cos(x[0]);
  const double psi = loc.value(x);
  const Eigen::Vector3d gpsi = loc.gradient(x);
  const Eigen::Matrix3d H = loc.hessian(x);
  return psi * W + gpsi.cross(curlW) + H * W - H.trace() * W - gradW * gpsi;
}

FieldPair build_u02_omega02(const GridSpec& g, double nu, double T, double guard) {
  if (!(nu > 0.0) || !(T > 0.0)) throw Error("build_u02_omega02: nu and T must be positive");
  const double nu_t = nu * T;
  const auto loc = LocalizerSpec::gaussian(nu_t);
  const SpectralField c = curl(localized_w(g, loc, Periodization::Poisson));
  SpectralField u = inverse_heat(c, nu_t, guard);
  SpectralField w = curl(u);
  return {std::move(u), std::move(w)};
}

Theorem2Datum build_theorem2_datum(const GridSpec& g, const DatumConfig& cfg, double second_amplitude) {
  cfg.validate();
  Theorem2Datum d;
  d.rho = cfg.rho();
  d.first = build_u01(g, cfg.N, cfg.alpha);
  d.second = build_u02_omega02(g, cfg.nu, cfg.T);
  d.second.u *= second_amplitude;
  d.second.omega *= second_amplitude;
  d.total.u = d.rho * (d.first.u + d.second.u);
  d.total.omega = d.rho * (d.first.omega + d.second.omega);
  return d;
}

double theorem1_box(double L) { return 2.0 * kPi * std::ceil(8.0 * L / (2.0 * kPi) - 1e-12); }

SpectralField build_theorem1_datum(const GridSpec& g, double M, double L, double lambda, double alpha) {
  if (!(L > 0.0) || 8.0 * L > g.box_length * (1.0 + 1e-12))
    throw Error("theorem1 datum: box too small for requested L (need L <= box/8)");
  require_resolved(g, lambda);
  const auto loc = LocalizerSpec::inverse_power(alpha, L);
  SpectralField u = curl(localized_beltrami(g, loc, lambda, default_periodization(loc)));
  u *= M;
  return u;
}

PhysicalField theorem1_analytic(const GridSpec& g, double M, double L, double lambda, double alpha) {
  const auto loc = LocalizerSpec::inverse_power(alpha, L);
  return sample(g, [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const Eigen::Vector3d B = eval_B_N(lambda, x);
    return M * (lambda * loc.value(x) * B + loc.gradient(x).cross(B));
  });
}

double f_N(double N, double nu, double t) {
  if (t < 0.0) throw Error("f_N: t must be non-negative");
  const double x = N * std::sqrt(0.5 * nu * t);
  if (x < 1e-6) return 1.0 - 2.0 * nu * t * N * N / 12.0;
  return std::sqrt(kPi / (2.0 * nu * t)) * std::erf(x) / N;
}

}  // namespace beltrami
