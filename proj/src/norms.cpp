#include "beltrami/norms.hpp"

#include <algorithm>
#include <cmath>

namespace beltrami {

namespace {

/// Pointwise Euclidean magnitude (absolute value for scalars).
template <int C>
Eigen::ArrayXd pointwise_abs(const Physical<C>& f) {
  if constexpr (C == 1) return f[0].abs();
  else return f.magnitude();
}

/// Trapezoid weights for int g d(log t) on the given nodes.
std::vector<double> log_trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = std::log(t[i + 1] / t[i]);
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

std::string describe(const TimeGrid& tg) {
  return "log-trapezoid, " + std::to_string(tg.per_decade) + " points/decade";
}

double coefficient_l1(const SpectralField& f) {
  const auto& w = wavenumbers(f.grid);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += (f[c].abs() * w.weight).sum();
  return s;
}

double block_symbol(double k2, int j) {
  const double k = std::sqrt(k2);
  return smooth_cutoff(k / std::ldexp(1.0, j)) - smooth_cutoff(k / std::ldexp(1.0, j - 1));
}

}  // namespace

template <int C>
double lp_norm(const Physical<C>& f, double p) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  const Eigen::ArrayXd a = pointwise_abs(f);
  if (std::isinf(p)) return a.maxCoeff();
  return std::pow(a.pow(p).sum() * f.grid.cell_volume(), 1.0 / p);
}

template <int C>
double sobolev_norm(const Spectral<C>& f, double r, bool homogeneous) {
  if (!(r >= 0.0)) throw Error("sobolev_norm: r must be >= 0");
  const auto& w = wavenumbers(f.grid);
  const Eigen::ArrayXd sym = homogeneous ? Eigen::ArrayXd(w.k2.pow(r)) : Eigen::ArrayXd((1.0 + w.k2).pow(r));
  double s = 0.0;
  for (int c = 0; c < C; ++c) s += (w.weight * sym * f[c].abs2()).sum();
  return std::sqrt(s * f.grid.box_volume());
}

template <int C>
Spectral<C> lp_block(const Spectral<C>& f, int j) {
  const DyadicRange r = dyadic_range(f.grid);
  if (j < r.j_min || j > r.j_max)
    throw Error("lp_block: j=" + std::to_string(j) + " outside resolvable range [" + std::to_string(r.j_min) + ", " +
                std::to_string(r.j_max) + "]");
  return radial_multiplier(f, [j](double k2) { return block_symbol(k2, j); });
}

DyadicRange dyadic_range(const GridSpec& g, bool dealiased) {
  const double top = std::sqrt(3.0) * g.fundamental() * (dealiased ? g.dealias_cutoff() : g.n / 2);
  return {int(std::floor(std::log2(g.fundamental()))) + 1, int(std::ceil(std::log2(top))) + 1};
}

void BesovParams::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error("besov: p and q must be in [1, inf]");
  if (!std::isfinite(s)) throw Error("besov: s must be finite");
}

std::vector<double> TimeGrid::points() const {
  validate();
  const double decades = std::log10(t_max / t_min);
  const int count = std::max(2, int(std::ceil(decades * per_decade - 1e-9)) + 1);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[std::size_t(i)] = t_min * std::pow(10.0, decades * i / (count - 1));
  return t;
}

void TimeGrid::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw Error("time grid: need 0 < t_min < t_max");
  if (per_decade < 1) throw Error("time grid: empty");
}

nlohmann::json NormReport::to_json() const {
  return {{"value", value},   {"method", method}, {"j_min", j_min},           {"j_max", j_max},
          {"t_min", t_min},   {"t_max", t_max},   {"quadrature", quadrature}, {"truncation", truncation}};
}

template <int C>
NormReport besov_dyadic(const Spectral<C>& f, const BesovParams& bp) {
  return besov_dyadic(f, bp, dyadic_range(f.grid));
}

template <int C>
NormReport besov_dyadic(const Spectral<C>& f, const BesovParams& bp, DyadicRange range) {
  bp.validate();
  std::vector<double> terms;
  for (int j = range.j_min; j <= range.j_max; ++j)
    terms.push_back(std::pow(2.0, j * bp.s) * lp_norm(inverse_transform(lp_block(f, j)), bp.p));
  NormReport rep;
  rep.method = "dyadic";
  rep.j_min = range.j_min;
  rep.j_max = range.j_max;
  rep.quadrature = "midpoint grid sum";
  if (std::isinf(bp.q)) {
    rep.value = *std::max_element(terms.begin(), terms.end());
  } else {
    double s = 0.0;
    for (double t : terms) s += std::pow(t, bp.q);
    rep.value = std::pow(s, 1.0 / bp.q);
  }
  if (rep.value > 0.0) rep.truncation = std::max(terms.front(), terms.back()) / rep.value;
  return rep;
}

template <int C>
NormReport besov_caloric(const Spectral<C>& f, const BesovParams& bp, const TimeGrid& tg) {
  bp.validate();
  if (!(bp.s < 0.0)) throw Error("besov_caloric: requires s < 0");
  const auto t = tg.points();
  std::vector<double> g(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    g[i] = std::pow(t[i], -0.5 * bp.s) * lp_norm(inverse_transform(heat_semigroup(f, t[i])), bp.p);
  NormReport rep;
  rep.method = "caloric";
  rep.t_min = tg.t_min;
  rep.t_max = tg.t_max;
  if (std::isinf(bp.q)) {
    rep.quadrature = "max over " + std::to_string(tg.per_decade) + " points/decade";
    rep.value = *std::max_element(g.begin(), g.end());
  } else {
    rep.quadrature = describe(tg);
    const auto w = log_trapezoid_weights(t);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * std::pow(g[i], bp.q);
    rep.value = std::pow(s, 1.0 / bp.q);
  }
  if (rep.value > 0.0) rep.truncation = std::max(g.front(), g.back()) / rep.value;
  return rep;
}

SpectralField omega_u0_spectral(const SpectralField& u0, double t, bool project) {
  const SpectralField v = heat_semigroup(u0, t);
  SpectralField om = convective_term(v, v, true);
  return project ? leray_project(om) : om;
}

PhysicalField omega_u0(const SpectralField& u0, double t, bool project) {
  return inverse_transform(omega_u0_spectral(u0, t, project));
}

nlohmann::json ENormReport::to_json() const {
  auto j = meta.to_json();
  j["integrated_besov"] = integrated_besov;
  j["square_function"] = square_function;
  return j;
}

ENormReport e_norm(const SpectralField& u0, const TimeGrid& tg) {
  return e_norm(u0, tg, dyadic_range(u0.grid, true));
}

ENormReport e_norm(const SpectralField& u0, const TimeGrid& tg, DyadicRange range) {
  const auto t = tg.points();
  const auto w = log_trapezoid_weights(t);
  const int nj = range.j_max - range.j_min + 1;
  std::vector<double> square(std::size_t(nj), 0.0);
  ENormReport rep;
  // sum_k w |c_k| bounds the sup norm, so blocks (and late times) below
  // kNegligible of the running total are skipped without computing them.
  constexpr double kNegligible = 1e-15;
  double peak = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const SpectralField F = omega_u0_spectral(u0, t[i], true);
    const double bound = coefficient_l1(F);
    peak = std::max(peak, bound);
    if (t[i] > 1.0 && bound <= kNegligible * peak) break;
    double b = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
      const SpectralField block = lp_block(F, j);
      if (coefficient_l1(block) <= kNegligible * bound) continue;
      const double m = lp_norm(inverse_transform(block), kInf);
      b += std::ldexp(m, -j);
      square[std::size_t(j - range.j_min)] += w[i] * m * m * t[i] * t[i];
    }
    rep.integrated_besov += w[i] * b * t[i];
  }
  for (int j = range.j_min; j <= range.j_max; ++j)
    rep.square_function += std::ldexp(std::sqrt(square[std::size_t(j - range.j_min)]), -j);
  rep.value = rep.integrated_besov + rep.square_function;
  rep.meta.value = rep.value;
  rep.meta.method = "e-norm";
  rep.meta.j_min = range.j_min;
  rep.meta.j_max = range.j_max;
  rep.meta.t_min = tg.t_min;
  rep.meta.t_max = tg.t_max;
  rep.meta.quadrature = describe(tg);
  return rep;
}

CgCheck check_cg_condition(const SpectralField& u0, double c_star, const TimeGrid& tg) {
  if (!(c_star > 0.0)) throw Error("check_cg_condition: C* must be positive");
  CgCheck c;
  c.lhs = e_norm(u0, tg).value;
  c.besov_inf2 = besov_dyadic(u0, {-1.0, kInf, 2.0}).value;
  c.rhs = std::exp(-c_star * std::pow(c.besov_inf2, 4)) / c_star;
  c.satisfied = c.lhs <= c.rhs;
  return c;
}

double commutator_norm(const GridSpec& g, const LocalizerSpec& loc, double lambda, double t, double p) {
  if (!(t >= 0.0)) throw Error("commutator_norm: t must be >= 0");
  if (t == 0.0) return 0.0;
  const SpectralField s = localized_beltrami(g, loc, lambda, default_periodization(loc));
  SpectralField d = heat_semigroup(s, t);
  d -= std::exp(-t * lambda * lambda) * s;
  return lp_norm(inverse_transform(d), p);
}

template <int C>
double weighted_sup(const Physical<C>& f, double gamma, Weight wt) {
  if (!(gamma >= 0.0)) throw Error("weighted_sup: gamma must be >= 0");
  const Eigen::ArrayXd a = pointwise_abs(f);
  double m = 0.0;
  for_each_point(f.grid, [&](std::size_t idx, int i1, int i2, int i3) {
    const double r2 = f.grid.point(i1, i2, i3).squaredNorm();
    const double w = wt == Weight::Linear ? std::pow(1.0 + std::sqrt(r2), gamma) : std::pow(1.0 + r2, gamma);
    m = std::max(m, w * a[Eigen::Index(idx)]);
  });
  return m;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit_exponent: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

#define BELTRAMI_INSTANTIATE(C)                                                             \
  template double lp_norm(const Physical<C>&, double);                                      \
  template double sobolev_norm(const Spectral<C>&, double, bool);                           \
  template Spectral<C> lp_block(const Spectral<C>&, int);                                   \
  template NormReport besov_dyadic(const Spectral<C>&, const BesovParams&);                 \
  template NormReport besov_dyadic(const Spectral<C>&, const BesovParams&, DyadicRange);    \
  template NormReport besov_caloric(const Spectral<C>&, const BesovParams&, const TimeGrid&); \
  template double weighted_sup(const Physical<C>&, double, Weight);

BELTRAMI_INSTANTIATE(1)
BELTRAMI_INSTANTIATE(3)
#undef BELTRAMI_INSTANTIATE

}  // namespace beltrami
