#include "beltrami/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>


namespace beltrami {

namespace {

using cd = std::complex<double>;

Eigen::Vector3d wrap(const GridSpec& g, Eigen::Vector3d x) {
  const double L = g.box_length;
  for (int a = 0; a < 3; ++a) x[a] -= L * std::floor((x[a] + 0.5 * L) / L);
  return x;
}

bool near_boundary(const GridSpec& g, const Eigen::Vector3d& x) {
  const double limit = 0.5 * g.box_length - 2.0 * g.spacing();
  return x.cwiseAbs().maxCoeff() > limit;
}

/// Minimum-image distance on the periodic box.
double periodic_distance(const GridSpec& g, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return wrap(g, a - b).norm();
}

}  // namespace

std::string to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::Hyperbolic: return "hyperbolic";
    case ZeroClass::NonHyperbolic: return "non-hyperbolic";
    case ZeroClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

nlohmann::json ZeroRecord::to_json(double t) const {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : eigenvalues) ev.push_back({{"re", e.real()}, {"im", e.imag()}});
  return {{"t", t},
          {"x", location[0]},
          {"y", location[1]},
          {"z", location[2]},
          {"residual", residual},
          {"eigenvalues", ev},
          {"class", to_string(kind)},
          {"boundary_flag", boundary}};
}

void ScanConfig::validate() const {
  if (stride < 1) throw Error("scan: stride must be >= 1");
  if (!(newton_tol > 0.0) || !(tol_det > 0.0) || !(tol_re > 0.0)) throw Error("scan: tolerances must be positive");
  if (max_iter < 1) throw Error("scan: max_iter must be >= 1");
  if (!(seed_fraction > 0.0) || !(seed_percentile > 0.0 && seed_percentile < 1.0))
    throw Error("scan: seed threshold parameters out of range");
}

OffGridEvaluator::OffGridEvaluator(const SpectralField& f) : f_(f) {
  for_each_mode(f.grid, [&](std::size_t idx, int l1, int m2, int m3) {
    const auto i = Eigen::Index(idx);
    if (f[0][i] != 0.0 || f[1][i] != 0.0 || f[2][i] != 0.0)
      band_ = std::max({band_, l1, std::abs(m2), std::abs(m3)});
  });
}

void OffGridEvaluator::evaluate(const Eigen::Vector3d& x, Eigen::Vector3d& v, Eigen::Matrix3d* jac) const {
  const GridSpec& g = f_.grid;
  const int n = g.n, nh = g.nh();
  const auto un = static_cast<std::size_t>(n), unh = static_cast<std::size_t>(nh);
  std::vector<cd> e1(unh), e2(un), e3(un);
  std::vector<double> k1(unh), k2(un), k3(un);
  for (int l = 0; l < nh; ++l) {
    e1[std::size_t(l)] = std::polar(hermitian_weight(g, l), g.wavenumber(l) * x[0]);
    k1[std::size_t(l)] = (l == n / 2) ? 0.0 : g.wavenumber(l);
  }
  for (int i = 0; i < n; ++i) {
    const int m = g.mode(i);
    e2[std::size_t(i)] = std::polar(1.0, g.wavenumber(m) * x[1]);
    e3[std::size_t(i)] = std::polar(1.0, g.wavenumber(m) * x[2]);
    k2[std::size_t(i)] = k3[std::size_t(i)] = (m == -n / 2) ? 0.0 : g.wavenumber(m);
  }
  // only rows with |m| <= band_ carry coefficients
  std::vector<int> rows;
  for (int i = 0; i < n; ++i)
    if (std::abs(g.mode(i)) <= band_) rows.push_back(i);
  const int lmax = std::min(nh - 1, band_);
  std::array<cd, 3> val{}, d1{}, d2{}, d3{};
  for (int c = 0; c < 3; ++c) {
    const cd* data = f_[c].data();
    for (int i3 : rows) {
      cd row3{}, row3_d1{}, row3_d2{};
      for (int i2 : rows) {
        const cd* line = data + g.spectral_index(0, i2, i3);
        cd s{}, s1{};
        for (int l = 0; l <= lmax; ++l) {
          const cd t = line[l] * e1[std::size_t(l)];
          s += t;
          s1 += k1[std::size_t(l)] * t;
        }
        row3 += e2[std::size_t(i2)] * s;
        row3_d1 += e2[std::size_t(i2)] * s1;
        row3_d2 += k2[std::size_t(i2)] * e2[std::size_t(i2)] * s;
      }
      val[c] += e3[std::size_t(i3)] * row3;
      d1[c] += e3[std::size_t(i3)] * row3_d1;
      d2[c] += e3[std::size_t(i3)] * row3_d2;
      d3[c] += k3[std::size_t(i3)] * e3[std::size_t(i3)] * row3;
    }
  }
  // derivative of Re(c e^{ikx}) is Re(i k c e^{ikx}) = -k Im(c e^{ikx})
  for (int c = 0; c < 3; ++c) {
    v[c] = val[c].real();
    if (jac) {
      (*jac)(c, 0) = -d1[c].imag();
      (*jac)(c, 1) = -d2[c].imag();
      (*jac)(c, 2) = -d3[c].imag();
    }
  }
}

Eigen::Vector3d OffGridEvaluator::value(const Eigen::Vector3d& x) const {
  Eigen::Vector3d v;
  evaluate(x, v, nullptr);
  return v;
}

Eigen::Matrix3d OffGridEvaluator::jacobian(const Eigen::Vector3d& x) const {
  Eigen::Vector3d v;
  Eigen::Matrix3d j;
  evaluate(x, v, &j);
  return j;
}

Eigen::Vector3d eval_off_grid(const SpectralField& f, const Eigen::Vector3d& x) {
  return OffGridEvaluator(f).value(x);
}

Eigen::Matrix3d jacobian_at(const SpectralField& f, const Eigen::Vector3d& x) {
  return OffGridEvaluator(f).jacobian(x);
}

std::array<cd, 3> cubic_eigenvalues(const Eigen::Matrix3d& J) {
  // lambda^3 + a lambda^2 + b lambda + c
  const double a = -J.trace();
  const double b = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0) + J(0, 0) * J(2, 2) - J(0, 2) * J(2, 0) +
                   J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1);
  const double c = -J.determinant();
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  auto polish = [&](double r) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((r + a) * r + b) * r + c;
      const double df = (3.0 * r + 2.0 * a) * r + b;
      if (df == 0.0) break;
      const double nr = r - f / df;
      if (!std::isfinite(nr) || std::abs(((nr + a) * nr + b) * nr + c) >= std::abs(f)) break;
      r = nr;
    }
    return r;
  };

  std::array<cd, 3> ev;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-0.5 * q + s), v = std::cbrt(-0.5 * q - s);
    const double r = polish(u + v + shift);
    // remaining quadratic from deflation: lambda^2 + (a + r) lambda + (b + r (a + r))
    const double qa = a + r, qb = b + r * qa;
    const double re = -0.5 * qa;
    const double im = std::sqrt(std::max(0.0, qb - re * re));
    ev = {cd(r, 0.0), cd(re, im), cd(re, -im)};
  } else if (p == 0.0) {
    ev = {cd(shift, 0.0), cd(shift, 0.0), cd(shift, 0.0)};
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      ev[std::size_t(k)] = cd(polish(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift), 0.0);
  }
  return ev;
}

Classification classify(const Eigen::Matrix3d& jac, double tol_det, double tol_re) {
  Classification out;
  out.eigenvalues = cubic_eigenvalues(jac);
  double radius = 0.0, min_re = std::numeric_limits<double>::infinity();
  for (const auto& e : out.eigenvalues) {
    radius = std::max(radius, std::abs(e));
    min_re = std::min(min_re, std::abs(e.real()));
  }
  if (radius == 0.0 || std::abs(jac.determinant()) < tol_det * radius * radius * radius)
    out.kind = ZeroClass::Degenerate;
  else if (min_re > tol_re * radius)
    out.kind = ZeroClass::Hyperbolic;
  else
    out.kind = ZeroClass::NonHyperbolic;
  return out;
}

std::optional<ZeroRecord> refine_zero(const OffGridEvaluator& ev, const Eigen::Vector3d& x0, const ScanConfig& cfg,
                                      double scale) {
  const GridSpec& g = ev.grid();
  const double reach = 3.0 * cfg.stride * g.spacing();
  Eigen::Vector3d x = x0, v;
  Eigen::Matrix3d J;
  ev.evaluate(x, v, &J);
  double r = v.norm();
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (r <= cfg.newton_tol * scale) break;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(J);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector3d dx = lu.solve(v);
    double lambda = 1.0;
    Eigen::Vector3d xn, vn;
    Eigen::Matrix3d Jn;
    for (int half = 0; half < 20; ++half, lambda *= 0.5) {
      xn = x - lambda * dx;
      ev.evaluate(xn, vn, &Jn);
      if (vn.norm() < r) break;
    }
    if (!(vn.norm() < r)) return std::nullopt;
    x = xn;
    v = vn;
    J = Jn;
    r = v.norm();
    if (periodic_distance(g, x, x0) > reach) return std::nullopt;
  }
  if (!(r <= cfg.newton_tol * scale)) return std::nullopt;
  ZeroRecord z;
  z.location = wrap(g, x);
  z.jacobian = J;
  const Classification c = classify(J, cfg.tol_det, cfg.tol_re);
  z.eigenvalues = c.eigenvalues;
  z.kind = c.kind;
  z.residual = r;
  z.boundary = near_boundary(g, z.location);
  return z;
}

std::vector<ZeroRecord> scan_zeros(const SpectralField& f, const ScanConfig& cfg, ScanStats* stats) {
  cfg.validate();
  const GridSpec& g = f.grid;
  const int n = g.n;
  const PhysicalField p = inverse_transform(f);
  const Eigen::ArrayXd mag = p.magnitude();
  const double scale = mag.maxCoeff();
  ScanStats st;
  std::vector<ZeroRecord> found;
  if (scale == 0.0) {
    if (stats) *stats = st;
    return found;
  }

  std::vector<double> sorted(mag.data(), mag.data() + mag.size());
  const auto nth = sorted.begin() + std::ptrdiff_t(cfg.seed_percentile * double(sorted.size()));
  std::nth_element(sorted.begin(), nth, sorted.end());
  const double threshold = cfg.seed_fraction * *nth;

  const OffGridEvaluator ev(f);
  const double dedup = cfg.dedup_radius > 0.0 ? cfg.dedup_radius : g.spacing();
  const int s = cfg.stride;
  for (int i3 = 0; i3 < n; i3 += s)
    for (int i2 = 0; i2 < n; i2 += s)
      for (int i1 = 0; i1 < n; i1 += s) {
        const Eigen::Vector3d centre = g.point(i1, i2, i3) + Eigen::Vector3d::Constant(0.5 * s * g.spacing());
        if (cfg.region > 0.0 && centre.norm() > cfg.region + 2.0 * s * g.spacing()) continue;
        // a cell seeds Newton if every component changes sign over its corners, or its
        // smallest corner magnitude falls below the percentile threshold
        std::array<bool, 3> pos{}, neg{};
        double lo = std::numeric_limits<double>::infinity();
        for (int c = 0; c < 8; ++c) {
          const auto idx = Eigen::Index(
              g.physical_index((i1 + (c & 1) * s) % n, (i2 + ((c >> 1) & 1) * s) % n, (i3 + ((c >> 2) & 1) * s) % n));
          lo = std::min(lo, mag[idx]);
          for (int a = 0; a < 3; ++a) {
            pos[a] = pos[a] || p[a][idx] >= 0.0;
            neg[a] = neg[a] || p[a][idx] <= 0.0;
          }
        }
        const bool straddles = pos[0] && neg[0] && pos[1] && neg[1] && pos[2] && neg[2];
        if (!straddles && !(lo < threshold)) continue;
        const Eigen::Vector3d start = wrap(g, centre);
        // a zero already found next to this cell makes the seed redundant
        const bool covered = std::any_of(found.begin(), found.end(), [&](const ZeroRecord& o) {
          return periodic_distance(g, o.location, start) < 1.5 * s * g.spacing();
        });
        if (covered) continue;
        ++st.seeds;
        auto z = refine_zero(ev, start, cfg, scale);
        if (!z) {
          ++st.dropped;
          continue;
        }
        ++st.converged;
        const bool dup = std::any_of(found.begin(), found.end(), [&](const ZeroRecord& o) {
          return periodic_distance(g, o.location, z->location) < dedup;
        });
        if (!dup) found.push_back(*z);
      }
  if (stats) *stats = st;
  return found;
}

ZeroCount count_zeros(const SpectralField& vort, double t, const ScanConfig& cfg) {
  ZeroCount zc;
  zc.t = t;
  zc.zeros = scan_zeros(vort, cfg);
  for (const auto& z : zc.zeros) {
    if (z.boundary) {
      ++zc.boundary;
      continue;
    }
    ++zc.count;
    if (z.kind == ZeroClass::Hyperbolic) ++zc.hyperbolic;
  }
  return zc;
}

std::vector<ZeroCount> zero_count_series(const Trajectory& traj, const ScanConfig& cfg) {
  std::vector<ZeroCount> out;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    out.push_back(count_zeros(vorticity(traj.snapshots[i]), traj.times[i], cfg));
  return out;
}

bool has_zero_near_origin(const SpectralField& u, double radius, const ScanConfig& cfg) {
  ScanConfig local = cfg;
  local.region = radius;
  for (const auto& z : scan_zeros(vorticity(u), local))
    if (!z.boundary && z.kind == ZeroClass::Hyperbolic && z.location.norm() < radius) return true;
  return false;
}

FirstZeroResult first_zero_time(const SpectralField& u0, const SolverConfig& solver, double N,
                                const FirstZeroConfig& fz, const ScanConfig& scan) {
  if (!(fz.t_max > fz.t_min) || fz.t_min < 0.0) throw Error("first_zero: need 0 <= t_min < t_max");
  if (fz.coarse_points < 2) throw Error("first_zero: need >= 2 coarse points");
  FirstZeroResult res;
  const double target = fz.width / (solver.nu * N * N);

  SpectralField u = prepare_initial(u0, solver.dealias);
  if (has_zero_near_origin(u, fz.radius, scan) && fz.t_min == 0.0) {
    res.found = true;
    return res;
  }

  const double t_first = fz.t_min > 0.0 ? fz.t_min : fz.t_max * 1e-3;
  std::vector<double> coarse;
  for (int i = 0; i < fz.coarse_points; ++i)
    coarse.push_back(t_first * std::pow(fz.t_max / t_first, double(i) / (fz.coarse_points - 1)));

  SolverConfig cfg = solver;
  double t_lo = 0.0;
  SpectralField u_lo = u;
  bool bracketed = false;
  for (double t : coarse) {
    cfg.t_end = t - t_lo;
    cfg.snapshot_times.clear();
    SpectralField ut = run(u_lo, cfg).snapshots.back();
    ++res.solver_restarts;
    if (has_zero_near_origin(ut, fz.radius, scan)) {
      res.t_hi = t;
      bracketed = true;
      break;
    }
    t_lo = t;
    u_lo = std::move(ut);
  }
  res.t_lo = t_lo;
  if (!bracketed) return res;

  while (res.t_hi - res.t_lo > target) {
    const double mid = 0.5 * (res.t_lo + res.t_hi);
    cfg.t_end = mid - res.t_lo;
    cfg.snapshot_times.clear();
    SpectralField um = run(u_lo, cfg).snapshots.back();
    ++res.solver_restarts;
    if (has_zero_near_origin(um, fz.radius, scan)) {
      res.t_hi = mid;
    } else {
      res.t_lo = mid;
      u_lo = std::move(um);
    }
  }
  res.found = true;
  return res;
}

}  // namespace beltrami
