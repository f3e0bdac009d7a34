#include "beltrami/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "beltrami/norms.hpp"
#include "beltrami/snapshot.hpp"

namespace beltrami {

namespace {

/// Spectral energy density sum_c w |c|^2 per stored mode.
Eigen::ArrayXd energy_density(const SpectralField& u) {
  const auto& w = wavenumbers(u.grid);
  Eigen::ArrayXd e = u[0].abs2() + u[1].abs2() + u[2].abs2();
  return e * w.weight;
}

double log_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.5 * (a + b);
  const double r = a / b;
  if (std::abs(r - 1.0) < 1e-8) return 0.5 * (a + b);
  return (a - b) / std::log(r);
}

/// int_0^b x^m e^{-z x} dx for m = 0, 1, 2.
std::array<double, 3> moments(double z, double b) {
  std::array<double, 3> mu{};
  if (z * b < 1.0) {
    double term = 1.0;  // (-z)^k / k!
    for (int k = 0; k < 30; ++k) {
      for (int m = 0; m < 3; ++m) mu[m] += term * std::pow(b, m + k + 1) / (m + k + 1);
      term *= -z / (k + 1);
    }
    return mu;
  }
  const double e = std::exp(-z * b);
  mu[0] = (1.0 - e) / z;
  mu[1] = (mu[0] - b * e) / z;
  mu[2] = (2.0 * mu[1] - b * b * e) / z;
  return mu;
}

/// Weights W_i with  int_0^{b h} g(s) ds ~ sum_i W_i g(i h)  when g = e^{-z s / h} * quadratic.
std::array<double, 3> exp_simpson_weights(double z, double b) {
  const auto mu = moments(z, b);
  const double m0 = 0.5 * (mu[2] - 3.0 * mu[1] + 2.0 * mu[0]);
  const double m1 = -mu[2] + 2.0 * mu[1];
  const double m2 = 0.5 * (mu[2] - mu[1]);
  return {m0, std::exp(z) * m1, std::exp(2.0 * z) * m2};
}

constexpr double kStiffZ = 10.0;

/// Running nu int ||grad u||^2 ds from per-mode energy densities.
class DissipationIntegral {
 public:
  DissipationIntegral(const GridSpec& g, double nu) : grid_(g), nu_(nu) {}

  /// Start a new run of equal steps h at state density g0.
  void restart(double h, Eigen::ArrayXd g0) {
    if (h != h_) {
      h_ = h;
      build_weights();
    }
    g_[0] = std::move(g0);
    count_ = 0;
    base_ = total_;
  }

  /// Add the state after the next step; returns the updated integral.
  double push(Eigen::ArrayXd g) {
    const auto& w = wavenumbers(grid_);
    const double scale = nu_ * grid_.box_volume();
    if (count_ == 0) {
      g_[1] = std::move(g);
      total_ = base_ + scale * h_ * (w.k2 * integrate(1)).sum();
      count_ = 1;
    } else {
      g_[2] = std::move(g);
      mid_ = base_ + scale * h_ * (w.k2 * integrate(1, true)).sum();
      total_ = base_ + scale * h_ * (w.k2 * integrate(2)).sum();
      g_[0] = std::move(g_[2]);
      base_ = total_;
      count_ = 0;
    }
    return total_;
  }

  void build_weights() {
    const auto& w = wavenumbers(grid_);
    const auto size = w.k2.size();
    for (auto& b : weights_)
      for (auto& a : b) a.resize(size);
    stiff_.resize(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const double z = 2.0 * nu_ * w.k2[i] * h_;
      stiff_[i] = z > kStiffZ;
      for (int b = 0; b < 2; ++b) {
        const auto wt = stiff_[i] ? std::array<double, 3>{0, 0, 0} : exp_simpson_weights(z, b + 1);
        for (int j = 0; j < 3; ++j) weights_[b][j][i] = wt[j];
      }
    }
  }

  /// Integral at the middle state of the last completed pair, using all three states.
  double mid() const { return mid_; }

 private:
  /// int |c|^2 ds / h over [0, b h] per mode.
  Eigen::ArrayXd integrate(int b, bool three_point = false) const {
    Eigen::ArrayXd out(g_[0].size());
    const auto& W = weights_[b - 1];
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (stiff_[i]) {
        out[i] = log_mean(g_[0][i], g_[1][i]) + (b == 2 ? log_mean(g_[1][i], g_[2][i]) : 0.0);
      } else if (b == 1 && !three_point) {
        // provisional until the next state arrives
        out[i] = log_mean(g_[0][i], g_[1][i]);
      } else {
        out[i] = W[0][i] * g_[0][i] + W[1][i] * g_[1][i] + W[2][i] * g_[2][i];
      }
    }
    return out;
  }

  GridSpec grid_;
  double nu_;
  double h_ = -1.0;
  std::array<std::array<Eigen::ArrayXd, 3>, 2> weights_;
  Eigen::Array<bool, Eigen::Dynamic, 1> stiff_;
  std::array<Eigen::ArrayXd, 3> g_;
  int count_ = 0;
  double base_ = 0.0;
  double mid_ = 0.0;
  double total_ = 0.0;
};

Diagnostics diagnose(const SpectralField& u, double t, double dissipated, double cfl, int order) {
  const auto& w = wavenumbers(u.grid);
  const Eigen::ArrayXd e = energy_density(u);
  Diagnostics d;
  d.t = t;
  d.energy = 0.5 * u.grid.box_volume() * e.sum();
  d.enstrophy = 0.5 * u.grid.box_volume() * (w.k2 * e).sum();
  d.dissipated = dissipated;
  for (int k = 0; k <= order; ++k) d.hk.push_back(sobolev_norm(u, k));
  d.div_max = lp_norm(inverse_transform(divergence(u)), kInf);
  d.cfl = cfl;
  return d;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw Error("solver: nu must be positive");
  if (!(dt > 0.0)) throw Error("solver: dt must be positive");
  if (!(t_end >= 0.0)) throw Error("solver: t_end must be >= 0");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw Error("solver: snapshot_times must be sorted");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end * (1.0 + 1e-12)) throw Error("solver: snapshot time outside [0, t_end]");
  if (scheme != "ifrk4") throw Error("solver: unknown scheme '" + scheme + "' (only ifrk4)");
  if (!(cfl_limit > 0.0)) throw Error("solver: cfl_limit must be positive");
  if (sobolev_order < 0) throw Error("solver: sobolev_order must be >= 0");
}

Stepper::Stepper(const GridSpec& g, double nu, bool dealias) : grid_(g), nu_(nu), dealias_(dealias) {}

const Stepper::Factors& Stepper::factors(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 8) cache_.clear();
  const auto& w = wavenumbers(grid_);
  Factors f{(-0.5 * nu_ * dt * w.k2).exp(), (-nu_ * dt * w.k2).exp()};
  return cache_.emplace(dt, std::move(f)).first->second;
}

SpectralField Stepper::nonlinear(const SpectralField& u, double* max_speed) const {
  const PhysicalField up = inverse_transform(u);
  const PhysicalField wp = inverse_transform(curl(u));
  if (max_speed) *max_speed = up.magnitude().maxCoeff();
  SpectralField n = forward_transform(cross(up, wp));
  if (!dealias_) return leray_project(n);
  dealias_project(n);
  return n;
}

SpectralField Stepper::step(const SpectralField& u, double dt) {
  const Factors& f = factors(dt);
  const Eigen::ArrayXd& eh = f.half;
  const Eigen::ArrayXd& ef = f.full;
  // Lawson RK4 on v = e^{-nu Lap t} u; each stage increment is scaled by dt.
  SpectralField a = nonlinear(u, &max_speed_);
  SpectralField s(u.grid);
  for (int k = 0; k < 3; ++k) s[k] = (u[k] + (0.5 * dt) * a[k]) * eh;
  SpectralField b = nonlinear(s);
  for (int k = 0; k < 3; ++k) s[k] = u[k] * eh + (0.5 * dt) * b[k];
  SpectralField c = nonlinear(s);
  for (int k = 0; k < 3; ++k) s[k] = (u[k] * eh + dt * c[k]) * eh;
  SpectralField d = nonlinear(s);
  const double w = dt / 6.0;
  for (int k = 0; k < 3; ++k) s[k] = (u[k] + w * a[k]) * ef + (2.0 * w) * (b[k] + c[k]) * eh + w * d[k];
  return s;
}

SpectralField step(const SpectralField& u, const SolverConfig& cfg) {
  cfg.validate();
  Stepper s(u.grid, cfg.nu, cfg.dealias);
  SpectralField out = s.step(u, cfg.dt);
  const double cfl = s.last_max_speed() * cfg.dt / u.grid.spacing();
  if (cfl > cfg.cfl_limit) throw CflViolation("solver: CFL " + std::to_string(cfl) + " exceeds limit");
  return out;
}

SpectralField prepare_initial(const SpectralField& u0, bool dealiased) {
  return leray_project(dealiased ? dealias(u0) : u0);
}

Trajectory run(const SpectralField& u0, const SolverConfig& cfg,
               const std::function<void(double, const SpectralField&)>& observer) {
  cfg.validate();
  if (!u0.all_finite()) throw Error("solver: non-finite initial data");
  const GridSpec& g = u0.grid;

  std::vector<double> captures{0.0};
  for (double t : cfg.snapshot_times)
    if (t > captures.back() + 1e-14) captures.push_back(t);
  if (cfg.t_end > captures.back() + 1e-14) captures.push_back(cfg.t_end);

  Trajectory tr;
  tr.grid = g;
  tr.nu = cfg.nu;
  Stepper stepper(g, cfg.nu, cfg.dealias);
  DissipationIntegral diss(g, cfg.nu);

  SpectralField u = prepare_initial(u0, cfg.dealias);
  double t = 0.0;
  auto capture = [&] {
    tr.times.push_back(t);
    tr.snapshots.push_back(u);
    if (observer) observer(t, u);
  };
  tr.diagnostics.push_back(diagnose(u, 0.0, 0.0, 0.0, cfg.sobolev_order));
  capture();

  for (std::size_t s = 1; s < captures.size(); ++s) {
    const double span = captures[s] - captures[s - 1];
    const long steps = std::max(1L, long(std::ceil(span / cfg.dt - 1e-9)));
    const double h = span / double(steps);
    diss.restart(h, energy_density(u));
    for (long k = 1; k <= steps; ++k) {
      u = stepper.step(u, h);
      const double cfl = stepper.last_max_speed() * h / g.spacing();
      if (cfl > cfg.cfl_limit)
        throw CflViolation("solver: CFL " + std::to_string(cfl) + " exceeds limit " + std::to_string(cfg.cfl_limit) +
                           " at t=" + std::to_string(t));
      if (!u.all_finite()) throw Error("solver: non-finite state at t=" + std::to_string(t));
      t = (k == steps) ? captures[s] : captures[s - 1] + double(k) * h;
      const double dissipated = diss.push(energy_density(u));
      if (k % 2 == 0) tr.diagnostics.back().dissipated = diss.mid();
      tr.diagnostics.push_back(diagnose(u, t, dissipated, cfl, cfg.sobolev_order));
    }
    capture();
  }
  return tr;
}

const SpectralField& Trajectory::at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return snapshots[i];
  throw Error("trajectory: no snapshot at t=" + std::to_string(t));
}

double Trajectory::energy_residual() const {
  if (diagnostics.empty()) return 0.0;
  const double e0 = diagnostics.front().energy;
  if (e0 == 0.0) return 0.0;
  double r = 0.0;
  for (const auto& d : diagnostics) r = std::max(r, std::abs(d.energy + d.dissipated - e0) / e0);
  return r;
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string());
  os << "t,energy,enstrophy,h1,h2,h3,div_max,cfl\n" << std::setprecision(17);
  for (const auto& d : diagnostics) {
    auto h = [&](std::size_t k) { return k < d.hk.size() ? d.hk[k] : std::nan(""); };
    os << d.t << ',' << d.energy << ',' << d.enstrophy << ',' << h(1) << ',' << h(2) << ',' << h(3) << ','
       << d.div_max << ',' << d.cfl << '\n';
  }
}

void Trajectory::write_snapshots(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<SnapshotEntry> index;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const std::string name = "u_" + std::to_string(i) + ".bfld";
    write_snapshot(dir / name, inverse_transform(snapshots[i]));
    index.push_back({times[i], name});
  }
  write_snapshot_index(dir / "snapshots.json", index);
}

SpectralField vorticity(const SpectralField& u) { return curl(u); }

PhysicalField duhamel_remainder(const Trajectory& traj, double t) {
  const SpectralField& ut = traj.at(t);
  const SpectralField w0 = curl(traj.at(0.0));
  SpectralField d = curl(ut);
  d -= heat_semigroup(w0, traj.nu * t);
  return inverse_transform(d);
}

}  // namespace beltrami
