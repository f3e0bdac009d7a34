#include "beltrami/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace beltrami {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += fmt(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

std::string key_name(const std::string& section, const std::string& key) { return section + "." + key; }

}  // namespace

double parse_number(const std::string& text) {
  std::string s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return factor;
    if (s.back() == '*') s = trim(s.substr(0, s.size() - 1));
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not a number: '" + text + "'");
  return v * factor;
}

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& origin) {
  KeyValueFile kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (kv.values_[section].count(key)) throw ConfigError(where + ": duplicate key " + key_name(section, key));
    kv.values_[section][key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

bool KeyValueFile::has(const std::string& section, const std::string& key) const {
  auto s = values_.find(section);
  return s != values_.end() && s->second.count(key);
}

const std::string& KeyValueFile::raw(const std::string& section, const std::string& key) const {
  used_[key_name(section, key)] = true;
  return values_.at(section).at(key);
}

std::vector<std::string> KeyValueFile::unused() const {
  std::vector<std::string> out;
  for (const auto& [s, keys] : values_)
    for (const auto& [k, v] : keys)
      if (!used_.count(key_name(s, k))) out.push_back(key_name(s, k));
  return out;
}

double KeyValueFile::number(const std::string& s, const std::string& k, double fallback) const {
  if (!has(s, k)) return fallback;
  try {
    return parse_number(raw(s, k));
  } catch (const ConfigError& e) {
    throw ConfigError(key_name(s, k) + ": " + e.what());
  }
}

int KeyValueFile::integer(const std::string& s, const std::string& k, int fallback) const {
  if (!has(s, k)) return fallback;
  const double v = number(s, k, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key_name(s, k) + ": expected an integer");
  return int(v);
}

bool KeyValueFile::boolean(const std::string& s, const std::string& k, bool fallback) const {
  if (!has(s, k)) return fallback;
  const std::string& v = raw(s, k);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key_name(s, k) + ": expected true or false");
}

std::string KeyValueFile::text(const std::string& s, const std::string& k, const std::string& fallback) const {
  return has(s, k) ? raw(s, k) : fallback;
}

std::vector<double> KeyValueFile::numbers(const std::string& s, const std::string& k,
                                          const std::vector<double>& fallback) const {
  if (!has(s, k)) return fallback;
  std::vector<double> out;
  std::stringstream ss(raw(s, k));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    try {
      out.push_back(parse_number(item));
    } catch (const ConfigError& e) {
      throw ConfigError(key_name(s, k) + ": " + e.what());
    }
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"theorem1", "theorem2", "oracle", "lemma-sweep", "first-zero"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  c.solver.dt = 1e-2;
  c.solver.t_end = c.datum.T;
  c.solver.snapshot_times = {0.001, 0.0025, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  if (experiment == "oracle") {
    c.grid = GridSpec(64, 2.0 * std::numbers::pi);
    c.solver.dt = 1e-3;
    c.solver.t_end = 1.0;
    c.solver.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  } else if (experiment == "first-zero") {
    c.solver.dt = 2e-3;
    c.solver.snapshot_times.clear();
    c.first_zero.t_max = 0.5;
    c.scan.region = 1.0;
  } else if (experiment == "theorem1" || experiment == "lemma-sweep") {
    c.solver.snapshot_times.clear();
    // the E-norm integrand is smooth in log t; 8 points per decade keeps theorem1 at a few minutes
    if (experiment == "theorem1") c.time_grid.per_decade = 8;
  }
  return c;
}

ExperimentConfig load_config(const std::string& experiment, const KeyValueFile& kv) {
  ExperimentConfig c = default_config(experiment);
  c.grid.n = kv.integer("grid", "n", c.grid.n);
  c.grid.box_length = kv.number("grid", "box_length", c.grid.box_length);

  auto& d = c.datum;
  d.nu = kv.number("datum", "nu", d.nu);
  d.T = kv.number("datum", "T", d.T);
  d.N = kv.integer("datum", "N", d.N);
  d.alpha = kv.number("datum", "alpha", d.alpha);
  d.beta = kv.number("datum", "beta", d.beta);
  d.M = kv.number("datum", "M", d.M);
  d.L = kv.number("datum", "L", d.L);
  d.r = kv.integer("datum", "r", d.r);
  c.second_amplitude = kv.number("datum", "second_amplitude", c.second_amplitude);

  auto& s = c.solver;
  s.nu = kv.number("solver", "nu", d.nu);
  s.dt = kv.number("solver", "dt", s.dt);
  s.t_end = kv.number("solver", "t_end", experiment == "theorem2" ? d.T : s.t_end);
  s.snapshot_times = kv.numbers("solver", "snapshot_times", s.snapshot_times);
  std::erase_if(s.snapshot_times, [&](double t) { return t > s.t_end && !kv.has("solver", "snapshot_times"); });
  s.dealias = kv.boolean("solver", "dealias", s.dealias);
  s.scheme = kv.text("solver", "scheme", s.scheme);
  s.cfl_limit = kv.number("solver", "cfl_limit", s.cfl_limit);
  s.sobolev_order = kv.integer("solver", "sobolev_order", d.r);

  auto& z = c.scan;
  z.stride = kv.integer("scan", "stride", z.stride);
  z.newton_tol = kv.number("scan", "newton_tol", z.newton_tol);
  z.max_iter = kv.integer("scan", "max_iter", z.max_iter);
  z.tol_det = kv.number("scan", "tol_det", z.tol_det);
  z.tol_re = kv.number("scan", "tol_re", z.tol_re);
  z.dedup_radius = kv.number("scan", "dedup_radius", z.dedup_radius);
  z.region = kv.number("scan", "region", z.region);

  auto& tg = c.time_grid;
  tg.t_min = kv.number("time_grid", "t_min", tg.t_min);
  tg.t_max = kv.number("time_grid", "t_max", tg.t_max);
  tg.per_decade = kv.integer("time_grid", "per_decade", tg.per_decade);

  auto& t1 = c.theorem1;
  t1.M = kv.numbers("theorem1", "M", t1.M);
  t1.L = kv.numbers("theorem1", "L", t1.L);
  t1.lambda = kv.number("theorem1", "lambda", t1.lambda);
  t1.alpha = kv.number("theorem1", "alpha", t1.alpha);
  t1.c_star = kv.number("theorem1", "c_star", t1.c_star);
  t1.n_min = kv.integer("theorem1", "n_min", t1.n_min);

  auto& o = c.oracle;
  o.lambda = kv.number("oracle", "lambda", o.lambda);
  o.n = kv.integer("oracle", "n", c.grid.n);
  o.order_n = kv.integer("oracle", "order_n", o.order_n);
  o.order_nu = kv.number("oracle", "order_nu", o.order_nu);
  o.order_t_end = kv.number("oracle", "order_t_end", o.order_t_end);
  o.order_dt = kv.number("oracle", "order_dt", o.order_dt);

  auto& w = c.sweep;
  w.L = kv.numbers("sweep", "L", w.L);
  w.lambda = kv.number("sweep", "lambda", w.lambda);
  w.t_fixed = kv.number("sweep", "t_fixed", w.t_fixed);
  w.t = kv.numbers("sweep", "t", w.t);
  w.heat_t = kv.numbers("sweep", "heat_t", w.heat_t);
  w.n_max = kv.integer("sweep", "n_max", w.n_max);

  auto& f = c.first_zero;
  f.t_min = kv.number("first_zero", "t_min", f.t_min);
  f.t_max = kv.number("first_zero", "t_max", f.t_max);
  f.coarse_points = kv.integer("first_zero", "coarse_points", f.coarse_points);
  f.width = kv.number("first_zero", "width", f.width);
  f.radius = kv.number("first_zero", "radius", f.radius);
  std::vector<double> fN(c.first_zero_N.begin(), c.first_zero_N.end());
  fN = kv.numbers("first_zero", "N", fN);
  c.first_zero_N.assign(fN.begin(), fN.end());

  c.closeness_limit = kv.number("report", "closeness_limit", c.closeness_limit);
  c.near_origin = kv.number("report", "near_origin", c.near_origin);
  c.series_region = kv.number("report", "series_region", c.series_region);
  c.duhamel_times = kv.numbers("report", "duhamel_times", c.duhamel_times);
  c.write_snapshots = kv.boolean("report", "write_snapshots", c.write_snapshots);

  const auto unknown = kv.unused();
  if (!unknown.empty()) throw ConfigError("unknown config key " + unknown.front());
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  try {
    grid.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!grid.two_pi_periodic())
    throw ConfigError("grid.box_length must be a multiple of 2*pi so that B_N and W are periodic");
  try {
    datum.validate();
    solver.validate();
    scan.validate();
    time_grid.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (std::abs(solver.nu - datum.nu) > 1e-15 * datum.nu) throw ConfigError("solver.nu must equal datum.nu");
  auto resolves = [&](double N, const std::string& what) {
    try {
      require_resolved(grid, N);
    } catch (const Error& e) {
      throw ConfigError(what + ": " + e.what());
    }
  };
  if (experiment == "theorem2") {
    resolves(datum.N, "datum.N");
    if (std::abs(solver.t_end - datum.T) > 1e-12 * datum.T) throw ConfigError("solver.t_end must equal datum.T");
    if (!(closeness_limit > 0.0)) throw ConfigError("report.closeness_limit must be positive");
    for (double t : duhamel_times)
      if (t <= 0.0 || t > solver.t_end) throw ConfigError("report.duhamel_times must lie in (0, t_end]");
  }
  if (experiment == "first-zero") {
    if (first_zero_N.empty()) throw ConfigError("first_zero.N must list at least one frequency");
    for (int N : first_zero_N) resolves(N, "first_zero.N");
    if (!(first_zero.t_max > first_zero.t_min) || first_zero.t_min < 0.0)
      throw ConfigError("first_zero: need 0 <= t_min < t_max");
    if (first_zero.coarse_points < 2) throw ConfigError("first_zero.coarse_points must be >= 2");
    if (!(first_zero.width > 0.0) || !(first_zero.radius > 0.0))
      throw ConfigError("first_zero: width and radius must be positive");
  }
  if (experiment == "theorem1") {
    if (theorem1.M.empty() || theorem1.L.empty()) throw ConfigError("theorem1: M and L lists must be non-empty");
    for (double m : theorem1.M)
      if (!(m > 0.0)) throw ConfigError("theorem1.M must be positive");
    for (double l : theorem1.L)
      if (!(l > 0.0)) throw ConfigError("theorem1.L must be positive");
    if (!(theorem1.alpha > 1.5)) throw ConfigError("theorem1.alpha must exceed 3/2");
    if (!(theorem1.c_star > 0.0)) throw ConfigError("theorem1.c_star must be positive");
  }
  if (experiment == "oracle") {
    if (!(oracle.lambda >= 1.0) || oracle.lambda != std::floor(oracle.lambda))
      throw ConfigError("oracle.lambda must be a positive integer");
    if (4 * int(oracle.lambda) * grid.periods() > oracle.n)
      throw ConfigError("oracle.n does not resolve oracle.lambda with 4 points per period");
  }
  if (experiment == "lemma-sweep") {
    if (sweep.L.size() < 2 || sweep.t.size() < 2) throw ConfigError("sweep: need at least two L and two t values");
    if (!(sweep.t_fixed > 0.0)) throw ConfigError("sweep.t_fixed must be positive");
  }
}

void ExperimentConfig::print(std::ostream& os) const {
  os << "# " << experiment << "\n";
  os << "[grid]\nn = " << grid.n << "\nbox_length = " << fmt(grid.box_length / std::numbers::pi) << "pi\n\n";
  os << "[datum]\nnu = " << fmt(datum.nu) << "\nT = " << fmt(datum.T) << "\nN = " << datum.N
     << "\nalpha = " << fmt(datum.alpha) << "\nbeta = " << fmt(datum.beta) << "\nM = " << fmt(datum.M)
     << "\nL = " << fmt(datum.L) << "\nr = " << datum.r << "\nsecond_amplitude = " << fmt(second_amplitude)
     << "\n\n";
  os << "[solver]\nnu = " << fmt(solver.nu) << "\ndt = " << fmt(solver.dt) << "\nt_end = " << fmt(solver.t_end)
     << "\nsnapshot_times = " << join(solver.snapshot_times) << "\ndealias = " << (solver.dealias ? "true" : "false")
     << "\nscheme = " << solver.scheme << "\ncfl_limit = " << fmt(solver.cfl_limit)
     << "\nsobolev_order = " << solver.sobolev_order << "\n\n";
  os << "[scan]\nstride = " << scan.stride << "\nnewton_tol = " << fmt(scan.newton_tol)
     << "\nmax_iter = " << scan.max_iter << "\ntol_det = " << fmt(scan.tol_det) << "\ntol_re = " << fmt(scan.tol_re)
     << "\ndedup_radius = " << fmt(scan.dedup_radius) << "\nregion = " << fmt(scan.region) << "\n\n";
  os << "[time_grid]\nt_min = " << fmt(time_grid.t_min) << "\nt_max = " << fmt(time_grid.t_max)
     << "\nper_decade = " << time_grid.per_decade << "\n\n";
  os << "[theorem1]\nM = " << join(theorem1.M) << "\nL = " << join(theorem1.L) << "\nlambda = " << fmt(theorem1.lambda)
     << "\nalpha = " << fmt(theorem1.alpha) << "\nc_star = " << fmt(theorem1.c_star) << "\nn_min = " << theorem1.n_min
     << "\n\n";
  os << "[oracle]\nlambda = " << fmt(oracle.lambda) << "\nn = " << oracle.n << "\norder_n = " << oracle.order_n
     << "\norder_nu = " << fmt(oracle.order_nu) << "\norder_t_end = " << fmt(oracle.order_t_end)
     << "\norder_dt = " << fmt(oracle.order_dt) << "\n\n";
  os << "[sweep]\nL = " << join(sweep.L) << "\nlambda = " << fmt(sweep.lambda) << "\nt_fixed = " << fmt(sweep.t_fixed)
     << "\nt = " << join(sweep.t) << "\nheat_t = " << join(sweep.heat_t) << "\nn_max = " << sweep.n_max << "\n\n";
  os << "[first_zero]\nN = " << join(first_zero_N) << "\nt_min = " << fmt(first_zero.t_min)
     << "\nt_max = " << fmt(first_zero.t_max) << "\ncoarse_points = " << first_zero.coarse_points
     << "\nwidth = " << fmt(first_zero.width) << "\nradius = " << fmt(first_zero.radius) << "\n\n";
  os << "[report]\ncloseness_limit = " << fmt(closeness_limit) << "\nnear_origin = " << fmt(near_origin)
     << "\nseries_region = " << fmt(series_region)
     << "\nduhamel_times = " << join(duhamel_times) << "\nwrite_snapshots = " << (write_snapshots ? "true" : "false")
     << "\n";
}

}  // namespace beltrami
