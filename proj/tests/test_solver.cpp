#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "beltrami/experiments.hpp"
#include "beltrami/norms.hpp"
#include "beltrami/snapshot.hpp"

using namespace beltrami;

namespace {

constexpr double kPi = std::numbers::pi;

double sup(const SpectralField& f) { return lp_norm(inverse_transform(f), kInf); }

}  // namespace

TEST_CASE("Beltrami field decays exactly") {
  const GridSpec g(16, 2 * kPi);
  const SpectralField b = beltrami_field(g, 2);
  SolverConfig cfg;
  cfg.nu = 0.1;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  cfg.snapshot_times = {0.123, 0.25};
  const Trajectory tr = run(b, cfg);
  REQUIRE(tr.times.size() == 4);
  CHECK(tr.times[1] == 0.123);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const SpectralField exact = std::exp(-0.1 * 4 * tr.times[i]) * b;
    CHECK(sup(tr.snapshots[i] - exact) < 1e-12);
  }
  CHECK(tr.energy_residual() < 1e-10);
  CHECK(sup(Stepper(g, 1.0).nonlinear(b)) < 1e-12);
}

TEST_CASE("energy identity on a nonlinear flow") {
  const GridSpec g(16, 2 * kPi);
  SolverConfig cfg;
  cfg.nu = 0.05;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  const Trajectory tr = run(taylor_green(g), cfg);
  CHECK(tr.energy_residual() < 1e-6);
  // energy decreases monotonically
  for (std::size_t i = 1; i < tr.diagnostics.size(); ++i)
    CHECK(tr.diagnostics[i].energy <= tr.diagnostics[i - 1].energy);
  CHECK(tr.diagnostics.back().div_max < 1e-12);
}

TEST_CASE("fourth-order convergence under dt halving") {
  SolverConfig cfg;
  cfg.nu = 0.05;
  cfg.dt = 0.05;
  cfg.t_end = 0.5;
  const OrderStudy st = dt_halving(taylor_green(GridSpec(16, 2 * kPi)), cfg);
  CHECK(st.ratio > 12);
  CHECK(st.ratio < 20);
}

TEST_CASE("CFL and configuration checks") {
  const GridSpec g(16, 2 * kPi);
  SpectralField u = taylor_green(g);
  u *= 100.0;
  SolverConfig cfg;
  cfg.dt = 0.1;
  CHECK_THROWS_AS(step(u, cfg), CflViolation);
  cfg.dt = 1e-3;
  cfg.snapshot_times = {0.5, 0.2};
  CHECK_THROWS_AS(run(u, cfg), Error);
  cfg.snapshot_times = {2.0};
  CHECK_THROWS_AS(run(u, cfg), Error);
  cfg.snapshot_times = {};
  cfg.scheme = "euler";
  CHECK_THROWS_AS(run(u, cfg), Error);
}

TEST_CASE("Duhamel remainder vanishes for a Beltrami flow") {
  const GridSpec g(16, 2 * kPi);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  cfg.snapshot_times = {0.05};
  const Trajectory tr = run(beltrami_field(g, 1), cfg);
  CHECK(lp_norm(duhamel_remainder(tr, 0.05), kInf) < 1e-12);
  CHECK_THROWS_AS(tr.at(0.07), Error);
}

TEST_CASE("snapshot files round trip") {
  const GridSpec g(8, 2 * kPi);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.02;
  const Trajectory tr = run(taylor_green(g), cfg);
  const auto dir = std::filesystem::temp_directory_path() / "beltrami_snap_test";
  std::filesystem::remove_all(dir);
  tr.write_snapshots(dir);
  const auto idx = read_snapshot_index(dir / "snapshots.json");
  REQUIRE(idx.size() == tr.times.size());
  const PhysicalField back = read_vector_snapshot(dir / idx.back().path);
  CHECK(lp_norm(back - inverse_transform(tr.snapshots.back()), kInf) == 0.0);
  std::filesystem::remove_all(dir);
}
