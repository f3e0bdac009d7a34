#include <doctest.h>

#include <cmath>
#include <random>

#include "beltrami/spectral_ops.hpp"
#include "beltrami/norms.hpp"

using namespace beltrami;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField random_field(const GridSpec& g, unsigned seed, int band) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalField p(g);
  for (int c = 0; c < 3; ++c)
    for (auto& v : p[c]) v = nd(rng);
  SpectralField s = forward_transform(p);
  return low_pass(s, band * g.fundamental());
}

double sup(const SpectralField& f) { return lp_norm(inverse_transform(f), kInf); }

}  // namespace

TEST_CASE("transform round trip and known coefficients") {
  const GridSpec g(16, 2 * kPi);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-1, 1);
  PhysicalScalar p(g);
  for (auto& v : p[0]) v = ud(rng);
  const PhysicalScalar back = inverse_transform(forward_transform(p));
  CHECK((back[0] - p[0]).abs().maxCoeff() < 1e-14);

  // cos(2 x1) has coefficient 1/2 at m = (+-2, 0, 0); the centred box adds no phase for even m
  PhysicalScalar q(g);
  for_each_point(g, [&](std::size_t i, int i1, int, int) { q[0][Eigen::Index(i)] = std::cos(2 * g.coordinate(i1)); });
  const SpectralScalar s = forward_transform(q);
  CHECK(std::abs(s[0][Eigen::Index(g.spectral_index(2, 0, 0))] - Complex(0.5, 0)) < 1e-14);
}

TEST_CASE("spectral derivatives of trigonometric samples") {
  const GridSpec g(32, 4 * kPi);
  PhysicalField f(g), df(g);
  for_each_point(g, [&](std::size_t i, int i1, int i2, int i3) {
    const auto x = g.point(i1, i2, i3);
    const auto k = Eigen::Index(i);
    f[0][k] = std::sin(3 * x[1]) * std::cos(x[2]);
    df[0][k] = 3 * std::cos(3 * x[1]) * std::cos(x[2]);
  });
  const SpectralField s = forward_transform(f);
  const PhysicalField d = inverse_transform(derivative(s, 1));
  CHECK((d[0] - df[0]).abs().maxCoeff() < 1e-12);
  // Laplacian eigenvalue -(9 + 1)
  const PhysicalField l = inverse_transform(laplacian(s));
  CHECK((l[0] + 10.0 * f[0]).abs().maxCoeff() < 1e-11);
}

TEST_CASE("vector identities: div curl = 0, curl grad = 0") {
  const GridSpec g(16, 2 * kPi);
  const SpectralField u = random_field(g, 3, 5);
  CHECK(lp_norm(inverse_transform(divergence(curl(u))), kInf) < 1e-12);
  SpectralScalar phi(g);
  phi[0] = u[0];
  CHECK(sup(curl(gradient(phi))) < 1e-12);
}

TEST_CASE("Leray projection properties") {
  const GridSpec g(16, 2 * kPi);
  const SpectralField u = random_field(g, 11, 7);
  const SpectralField v = random_field(g, 12, 7);
  const SpectralField pu = leray_project(u);
  SUBCASE("idempotent") { CHECK(sup(leray_project(pu) - pu) < 1e-12 * sup(pu)); }
  SUBCASE("divergence free") { CHECK(lp_norm(inverse_transform(divergence(pu)), kInf) < 1e-12 * sup(u)); }
  SUBCASE("self-adjoint") {
    const double a = inner_product(pu, v), b = inner_product(u, leray_project(v));
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }
  SUBCASE("annihilates gradients") {
    SpectralScalar phi(g);
    phi[0] = u[1];
    const SpectralField gr = gradient(phi);
    CHECK(sup(leray_project(gr)) < 1e-12 * sup(gr));
  }
  SUBCASE("fused dealias + projection equals the composition") {
    SpectralField w = u;
    dealias_project(w);
    CHECK(sup(w - leray_project(dealias(u))) < 1e-14 * sup(u));
  }
}

TEST_CASE("heat semigroup") {
  const GridSpec g(16, 2 * kPi);
  const SpectralField u = random_field(g, 5, 6);
  CHECK(sup(heat_semigroup(heat_semigroup(u, 0.01), 0.02) - heat_semigroup(u, 0.03)) < 1e-14 * sup(u));
  // single mode: e^{t Lap} sin(2 x1) = e^{-4t} sin(2 x1)
  PhysicalScalar s(g);
  for_each_point(g, [&](std::size_t i, int i1, int, int) { s[0][Eigen::Index(i)] = std::sin(2 * g.coordinate(i1)); });
  const PhysicalScalar h = inverse_transform(heat_semigroup(forward_transform(s), 0.3));
  CHECK((h[0] - std::exp(-1.2) * s[0]).abs().maxCoeff() < 1e-14);
  // backward then forward recovers the field
  CHECK(sup(heat_semigroup(inverse_heat(u, 0.05), 0.05) - u) < 1e-12 * sup(u));
}

TEST_CASE("inverse heat guard rejects white noise") {
  const GridSpec g(32, 2 * kPi);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  PhysicalField p(g);
  for (int c = 0; c < 3; ++c)
    for (auto& v : p[c]) v = nd(rng);
  CHECK_THROWS_AS(inverse_heat(forward_transform(p), 1.0), GuardExceeded);
}

TEST_CASE("dealiasing removes the top third") {
  const GridSpec g(32, 2 * kPi);
  const SpectralField u = random_field(g, 1, 16);
  const SpectralField d = dealias(u);
  const auto& w = wavenumbers(g);
  double outside = 0.0;
  for_each_mode(g, [&](std::size_t i, int l1, int m2, int m3) {
    if (l1 > g.n / 3 || std::abs(m2) > g.n / 3 || std::abs(m3) > g.n / 3)
      outside = std::max(outside, std::abs(d[0][Eigen::Index(i)]));
  });
  CHECK(outside == 0.0);
  CHECK(w.dealias.sum() > 0.0);
}
