#include <doctest.h>

#include <cmath>
#include <random>

#include "beltrami/norms.hpp"

using namespace beltrami;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalField p(g);
  for (int c = 0; c < 3; ++c)
    for (auto& v : p[c]) v = nd(rng);
  return forward_transform(p);
}

}  // namespace

TEST_CASE("Lebesgue and Sobolev norms of simple fields") {
  const GridSpec g(16, 2 * kPi);
  PhysicalScalar one(g);
  one[0].setConstant(2.0);
  CHECK(lp_norm(one, 2) == doctest::Approx(2.0 * std::pow(2 * kPi, 1.5)).epsilon(1e-14));
  CHECK(lp_norm(one, kInf) == 2.0);
  // |B_1|^2 = 1 pointwise, so ||B_1||_{H^r}^2 = 2^r box^3
  const SpectralField b = forward_transform(sample(g, [](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::sin(x[2]), std::cos(x[2]), 0);
  }));
  for (int r : {0, 1, 3})
    CHECK(sobolev_norm(b, r) == doctest::Approx(std::sqrt(std::pow(2.0, r)) * std::pow(2 * kPi, 1.5)).epsilon(1e-12));
}

TEST_CASE("L2 norm of the localizer against radial quadrature") {
  // ||phi||_2^2 = int 4 pi r^2 (1 + r^2)^{-2 alpha} dr
  const double alpha = 3;
  const GridSpec g(128, 8 * kPi);
  const auto loc = LocalizerSpec::inverse_power(alpha);
  const double grid = lp_norm(sample_localizer(g, loc), 2);
  double s = 0;
  const int m = 200000;
  const double R = 400, h = R / m;
  for (int i = 0; i <= m; ++i) {
    const double r = i * h;
    s += (i == 0 || i == m ? 1 : (i % 2 ? 4 : 2)) * 4 * kPi * r * r * std::pow(1 + r * r, -2 * alpha);
  }
  s *= h / 3;
  CHECK(grid == doctest::Approx(std::sqrt(s)).epsilon(1e-4));
}

TEST_CASE("Littlewood-Paley blocks telescope") {
  const GridSpec g(32, 2 * kPi);
  const SpectralField f = random_field(g, 4);
  const auto range = dyadic_range(g);
  SpectralField sum(g);
  for (int j = range.j_min; j <= range.j_max; ++j) sum += lp_block(f, j);
  SpectralField nonzero = f;
  for (int c = 0; c < 3; ++c) nonzero[c][0] = 0;
  CHECK(lp_norm(inverse_transform(sum - nonzero), kInf) < 1e-10 * lp_norm(inverse_transform(f), kInf));
  CHECK_THROWS_AS(lp_block(f, range.j_max + 5), Error);
}

TEST_CASE("Bernstein inequality constants stay bounded across frequency") {
  const GridSpec g(64, 2 * kPi);
  const SpectralField f = random_field(g, 8);
  double worst = 0;
  for (int j = 2; j <= 5; ++j) {
    const SpectralField b = lp_block(f, j);
    const double m = lp_norm(inverse_transform(b), kInf);
    double d = 0;
    for (int a = 0; a < 3; ++a) d = std::max(d, lp_norm(inverse_transform(derivative(b, a)), kInf));
    worst = std::max(worst, d / (std::ldexp(1.0, j) * m));
  }
  CHECK(worst < 2.0);
  CHECK(worst > 0.05);
}

TEST_CASE("caloric Besov norm of a Beltrami field") {
  // sup_t sqrt(t) e^{-t lam^2} = (2 e lam^2)^{-1/2}
  const GridSpec g(16, 2 * kPi);
  const TimeGrid tg{1e-3, 1e2, 400};
  for (int lam : {1, 2}) {
    const SpectralField b = beltrami_field(g, lam);
    const double v = besov_caloric(b, {-1, kInf, kInf}, tg).value;
    CHECK(v == doctest::Approx(1.0 / std::sqrt(2 * std::exp(1.0) * lam * lam)).epsilon(1e-4));
    // exact homogeneity
    CHECK(besov_caloric(SpectralField(7.5 * b), {-1, kInf, kInf}, tg).value == doctest::Approx(7.5 * v).epsilon(1e-13));
  }
  CHECK(1.0 / std::sqrt(2 * std::exp(1.0)) == doctest::Approx(0.42888).epsilon(1e-5));
}

TEST_CASE("E-norm vanishes for a pure Beltrami datum") {
  const GridSpec g(32, 2 * kPi);
  const SpectralField b = beltrami_field(g, 2);
  CHECK(lp_norm(omega_u0(b, 0.0), kInf) < 1e-10);
  CHECK(e_norm(b, TimeGrid{1e-3, 10, 4}).value < 1e-9);
}

TEST_CASE("E-norm is quadratic in the datum") {
  const GridSpec g(32, 2 * kPi);
  SpectralField u = leray_project(low_pass(random_field(g, 2), 4.0));
  u *= 1e-3;
  const TimeGrid tg{1e-3, 1, 4};
  const double a = e_norm(u, tg).value, b = e_norm(SpectralField(3.0 * u), tg).value;
  CHECK(b == doctest::Approx(9 * a).epsilon(1e-10));
  const auto cg = check_cg_condition(u, 1.0, tg);
  CHECK(cg.lhs == doctest::Approx(a));
  CHECK(cg.satisfied == (cg.margin() >= 0));
}

TEST_CASE("weighted sup and exponent fits") {
  const GridSpec g(16, 2 * kPi);
  PhysicalScalar f(g);
  f[0].setConstant(1.0);
  const double rmax2 = 3 * kPi * kPi;  // corner (-pi, -pi, -pi)
  CHECK(weighted_sup(f, 2.0, Weight::Quadratic) == doctest::Approx(std::pow(1 + rmax2, 2)));
  CHECK(fit_exponent({1, 2, 4, 8}, {3, 3 * std::pow(2, -1.5), 3 * std::pow(4, -1.5), 3 * std::pow(8, -1.5)}) ==
        doctest::Approx(-1.5));
}

TEST_CASE("commutator vanishes at t = 0 and decays in L") {
  const double t = 0.25;
  double prev = kInf;
  for (double L : {2.0, 4.0}) {
    const GridSpec g(64, theorem1_box(L));
    const double c = commutator_norm(g, LocalizerSpec::inverse_power(2, L), 1, t, kInf);
    CHECK(c < prev);
    prev = c;
    CHECK(commutator_norm(g, LocalizerSpec::inverse_power(2, L), 1, 0.0, kInf) == 0.0);
  }
}
