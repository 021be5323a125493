#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle_adm.hpp"
#include "support.hpp"
#include "yaf/constants.hpp"
#include "yaf/field.hpp"
#include "yaf/grid.hpp"
#include "yaf/mass.hpp"
#include "yaf/norms.hpp"

using namespace yaf;

TEST_CASE("weighted sup norm: constants and the r^-1 worked example") {
  auto g = RadialGrid::geometric(3, 1.0, 50.0, 2000);
  std::vector<double> ones(g->size(), 1.0);
  CHECK(weighted_sup_norm(*g, ones, 0.0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  // f = r^-1, beta = -1, k = 1:  sup r|f| + sup r^2|f'| = 1 + 1 = 2
  std::vector<double> f(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) f[i] = 1.0 / g->node(i);
  CHECK(weighted_sup_norm(*g, f, -1.0, 1) == doctest::Approx(2.0).epsilon(1e-4));

  CHECK_THROWS_AS(weighted_sup_norm(*g, f, -1.0, 3), InvalidArgumentError);
  CHECK_THROWS_AS(weighted_sup_norm(*g, f, -1.0, 0, 100.0), InvalidArgumentError);
}

TEST_CASE("weighted sup norm starts its region at max(1, r_inner) by default") {
  auto g = RadialGrid::uniform(3, 0.0, 4.0, 401);
  std::vector<double> f(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) f[i] = 1.0;
  // with beta = -2 the weight r^2 would blow up toward r_outer but is finite;
  // the point is that r < 1 (including r = 0, where r^{-beta} with beta > 0
  // would diverge) is excluded by default
  const double norm_default = weighted_sup_norm(*g, f, 2.0, 0);
  CHECK(norm_default == doctest::Approx(1.0).epsilon(1e-12));  // sup over [1,4] of r^-2
}

TEST_CASE("weighted Lq norm matches the closed-form radial integral") {
  // n = 3, f = r^-2, beta = -1, q = 2 on [1, R]:
  //   integrand  |f|^2 r^{-2 beta - n} omega r^{n-1} dr = omega r^-3 dr,
  //   norm^2 = omega (1 - R^-2)/2.
  const auto c = Constants::for_dimension(3);
  const double R = 2.0;
  auto g = RadialGrid::uniform(3, 1.0, R, 300001);
  std::vector<double> f(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) f[i] = 1.0 / (g->node(i) * g->node(i));
  const auto res = weighted_lq_norm(*g, f, -1.0, 2.0, c);
  const double omega = 4.0 * std::numbers::pi;
  const double closed = omega * (1.0 - 1.0 / (R * R)) / 2.0;
  CHECK(std::abs(res.value * res.value - closed) < 1e-10);
  CHECK(res.r_hi == R);

  CHECK_THROWS_AS(weighted_lq_norm(*g, f, -1.0, 0.5, c), InvalidArgumentError);
}

TEST_CASE("weighted Lq norm is absolutely homogeneous") {
  const auto c = Constants::for_dimension(4);
  auto g = RadialGrid::geometric(4, 1.0, 30.0, 500);
  auto f = yaf::testing::smooth_random_field(*g, -1.0, 2.0, 99u);
  const double base = weighted_lq_norm(*g, f, -0.5, 3.0, c).value;
  std::vector<double> scaled(f);
  for (auto& x : scaled) x *= -2.5;
  const double big = weighted_lq_norm(*g, scaled, -0.5, 3.0, c).value;
  CHECK(big == doctest::Approx(2.5 * base).epsilon(1e-12));
}

TEST_CASE("decay order fit recovers a clean power law and the zero sentinel") {
  auto g = RadialGrid::geometric(3, 1.0, 100.0, 300);
  std::vector<double> f(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) f[i] = 3.0 * std::pow(g->node(i), -2.0);
  const auto fit = decay_order_fit(*g, f, 2.0);
  CHECK(fit.tau_hat == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(fit.residual < 1e-10);

  std::vector<double> zero(g->size(), 0.0);
  const auto zfit = decay_order_fit(*g, zero, 2.0);
  CHECK(std::isinf(zfit.tau_hat));
  CHECK(zfit.tau_hat > 0);
  CHECK(zfit.residual == 0.0);

  CHECK_THROWS_AS(decay_order_fit(*g, f, 99.0), InvalidArgumentError);
}

TEST_CASE("decay order fit tolerates mild multiplicative noise") {
  auto g = RadialGrid::geometric(3, 2.0, 200.0, 400);
  std::vector<double> f(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->node(i);
    f[i] = std::pow(r, -1.5) * (1.0 + 0.01 * std::sin(3.0 * std::log(r)));
  }
  const auto fit = decay_order_fit(*g, f, 2.0);
  CHECK(fit.tau_hat == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("adm mass vanishes identically on the flat profile") {
  const auto c = Constants::for_dimension(3);
  auto g = RadialGrid::uniform(3, 1.0, 100.0, 2000);
  auto v = ConformalField::constant(g, 1.0);
  const auto m = adm_mass(v, c, {10.0, 20.0, 40.0, 80.0});
  // exact in exact arithmetic; the stencil leaves eps/h-level noise scaled by r^{n-1}
  for (double mj : m.per_radius) CHECK(std::abs(mj) < 1e-9);
  CHECK(std::abs(m.extrapolated) < 1e-9);
  CHECK(m.converged);
}

TEST_CASE("adm mass recovers the harmonic-tail mass in n = 3") {
  const auto c = Constants::for_dimension(3);
  const double mhat = 1.0;
  auto g = RadialGrid::uniform(3, 1.0, 120.0, 23801);
  auto v = ConformalField::from_function(g, [&](double r) { return 1.0 + mhat / (2.0 * r); });
  const auto m = adm_mass(v, c, {10.0, 20.0, 40.0, 80.0});
  // closed form of the flux integral at finite radius: m(r) = mhat v(r)^3
  for (std::size_t j = 0; j < m.radii.size(); ++j) {
    const double vr = 1.0 + mhat / (2.0 * m.radii[j]);
    CHECK(m.per_radius[j] == doctest::Approx(mhat * vr * vr * vr).epsilon(1e-6));
  }
  CHECK(m.extrapolated == doctest::Approx(mhat).epsilon(1e-6));
  CHECK(m.converged);
  CHECK(m.error_estimate < 1e-4);
}

TEST_CASE("adm mass recovers a tau = n-2 tail in n = 5") {
  const auto c = Constants::for_dimension(5);
  const double amp = 0.7;
  auto g = RadialGrid::uniform(5, 1.0, 60.0, 29501);
  auto v = ConformalField::from_function(g, [&](double r) { return 1.0 + amp * std::pow(r, -3.0); });
  const auto m = adm_mass(v, c, {10.0, 15.0, 20.0, 30.0});
  CHECK(m.extrapolated == doctest::Approx(4.0 * amp).epsilon(1e-6));  // (n-1) amp
  CHECK(m.converged);
}

TEST_CASE("adm mass is linear in the tail amplitude") {
  const auto c = Constants::for_dimension(3);
  auto g = RadialGrid::uniform(3, 1.0, 120.0, 12000);
  std::vector<double> radii{15.0, 30.0, 60.0, 110.0};
  auto v1 = ConformalField::from_function(g, [](double r) { return 1.0 + 0.2 / r; });
  auto v2 = ConformalField::from_function(g, [](double r) { return 1.0 + 0.4 / r; });
  const auto m1 = adm_mass(v1, c, radii);
  const auto m2 = adm_mass(v2, c, radii);
  CHECK(m2.extrapolated == doctest::Approx(2.0 * m1.extrapolated).epsilon(1e-6));
}

TEST_CASE("adm mass flags a slowly decaying tail instead of trusting the limit") {
  // v - 1 ~ r^{-0.6} decays too slowly for a finite flux integral
  const auto c = Constants::for_dimension(3);
  auto g = RadialGrid::uniform(3, 1.0, 100.0, 20000);
  auto v = ConformalField::from_function(g, [](double r) { return 1.0 + std::pow(r, -0.6); });
  const auto m = adm_mass(v, c, {10.0, 20.0, 40.0, 80.0});
  CHECK_FALSE(m.converged);
  CHECK(!m.warning.empty());
  // the per-radius sequence visibly grows
  CHECK(m.per_radius.back() > m.per_radius.front());
}

TEST_CASE("adm mass validates its probe radii") {
  const auto c = Constants::for_dimension(3);
  auto g = RadialGrid::uniform(3, 1.0, 50.0, 500);
  auto v = ConformalField::constant(g, 1.0);
  CHECK_THROWS_AS(adm_mass(v, c, {60.0}), InvalidArgumentError);
  CHECK_THROWS_AS(adm_mass(v, c, {0.5, 10.0}), InvalidArgumentError);
  CHECK_THROWS_AS(adm_mass(v, c, {10.0, 10.0}), InvalidArgumentError);
  CHECK_THROWS_AS(adm_mass(v, c, std::vector<double>{}), InvalidArgumentError);
  const auto c4 = Constants::for_dimension(4);
  CHECK_THROWS_AS(adm_mass(v, c4, {10.0}), InvalidArgumentError);
}

TEST_CASE("radial reduction agrees with the brute-force Cartesian flux integral") {
  // Closed-form profiles evaluated directly (no grid): the oracle validates
  // the symbolic reduction used by adm_mass.
  auto v3 = [](double r) { return 1.0 + 0.5 / r; };  // mhat = 1 in n = 3
  for (double r : {10.0, 40.0}) {
    const double oracle = yaf::testing::cartesian_adm_mass(3, v3, r);
    const double vr = v3(r);
    const double radial = 1.0 * vr * vr * vr;  // mhat v^3
    CHECK(oracle == doctest::Approx(radial).epsilon(1e-7));
  }

  auto v5 = [](double r) { return 1.0 + 0.7 * std::pow(r, -3.0); };
  for (double r : {10.0, 20.0}) {
    const double oracle = yaf::testing::cartesian_adm_mass(5, v5, r);
    const double vr = v5(r);
    const double radial = 4.0 * 0.7 * std::cbrt(vr);  // (n-1) amp v^{1/3}
    CHECK(oracle == doctest::Approx(radial).epsilon(1e-7));
  }
}
