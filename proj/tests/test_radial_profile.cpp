#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tmx/profile_json.hpp"
#include "tmx/radial_profile.hpp"
#include "tmx/random.hpp"
#include "tmx/witness.hpp"

using namespace tmx;

namespace {

RadialProfile random_decreasing_profile(Rng& rng, int max_knots = 12) {
  const int m = rng.uniform_int(2, max_knots);
  std::vector<double> knots, values;
  double t = rng.uniform(-8.0, -2.0);
  for (int i = 0; i < m; ++i) {
    knots.push_back(t);
    t += rng.uniform(0.2, 2.5);
  }
  double v = 0.0;
  values.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = m - 2; i >= 0; --i) {
    v += rng.uniform(0.05, 1.0);
    values[static_cast<std::size_t>(i)] = v;
  }
  return RadialProfile::create(std::move(knots), std::move(values));
}

}  // namespace

TEST_CASE("construction rejects degenerate input") {
  CHECK_THROWS_AS(RadialProfile::create({0.0}, {1.0}), Error);
  CHECK_THROWS_AS(RadialProfile::create({0.0, 0.0}, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(RadialProfile::create({1.0, 0.0}, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(RadialProfile::create({0.0, 1.0}, {1.0, 0.5}), Error);  // right zero, v!=0
  CHECK_THROWS_AS(
      RadialProfile::create({0.0, 1.0}, {1.0, 0.0}, Extension::Zero, Extension::Zero),
      Error);  // left zero with positive first value
}

TEST_CASE("moser profile has unit energy and the closed-form mass") {
  for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
    const auto f = witness::make_moser(alpha);
    CHECK(dirichlet_energy(f) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(mass(f) ==
          Catch::Approx(witness::moser_mass_closed_form(alpha)).epsilon(1e-10));
  }
  // alpha = 1 value quoted to 6 digits
  CHECK(mass(witness::make_moser(1.0)) == Catch::Approx(0.148499).margin(5e-7));
  // alpha -> infinity: mass vanishes
  CHECK(mass(witness::make_moser(200.0)) < 2e-3);
}

TEST_CASE("log-cap energy is exactly 2 pi Kk") {
  const auto psi = witness::make_log_cap(1.0 + 1e-12, 1.0);
  CHECK(dirichlet_energy(psi) == Catch::Approx(kTwoPi).epsilon(1e-9));
  const auto psi2 = witness::make_log_cap(2.0, 0.9);
  CHECK(dirichlet_energy(psi2) == Catch::Approx(0.9 * kTwoPi).epsilon(1e-12));
}

TEST_CASE("zero-like profiles") {
  const auto z = RadialProfile::create({0.0, 1.0}, {0.0, 0.0});
  CHECK(dirichlet_energy(z) == 0.0);
  CHECK(mass(z) == 0.0);
  CHECK_THROWS_AS(pointwise_radial_bound(z, 0.5), Error);
}

TEST_CASE("mass matches the quadrature oracle") {
  const auto plateau = witness::make_plateau(0.1, 10.0);
  CHECK(mass(plateau) == Catch::Approx(oracle::mass_by_quadrature(plateau)).epsilon(1e-10));
  Rng rng(20240913);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_decreasing_profile(rng);
    CHECK(mass(p) == Catch::Approx(oracle::mass_by_quadrature(p)).epsilon(1e-7));
  }
}

TEST_CASE("infinite mass is rejected") {
  const auto p = RadialProfile::create({0.0, 1.0}, {2.0, 1.0}, Extension::Constant,
                                       Extension::Constant);
  CHECK_THROWS_AS(mass(p), Error);
}

TEST_CASE("scaling: energy invariant, mass scales by s^2") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_decreasing_profile(rng);
    const double s = std::exp(rng.uniform(-3.0, 3.0));
    const auto q = with_log_shift(p, std::log(s));
    CHECK(dirichlet_energy(q) == Catch::Approx(dirichlet_energy(p)).epsilon(1e-12));
    CHECK(mass(q) == Catch::Approx(s * s * mass(p)).epsilon(1e-12));
  }
}

TEST_CASE("knot refinement changes nothing") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    auto p = random_decreasing_profile(rng);
    const double e0 = dirichlet_energy(p), m0 = mass(p);
    for (int k = 0; k < 6; ++k)
      p = refined_with_knot(p, rng.uniform(p.knots.front(), p.knots.back()));
    CHECK(dirichlet_energy(p) == Catch::Approx(e0).epsilon(1e-12));
    CHECK(mass(p) == Catch::Approx(m0).epsilon(1e-12));
  }
}

TEST_CASE("log-linear replacement never increases energy, keeps endpoints") {
  Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_decreasing_profile(rng);
    const double ta = rng.uniform(p.knots.front(), p.knots.back());
    const double tb = rng.uniform(ta, p.knots.back());
    if (!(tb > ta)) continue;
    const auto q = replace_log_linear(p, ta, tb);
    CHECK(dirichlet_energy(q) <= dirichlet_energy(p) * (1.0 + 1e-12) + 1e-15);
    CHECK(q.value_at_log_r(ta) == Catch::Approx(p.value_at_log_r(ta)).margin(1e-13));
    CHECK(q.value_at_log_r(tb) == Catch::Approx(p.value_at_log_r(tb)).margin(1e-13));
  }
}

TEST_CASE("pointwise radial bound stays under 1/pi for decreasing profiles") {
  // tent phi(r) = max(0, 1 - r), sampled densely in log radius
  std::vector<double> knots, values;
  for (int i = 0; i <= 200; ++i) {
    const double t = -8.0 + 8.0 * i / 200.0;
    knots.push_back(t);
    values.push_back(std::max(0.0, 1.0 - std::exp(t)));
  }
  values.back() = 0.0;
  const auto tent = RadialProfile::create(std::move(knots), std::move(values));
  double worst = 0.0;
  for (int i = 1; i <= 60; ++i) {
    const double r = 0.02 * i;
    worst = std::max(worst, pointwise_radial_bound(tent, r));
  }
  CHECK(pointwise_radial_bound(tent, 0.5) > 0.0);
  CHECK(worst <= 1.0 / kPi + 1e-9);

  const auto f = witness::make_moser(1.0);
  CHECK(pointwise_radial_bound(f, std::exp(-1.0)) <= 1.0 / kPi + 1e-9);

  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_decreasing_profile(rng);
    for (int j = 0; j < 8; ++j) {
      const double r = std::exp(rng.uniform(p.knots.front() - 1.0, p.knots.back() + 1.0));
      CHECK(pointwise_radial_bound(p, r) <= 1.0 / kPi + 1e-9);
    }
  }
}

TEST_CASE("partial energy and mass respect additivity") {
  Rng rng(19);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_decreasing_profile(rng);
    const double tc = rng.uniform(p.knots.front(), p.knots.back());
    const double e = dirichlet_energy(p);
    CHECK(energy_between_log(p, p.knots.front(), tc) + tail_energy_log(p, tc) ==
          Catch::Approx(e).epsilon(1e-12));
    const double m = mass(p);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(mass_between_log(p, -inf, tc) + tail_mass_log(p, tc) ==
          Catch::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("level intervals locate crossings exactly") {
  const auto psi = witness::make_log_cap(2.0, 1.0);  // drops from 2 to 0 over [-4, 0]
  const auto set = level_intervals(psi, 1.0);
  REQUIRE(set.intervals.size() == 1);
  CHECK(set.left_plateau);
  CHECK(set.intervals[0].first == Catch::Approx(-4.0).margin(1e-14));
  CHECK(set.intervals[0].second == Catch::Approx(-2.0).margin(1e-14));

  const auto low = RadialProfile::create({0.0, 1.0}, {0.5, 0.0});
  const auto empty = level_intervals(low, 1.0);
  CHECK(empty.intervals.empty());
  CHECK_FALSE(empty.left_plateau);
}
