#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tmx/witness.hpp"

using namespace tmx;
using namespace tmx::witness;

TEST_CASE("plateau: ramp energy closed form and norms scale") {
  const auto p = make_plateau(0.1, 100.0);
  const double e = dirichlet_energy(p);
  // energy / (a^2 R) sits between 1 and 4 pi; the log-linear ramp gives
  // 2 pi a^2 (R + 1/2 + O(1/R))
  CHECK(e / (0.01 * 100.0) > 1.0);
  CHECK(e / (0.01 * 100.0) < 4.0 * kPi);
  CHECK(e == Catch::Approx(kTwoPi * 0.01 / std::log(1.01)).epsilon(1e-12));

  // a -> 0 with R fixed: every norm vanishes like a^2
  const auto small = make_plateau(0.001, 100.0);
  CHECK(dirichlet_energy(small) == Catch::Approx(e * 1e-4).epsilon(1e-10));
  CHECK(mass(small) == Catch::Approx(mass(p) * 1e-4).epsilon(1e-10));
}

TEST_CASE("plateau: G dominates the cap contribution") {
  const auto g = Growth::exp_minus_one(1.0);
  const auto p = make_plateau(0.5, 30.0);
  const auto rep = report_for(p, g, WitnessParams{Family::Plateau, 0.5, 30.0});
  CHECK(rep.g_lower_bound == Catch::Approx(kPi * 900.0 * std::expm1(0.25)).epsilon(1e-12));
  CHECK(rep.g_value >= rep.g_lower_bound);
  CHECK(rep.energy < kTwoPi);  // small-amplitude plateau is well inside any unit budget
}

TEST_CASE("plateau blow-up schedule: G diverges while mass vanishes") {
  // schedule violating the quadratic origin bound: g(a_n) >= n a_n^2,
  // realized by g(u) = |u| (so g(a)/a^2 = 1/a -> infinity)
  const auto g = Growth::from_log_function(
      "abs", [](double u) { return u == 0.0 ? kNegInf : std::log(std::fabs(u)); }, 0.0);
  double prev_g = 0.0;
  double prev_mass = 1e300;
  for (int n = 4; n <= 4096; n *= 4) {
    const double a = 1.0 / n;  // g(a) = a = n a^2
    const double R = 1.0 / std::sqrt(a) + 1.0 / (a * std::pow(n, 0.25));
    const auto p = make_plateau(a, R);
    const double G = g_functional(p, g);
    const double m = mass(p);
    CHECK(G >= kPi * R * R * a);          // cap bound with g(a) = a
    CHECK(G > prev_g);                    // diverging
    CHECK(m < prev_mass);                 // vanishing
    prev_g = G;
    prev_mass = m;
  }
  CHECK(prev_g > 50.0);
  CHECK(prev_mass < 0.05);
}

TEST_CASE("log-cap invariants: exact energy, two-sided mass asymptotic") {
  for (double b : {3.0, 5.0, 9.0, 14.0}) {
    for (double Kk : {0.5, 0.8, 1.0}) {
      const auto psi = make_log_cap(b, Kk);
      CHECK(dirichlet_energy(psi) == Catch::Approx(kTwoPi * Kk).epsilon(1e-12));
      // mass -> (1/4) 2 pi Kk^2/b^2; the sharpened asymptotic holds within
      // a factor 2 from b = 3 on
      const double asym = 0.25 * kTwoPi * Kk * Kk / (b * b);
      CHECK(mass(psi) / asym > 0.5);
      CHECK(mass(psi) / asym < 2.0);
    }
  }
}

TEST_CASE("rescaling fixes energy and scales mass") {
  const auto psi = make_log_cap(2.0, 0.7);
  const auto phi = make_rescaled(2.0, 0.7, 5.0);
  CHECK(dirichlet_energy(phi) == Catch::Approx(dirichlet_energy(psi)).epsilon(1e-12));
  CHECK(mass(phi) == Catch::Approx(25.0 * mass(psi)).epsilon(1e-12));
}

TEST_CASE("concentration sequence: threshold growth gives mass-bearing witnesses") {
  const auto g = Growth::theorem_form(1.0);
  const auto reps = make_concentration_sequence(1.0, g, 12, Regime::CompactnessFail);
  REQUIRE(reps.size() == 12);
  for (const auto& r : reps) {
    CHECK(r.energy < kTwoPi);  // strictly inside the budget
    CHECK(r.g_value >= r.g_lower_bound * (1.0 - 1e-9));
    // ratio >= c_k / K^2 with K = 1
    CHECK(r.ratio >= std::exp(r.log_ck));
  }
  // G bounded below by a fixed delta from k = 4 on, mass bounded below
  for (std::size_t i = 3; i < reps.size(); ++i) {
    CHECK(reps[i].g_value > 0.5);
    CHECK(reps[i].mass > 0.5);
  }
}

TEST_CASE("concentration sequence: weak-null pointwise decay") {
  const auto g = Growth::theorem_form(1.0);
  const auto reps = make_concentration_sequence(1.0, g, 12, Regime::CompactnessFail);
  for (double r : {0.1, 1.0, 10.0}) {
    double prev = 1e300;
    for (std::size_t i = 3; i < reps.size(); ++i) {
      const auto& w = reps[i].params;
      const double v = make_rescaled(w.b, w.Kk, w.S).value_at_radius(r);
      CHECK(v <= prev);
      prev = v;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("denominator power below 2 blows up by at least 10x over k=2..8") {
  const auto g = Growth::exact_growth(1.0, 1.5);
  const auto reps = make_concentration_sequence(1.0, g, 8, Regime::BoundednessFail);
  for (std::size_t i = 1; i < reps.size(); ++i) CHECK(reps[i].ratio > reps[i - 1].ratio);
  CHECK(reps[7].ratio / reps[1].ratio >= 10.0);
  // blow-up route: mass decays along the tail of the schedule
  CHECK(reps[7].mass < reps[1].mass);
}

TEST_CASE("denominator power 2 stays in a factor-3 band and refuses the blow-up regime") {
  const auto g = Growth::exact_growth(1.0, 2.0);
  CHECK_THROWS_AS(make_concentration_sequence(1.0, g, 8, Regime::BoundednessFail), Error);
  const auto reps = make_concentration_sequence(1.0, g, 8, Regime::CompactnessFail);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 1; i < reps.size(); ++i) {
    lo = std::min(lo, reps[i].ratio);
    hi = std::max(hi, reps[i].ratio);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("subcritical growth yields no concentration witness") {
  const auto g = Growth::exact_growth(2.0, 2.0);  // tuned to a larger budget
  CHECK_THROWS_AS(make_concentration_sequence(1.0, g, 4, Regime::CompactnessFail), Error);
}
