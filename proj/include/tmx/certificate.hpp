#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tmx/growth.hpp"
#include "tmx/quadrature.hpp"
#include "tmx/radial_profile.hpp"
#include "tmx/random.hpp"
#include "tmx/witness.hpp"

namespace tmx {
namespace certificate {

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
};

/// Full dyadic bookkeeping for a normalized nonincreasing profile:
/// annuli R_j = R_0 e^{-j} (j increasing inward), boundary values h_j,
/// annular energy shares a_j^2, cumulative shares K_j = K_{j-1} + a_j^2
/// (nondecreasing inward, K_0 = kappa), majorants H_j and xi_j = H_j^2/K_j,
/// and the decay weights eta_j = e^{2 xi_j - 2j} R_0^2 kept in log form.
struct DyadicCertificate {
  RadialProfile profile;
  double kappa = 0.9;
  double t0 = 0.0;     // log R_0
  double R0 = 0.0;
  double M0 = 0.0;     // int_{R_0}^inf phi^2 r dr
  int N = 0;
  std::vector<double> Rj, hj, aj, Kj, Hj, xij, log_etaj;  // index 0..N, a_0 = 0
  std::vector<bool> in_B;                                 // index 0..N, j >= 1 meaningful
  std::vector<std::pair<int, int>> runs;                  // maximal consecutive B runs
  double delta_obs = std::numeric_limits<double>::infinity();
  double log_red_sum = kNegInf;
  double red_ratio = 0.0;  // red sum / M0
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& ch : checks)
      if (!ch.pass) return false;
    return true;
  }
};

namespace detail {

// Largest t with exterior energy share >= kappa; exact on the piecewise
// linear class. Flat stretches of the energy map break toward larger t
// (larger R_0).
inline double energy_split_log_radius(const RadialProfile& p, double kappa) {
  double e_cum = 0.0;  // share beyond the current segment's right end
  for (std::size_t i = p.segment_count(); i-- > 0;) {
    const double s = p.slope(i);
    const double seg = s * s * (p.knots[i + 1] - p.knots[i]);
    const double e_lo = e_cum + seg;
    if (e_lo >= kappa) {
      if (seg == 0.0) return p.knots[i + 1];
      const double t = p.knots[i + 1] - (kappa - e_cum) / (s * s);
      return std::min(t, p.knots[i + 1]);
    }
    e_cum = e_lo;
  }
  return p.knots.front();
}

}  // namespace detail

/// Builds the certificate. Requires \|grad phi\|^2 = 2 pi (relative 1e-9),
/// phi nonincreasing, and a constant plateau toward the center (true by
/// construction for this profile class with a constant left extension).
inline DyadicCertificate build_certificate(const RadialProfile& p, double kappa = 0.9) {
  if (!(kappa > 2.0 / 3.0 && kappa < 1.0))
    throw Error(ErrorCode::InvalidArgument, "kappa must lie in (2/3, 1)");
  const double energy = dirichlet_energy(p);
  if (std::fabs(energy - kTwoPi) > 1e-9 * kTwoPi)
    throw Error(ErrorCode::NotNormalized, "need \\|grad phi\\|^2 = 2 pi");
  if (!p.is_nonincreasing())
    throw Error(ErrorCode::NotMonotone, "need a nonincreasing profile");
  if (p.left != Extension::Constant)
    throw Error(ErrorCode::NoPlateau, "need a constant plateau toward the center");

  DyadicCertificate cert;
  cert.profile = p;
  cert.kappa = kappa;
  cert.t0 = detail::energy_split_log_radius(p, kappa);
  cert.R0 = std::exp(cert.t0);
  cert.M0 = tail_mass_log(p, cert.t0) / kTwoPi;

  const double depth = cert.t0 - p.knots.front();
  if (depth > 200000.0)
    throw Error(ErrorCode::InvalidArgument, "dyadic depth too large for this profile");
  cert.N = depth <= 0.0 ? 0 : static_cast<int>(std::ceil(depth - 1e-12));

  const std::size_t count = static_cast<std::size_t>(cert.N) + 1;
  cert.Rj.resize(count);
  cert.hj.resize(count);
  cert.aj.assign(count, 0.0);
  cert.Kj.resize(count);
  cert.Hj.resize(count);
  cert.xij.resize(count);
  cert.log_etaj.resize(count);
  cert.in_B.assign(count, false);

  for (std::size_t j = 0; j < count; ++j) {
    const double tj = cert.t0 - static_cast<double>(j);
    cert.Rj[j] = std::exp(tj);
    cert.hj[j] = p.value_at_log_r(tj);
    cert.Kj[j] = tail_energy_log(p, tj) / kTwoPi;
    if (j > 0)
      cert.aj[j] = std::sqrt(std::max(0.0, energy_between_log(p, tj, tj + 1.0) / kTwoPi));
  }
  cert.Hj[0] = cert.hj[0];
  for (std::size_t j = 1; j < count; ++j) cert.Hj[j] = cert.Hj[j - 1] + cert.aj[j];
  for (std::size_t j = 0; j < count; ++j) {
    cert.xij[j] = cert.Hj[j] * cert.Hj[j] / cert.Kj[j];
    cert.log_etaj[j] = 2.0 * (cert.xij[j] - static_cast<double>(j)) + 2.0 * cert.t0;
  }
  for (std::size_t j = 1; j < count; ++j) {
    const double lhs = cert.aj[j] * cert.Hj[j - 1];
    const double rhs = cert.Kj[j - 1] - cert.Kj[j] / 3.0;
    cert.in_B[j] = !(lhs <= rhs);
  }
  for (int j = 1; j <= cert.N; ++j) {
    if (!cert.in_B[static_cast<std::size_t>(j)]) continue;
    int b = j;
    while (b + 1 <= cert.N && cert.in_B[static_cast<std::size_t>(b) + 1]) ++b;
    cert.runs.emplace_back(j, b);
    j = b;
  }
  return cert;
}

namespace detail {

inline void add_check(DyadicCertificate& c, std::string name, double lhs, double rhs) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = r.slack >= -1e-10 * std::max(std::fabs(rhs), 1.0);
  c.checks.push_back(std::move(r));
}

}  // namespace detail

/// Evaluates every inequality of the dyadic chain with its slack. A failed
/// check falsifies the implementation, not the input profile.
inline const std::vector<CheckResult>& check_chain(DyadicCertificate& c) {
  c.checks.clear();
  const int N = c.N;
  auto at = [](const std::vector<double>& v, int j) { return v[static_cast<std::size_t>(j)]; };

  // cumulative-energy additivity (identity, orientation K_j nondecreasing inward)
  double worst = 0.0;
  for (int j = 1; j <= N; ++j)
    worst = std::max(worst, std::fabs(at(c.Kj, j) - (at(c.Kj, j - 1) + at(c.aj, j) * at(c.aj, j))));
  detail::add_check(c, "K-additivity", worst, 1e-10);
  detail::add_check(c, "K-total", std::fabs(at(c.Kj, N) - 1.0), 1e-9);

  // h_j <= H_j (cumulative Schwarz)
  for (int j = 0; j <= N; ++j)
    detail::add_check(c, "h<=H[" + std::to_string(j) + "]", at(c.hj, j), at(c.Hj, j));

  // annulus recursion: h_j^2 <= K_j h_{j-1}^2 / K_{j-1} + K_j
  for (int j = 1; j <= N; ++j) {
    const double rhs = at(c.Kj, j) * at(c.hj, j - 1) * at(c.hj, j - 1) / at(c.Kj, j - 1) +
                       at(c.Kj, j);
    detail::add_check(c, "young[" + std::to_string(j) + "]", at(c.hj, j) * at(c.hj, j), rhs);
  }
  // normalized form: h_j^2/K_j <= h_{j-1}^2/K_{j-1} + 1
  for (int j = 1; j <= N; ++j)
    detail::add_check(c, "ratio-increment[" + std::to_string(j) + "]",
                      at(c.hj, j) * at(c.hj, j) / at(c.Kj, j),
                      at(c.hj, j - 1) * at(c.hj, j - 1) / at(c.Kj, j - 1) + 1.0);

  // xi increments: always <= 1, and <= 8/9 off the B set
  for (int j = 1; j <= N; ++j) {
    detail::add_check(c, "xi-increment[" + std::to_string(j) + "]", at(c.xij, j),
                      at(c.xij, j - 1) + 1.0);
    if (!c.in_B[static_cast<std::size_t>(j)])
      detail::add_check(c, "xi-increment-A[" + std::to_string(j) + "]", at(c.xij, j),
                        at(c.xij, j - 1) + 8.0 / 9.0);
  }

  // eta monotone decreasing (log form)
  for (int j = 1; j <= N; ++j)
    detail::add_check(c, "eta-monotone[" + std::to_string(j) + "]", at(c.log_etaj, j),
                      at(c.log_etaj, j - 1));

  // B-set lower bounds: a_j^2 >= const * K_{j-1}^2 / H_{j-1}^2; the hidden
  // constant is recorded as the observed minimum (positivity is the check)
  double c_iv = std::numeric_limits<double>::infinity();
  double c_iv2 = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= N; ++j) {
    if (!c.in_B[static_cast<std::size_t>(j)]) continue;
    const double ratio = at(c.aj, j) * at(c.aj, j) * at(c.Hj, j - 1) * at(c.Hj, j - 1) /
                         (at(c.Kj, j - 1) * at(c.Kj, j - 1));
    c_iv = std::min(c_iv, ratio);
    c_iv2 = std::min(c_iv2,
                     at(c.aj, j) * at(c.aj, j) * (at(c.xij, 0) + static_cast<double>(j) - 1.0));
  }
  if (c_iv != std::numeric_limits<double>::infinity()) {
    detail::add_check(c, "B-lower-observed", 0.0, c_iv);
    detail::add_check(c, "B-lower-observed-indexed", 0.0, c_iv2);
  }

  // per-run zeta bookkeeping
  c.delta_obs = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : c.runs) {
    std::vector<double> zeta(static_cast<std::size_t>(b - a) + 1);
    for (int j = a; j <= b; ++j)
      zeta[static_cast<std::size_t>(j - a)] =
          at(c.Kj, j) * (at(c.xij, a) + static_cast<double>(j - a)) - static_cast<double>(j);
    // H_j^2 - j <= zeta_j
    for (int j = a; j <= b; ++j)
      detail::add_check(c, "zeta-H-bound[" + std::to_string(j) + "]",
                        at(c.Hj, j) * at(c.Hj, j) - static_cast<double>(j),
                        zeta[static_cast<std::size_t>(j - a)]);
    double delta_run = std::numeric_limits<double>::infinity();
    for (int j = a + 1; j <= b; ++j)
      delta_run = std::min(delta_run, at(c.aj, j) * at(c.aj, j) *
                                          (at(c.xij, a) + static_cast<double>(j - 1 - a)));
    c.delta_obs = std::min(c.delta_obs, delta_run);
    if (b > a) {
      const double margin = delta_run + c.kappa - 1.0;
      // the chosen kappa must keep the increment above delta/2
      detail::add_check(c, "zeta-margin[" + std::to_string(a) + ".." + std::to_string(b) + "]",
                        0.5 * delta_run, margin);
      // geometric decay along the run
      for (int j = a; j < b; ++j)
        detail::add_check(c, "zeta-geometric[" + std::to_string(j) + "]",
                          zeta[static_cast<std::size_t>(j - a)],
                          zeta[static_cast<std::size_t>(b - a)] -
                              0.5 * delta_run * static_cast<double>(b - j));
      // sum over the run dominated by eta entering the run
      std::vector<double> terms;
      for (int j = a; j <= b; ++j)
        terms.push_back(2.0 * at(c.Hj, j) * at(c.Hj, j) +
                        2.0 * (c.t0 - static_cast<double>(j)));
      const double lhs = logsumexp(terms);
      const double rhs = at(c.log_etaj, a - 1) - std::log1p(-std::exp(-std::min(margin, 700.0)));
      detail::add_check(c, "B-run-domination[" + std::to_string(a) + ".." + std::to_string(b) + "]",
                        lhs, rhs);
    }
  }

  // geometric domination over the A set
  {
    std::vector<double> a_terms;
    double bound = kNegInf;
    int m = 0;
    std::vector<double> bound_terms;
    for (int j = 1; j <= N; ++j) {
      if (c.in_B[static_cast<std::size_t>(j)]) continue;
      a_terms.push_back(at(c.log_etaj, j));
      ++m;
      bound_terms.push_back(-2.0 * static_cast<double>(m) / 9.0 + at(c.log_etaj, 0));
    }
    if (!a_terms.empty()) {
      detail::add_check(c, "A-geometric-sum", logsumexp(a_terms), logsumexp(bound_terms));
      (void)bound;
    }
  }

  // the exterior pointwise bound seeding the sum: e^{2h_0^2/K_0} R_0^2 / h_0^2
  // against M_0 / K_0^2 (constant recorded through the slack)
  {
    const double log_lhs = 2.0 * at(c.hj, 0) * at(c.hj, 0) / c.kappa + 2.0 * c.t0 -
                           2.0 * std::log(std::max(at(c.hj, 0), 1e-300));
    const double log_rhs = std::log(std::max(c.M0, 1e-300)) - 2.0 * std::log(c.kappa);
    CheckResult r;
    r.name = "seed-ratio-log";
    r.lhs = log_lhs;
    r.rhs = log_rhs;
    r.slack = log_rhs - log_lhs;
    r.pass = std::isfinite(log_lhs) && c.M0 > 0.0;
    c.checks.push_back(r);
  }

  // the summed bound: sum_j e^{2 h_j^2} R_j^2 / h_j^2 against M_0
  {
    std::vector<double> terms;
    for (int j = 0; j <= N; ++j)
      terms.push_back(2.0 * at(c.hj, j) * at(c.hj, j) +
                      2.0 * (c.t0 - static_cast<double>(j)) -
                      2.0 * std::log(std::max(at(c.hj, j), 1e-300)));
    c.log_red_sum = logsumexp(terms);
    c.red_ratio = std::exp(c.log_red_sum - std::log(std::max(c.M0, 1e-300)));
    CheckResult r;
    r.name = "red-sum-ratio";
    r.lhs = c.log_red_sum;
    r.rhs = std::log(std::max(c.M0, 1e-300));
    r.slack = r.rhs - r.lhs;  // log of 1/constant
    r.pass = std::isfinite(c.log_red_sum) && c.M0 > 0.0 && std::isfinite(c.red_ratio);
    c.checks.push_back(r);
  }

  // subcritical exterior: int_{r>R_0} g(phi) dx against 2 pi M_0 with the
  // explicit constants of the (R/r)^{2K'} comparison. Above the level
  // phi = 1 the bound is e^{4K'/(1-kappa)}/(1-K') per unit of mass, below
  // it g(u) = u^2 e^{2u^2} <= e^2 u^2.
  {
    const Growth g = Growth::theorem_form(1.0);
    const double Kp = 0.5 * (1.0 + c.kappa);
    const double h0 = at(c.hj, 0);
    const double t_end = c.profile.knots.back();
    double t_split = c.t0;  // where phi crosses 1, right of R_0
    if (h0 > 1.0) {
      t_split = t_end;
      for (std::size_t i = 0; i < c.profile.segment_count(); ++i) {
        const double v0 = c.profile.values[i], v1 = c.profile.values[i + 1];
        const double k0 = c.profile.knots[i], k1 = c.profile.knots[i + 1];
        if (k1 <= c.t0 || v0 == v1) continue;
        if (v0 >= 1.0 && v1 < 1.0) {
          const double tc = k0 + (1.0 - v0) / (v1 - v0) * (k1 - k0);
          if (tc >= c.t0) { t_split = tc; break; }
        }
      }
    }
    double lhs = 0.0, rhs = 0.0;
    if (t_split > c.t0) {
      LevelSet super;
      super.intervals = {{c.t0, t_split}};
      lhs += g_functional_over(c.profile, g, super);
      rhs += std::exp(4.0 * Kp / (1.0 - c.kappa)) / (1.0 - Kp) *
             mass_between_log(c.profile, c.t0, t_split);
    }
    LevelSet sub;
    sub.intervals = {{t_split, t_end}};
    lhs += g_functional_over(c.profile, g, sub);
    rhs += std::exp(2.0) * tail_mass_log(c.profile, t_split);
    detail::add_check(c, "subcritical-tail", lhs, rhs);
  }

  return c.checks;
}

/// Max over a family of the summed-bound constant, with the argmax index.
struct RedSumSurvey {
  double max_ratio = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;
};

inline RedSumSurvey empirical_red_sum_constant(const std::vector<RadialProfile>& family,
                                               double kappa) {
  RedSumSurvey survey;
  survey.ratios.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto cert = build_certificate(family[i], kappa);
    check_chain(cert);
    survey.ratios.push_back(cert.red_ratio);
    if (cert.red_ratio > survey.max_ratio) {
      survey.max_ratio = cert.red_ratio;
      survey.argmax = i;
    }
  }
  return survey;
}

/// Level truncation g^L: g below |u| = L, frozen at g(L) beyond.
inline Growth truncated(const Growth& g, double L) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation level must be positive");
  return Growth::from_log_function(
      g.name() + "^" + std::to_string(L),
      [g, L](double u) { return g.log_value(std::min(std::fabs(u), L)); },
      g.exponent_rate());
}

struct CompactnessSplit {
  double level_part = 0.0;  // int_{|phi| > L} g(phi) dx
  double tail_part = 0.0;   // int_{r > R} g(phi) dx
  double mass = 0.0;
};

/// The two truncation integrals behind the compactness argument: both must
/// be small multiples of the mass once L and R are large enough.
inline CompactnessSplit compactness_split(const RadialProfile& p, const Growth& g, double L,
                                          double R) {
  CompactnessSplit out;
  out.mass = mass(p);
  const auto over = level_intervals(p, L);
  out.level_part = over.intervals.empty() && !over.left_plateau
                       ? 0.0
                       : g_functional_over(p, g, over);
  const double tR = std::log(R);
  if (tR < p.knots.back()) {
    LevelSet tail;
    tail.left_plateau = false;
    tail.intervals = {{std::max(tR, p.knots.front()), p.knots.back()}};
    out.tail_part = g_functional_over(p, g, tail);
  }
  return out;
}

/// Random profile for chain surveys: nonincreasing, energy exactly 2 pi
/// (knot-gap scaling), boundary value at the kappa = 0.9 split above 1.
/// Mixes generic staircases with near-extremal caps so the family tracks
/// the concentration corner where the constants are attained.
inline RadialProfile random_admissible_profile(Rng& rng) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<double> knots, values;
    const int shape = rng.uniform_int(0, 2);
    if (shape == 0) {  // generic decreasing staircase
      const int m = rng.uniform_int(3, 12);
      double t = 0.0;
      double v = rng.uniform(1.6, 5.5);
      for (int i = 0; i < m; ++i) {
        knots.push_back(t);
        values.push_back(v);
        t += rng.uniform(0.2, 2.5);
        v -= rng.uniform(0.05, 1.0) * v / m * 2.0;
        if (v < 0.0) v = 0.0;
      }
      knots.push_back(t);
      values.push_back(0.0);
    } else if (shape == 1) {  // noisy cap
      const double b = rng.uniform(1.6, 6.0);
      const double T = b * b / rng.uniform(0.7, 1.0);
      knots = {-T, -T * rng.uniform(0.3, 0.7), 0.0};
      values = {b, b * rng.uniform(0.25, 0.75), 0.0};
    } else {  // concentration profile with a mass-bearing foot
      const double b = rng.uniform(1.6, 5.0);
      const double T = b * b;
      const double foot = rng.uniform(0.05, 0.5);
      knots = {-T, -T * 0.05, rng.uniform(0.5, 3.0)};
      values = {b, b * foot, 0.0};
    }
    auto p = RadialProfile::create(std::move(knots), std::move(values));
    const double e = dirichlet_energy(p);
    if (!(e > 0.0)) continue;
    const double gamma = e / kTwoPi;
    for (std::size_t i = 1; i < p.knots.size(); ++i)
      p.knots[i] = p.knots[0] + (p.knots[i] - p.knots[0]) * gamma;
    p.validate();
    const double t0 = detail::energy_split_log_radius(p, 0.9);
    if (p.value_at_log_r(t0) < 1.02) continue;
    return p;
  }
  throw Error(ErrorCode::NoConvergence, "profile sampler failed to meet admissibility");
}

}  // namespace certificate
}  // namespace tmx

}  // namespace certificate
}  // namespace tmx
