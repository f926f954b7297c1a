#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "tmx/errors.hpp"
#include "tmx/radial_profile.hpp"
#include "tmx/random.hpp"
#include "tmx/witness.hpp"

namespace tmx {
namespace extremal {

/// Finite nonnegative sequence a_0..a_N with the three norms that drive
/// the optimal-descent problem.
struct DiscreteSequence {
  std::vector<double> a;

  double norm1() const {
    double s = 0.0;
    for (double x : a) s += std::fabs(x);
    return s;
  }
  double norm2_sq() const {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
  }
  /// sum e^{2n} a_n^2
  double norm_e_sq() const {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
      s += std::exp(2.0 * static_cast<double>(n)) * a[n] * a[n];
    return s;
  }
};

struct ExtremalSolution {
  DiscreteSequence sequence;
  double objective = 0.0;    // ||a||_(e)
  double lambda_sum = 0.0;   // multiplier of the l1 equality
  double lambda_ball = 0.0;  // multiplier of the l2 ball (0 when inactive)
  bool active_ball = false;
  double h = 0.0;
  int N = 0;
  double kkt_residual = 0.0;
};

/// Minimizes ||a||_(e) subject to sum a_n = h, sum a_n^2 <= 1, a_n >= 0
/// over indices 0..N. Stationarity gives a_n = c/(e^{2n} + mu); the ball
/// multiplier mu is located by bisection (the constraint function is
/// monotone in mu), and c is eliminated through the equality. All
/// stationary amplitudes are automatically positive, so the nonnegativity
/// bounds never activate.
inline ExtremalSolution solve_mu_d(double h, int N) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  if (N < 0 || N > 350) throw Error(ErrorCode::InvalidArgument, "N out of range [0, 350]");
  const std::size_t count = static_cast<std::size_t>(N) + 1;
  const double h_max = std::sqrt(static_cast<double>(count));
  if (h > h_max * (1.0 + 1e-12))
    throw Error(ErrorCode::Infeasible, "h exceeds sqrt(N+1): l1 and l2 demands conflict");

  ExtremalSolution sol;
  sol.h = h;
  sol.N = N;

  std::vector<double> w(count);
  for (std::size_t n = 0; n < count; ++n) w[n] = std::exp(2.0 * static_cast<double>(n));

  // Cauchy-Schwarz equality corner: the constant sequence is the only
  // feasible point, returned exactly.
  if (h >= h_max * (1.0 - 1e-13)) {
    sol.sequence.a.assign(count, h / static_cast<double>(count));
    sol.objective = std::sqrt(sol.sequence.norm_e_sq());
    sol.active_ball = true;
    sol.lambda_ball = std::numeric_limits<double>::infinity();
    sol.lambda_sum = std::numeric_limits<double>::infinity();
    sol.kkt_residual = std::fabs(sol.sequence.norm1() - h) / h;
    return sol;
  }

  auto s1 = [&](double mu) {
    double s = 0.0;
    for (double wi : w) s += 1.0 / (wi + mu);
    return s;
  };
  auto s2 = [&](double mu) {
    double s = 0.0;
    for (double wi : w) s += 1.0 / ((wi + mu) * (wi + mu));
    return s;
  };
  // ||a||_2^2 at the stationary point with the equality enforced
  auto ball = [&](double mu) {
    const double S1 = s1(mu);
    return h * h * s2(mu) / (S1 * S1);
  };

  double mu = 0.0;
  bool active = false;
  if (ball(0.0) > 1.0) {
    active = true;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (ball(hi) > 1.0) {
      lo = hi;
      hi *= 4.0;
      if (++guard > 200)
        throw Error(ErrorCode::NoConvergence, "ball multiplier bracket failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (ball(mid) > 1.0 ? lo : hi) = mid;
    }
    mu = 0.5 * (lo + hi);
  }

  const double c = h / s1(mu);
  sol.sequence.a.resize(count);
  for (std::size_t n = 0; n < count; ++n) sol.sequence.a[n] = c / (w[n] + mu);
  sol.objective = std::sqrt(sol.sequence.norm_e_sq());
  sol.lambda_sum = 2.0 * c;
  sol.lambda_ball = mu;
  sol.active_ball = active;

  const double n1 = sol.sequence.norm1();
  const double n2sq = sol.sequence.norm2_sq();
  double res = std::fabs(n1 - h) / h;
  res = std::max(res, std::max(0.0, n2sq - 1.0));
  if (active) res = std::max(res, std::fabs(n2sq - 1.0));
  for (std::size_t n = 0; n < count; ++n)
    res = std::max(res, std::fabs(2.0 * (w[n] + mu) * sol.sequence.a[n] - sol.lambda_sum) /
                            sol.lambda_sum);
  sol.kkt_residual = res;
  return sol;
}

struct AsymptoticRatio {
  int n = 0;
  double mu_d = 0.0;             // mu_d(sqrt(n))
  double ratio = 0.0;            // mu_d(sqrt(n)) sqrt(n) e^{-n}
  double constant_seq_bound = 0.0;  // same ratio for a = (1,..,1)/sqrt(n)
};

/// Ratios mu_d(sqrt n) sqrt(n) e^{-n}: bounded above and below by absolute
/// constants. N = n + 20 suffices, the tail indices decay like e^{n-j}.
inline std::vector<AsymptoticRatio> mu_d_asymptotic_ratio(const std::vector<int>& n_range) {
  std::vector<AsymptoticRatio> out;
  out.reserve(n_range.size());
  for (int n : n_range) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need n >= 2");
    AsymptoticRatio row;
    row.n = n;
    const auto sol = solve_mu_d(std::sqrt(static_cast<double>(n)), n + 20);
    row.mu_d = sol.objective;
    row.ratio = sol.objective * std::sqrt(static_cast<double>(n)) * std::exp(-n);
    row.constant_seq_bound =
        std::sqrt((1.0 - std::exp(-2.0 * n)) / (std::exp(2.0) - 1.0));
    out.push_back(row);
  }
  return out;
}

/// Samples phi on the lattice r = e^k and returns the decrements
/// a_k = phi(e^k) - phi(e^{k+1}). For compactly supported nonincreasing
/// profiles, ||a||_1 = phi(1) and 2 pi ||a||_2^2 is a lower bound for the
/// exterior Dirichlet energy (Schwarz on each annulus).
inline DiscreteSequence reduce_profile_to_sequence(const RadialProfile& p) {
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    if (p.knots[i + 1] <= 0.0) continue;  // only the region r > 1 matters
    if (p.values[i + 1] > p.values[i] + 1e-12)
      throw Error(ErrorCode::NotMonotone, "profile must be nonincreasing on r > 1");
  }
  if (p.right == Extension::Constant && p.values.back() != 0.0)
    throw Error(ErrorCode::InvalidArgument, "profile must be compactly supported");
  const int k_max = std::max(1, static_cast<int>(std::ceil(p.knots.back())));
  DiscreteSequence seq;
  seq.a.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double hk = p.value_at_log_r(static_cast<double>(k));
    const double hk1 = p.value_at_log_r(static_cast<double>(k + 1));
    seq.a.push_back(std::max(0.0, hk - hk1));
  }
  return seq;
}

/// Profile with the lattice values h_k = sum_{j >= k} a_j, log-linear in
/// between: the energy-optimal representative of the sequence.
inline RadialProfile rebuild_from_sequence(const DiscreteSequence& seq) {
  const std::size_t n = seq.a.size();
  std::vector<double> knots, values;
  knots.reserve(n + 1);
  values.reserve(n + 1);
  double h = 0.0;
  std::vector<double> hs(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    h += seq.a[k];
    hs[k] = h;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    knots.push_back(static_cast<double>(k));
    values.push_back(hs[k]);
  }
  values.back() = 0.0;
  return RadialProfile::create(std::move(knots), std::move(values), Extension::Constant,
                               Extension::Zero);
}

/// Ratio of e^{2 phi(R)^2/K} / (phi(R)^2/K^2) against ||phi/R||^2 on r > R,
/// i.e. the constant-free sides of the exterior pointwise bound. Requires
/// the exterior energy budget 2 pi K and phi(R) > 1 (the bound degenerates
/// at and below boundary value 1).
inline double radial_tm_check(const RadialProfile& p, double R, double K) {
  if (!(R > 0.0) || !(K > 0.0))
    throw Error(ErrorCode::InvalidArgument, "need R > 0 and K > 0");
  const double tR = std::log(R);
  const double tail_e = tail_energy_log(p, tR);
  if (tail_e > kTwoPi * K * (1.0 + 1e-9))
    throw Error(ErrorCode::EnergyBudgetExceeded, "exterior energy exceeds 2 pi K");
  const double h = p.value_at_log_r(tR);
  if (!(h > 1.0))
    throw Error(ErrorCode::ZeroBoundaryValue, "phi(R) <= 1: outside the admissible range");
  const double tail_m = tail_mass_log(p, tR);
  const double log_lhs = 2.0 * h * h / K + 2.0 * std::log(K) - 2.0 * std::log(h);
  const double log_rhs = std::log(tail_m) - 2.0 * tR;
  const double log_ratio = log_lhs - log_rhs;
  if (log_ratio > 709.0) throw Error(ErrorCode::Overflow, "ratio exceeds double range");
  return std::exp(log_ratio);
}

struct BoundaryMassCheck {
  double h0_sq = 0.0;
  double bound = 0.0;  // 8/(sqrt(e)-1) int_1^{e^{1/4}} phi^2 r dr
  bool pass = false;
};

/// Lattice-entry control: with exterior energy at most 2 pi and
/// phi(1) > 1, Schwarz on [1, e^{1/4}] keeps phi above phi(1) - 1/2 there,
/// so the first annulus alone carries a fixed multiple of phi(1)^2.
inline BoundaryMassCheck boundary_mass_check(const RadialProfile& p) {
  const double tail_e = tail_energy_log(p, 0.0);
  if (tail_e > kTwoPi * (1.0 + 1e-9))
    throw Error(ErrorCode::EnergyBudgetExceeded, "exterior energy exceeds 2 pi");
  const double h0 = p.value_at_log_r(0.0);
  if (!(h0 > 1.0))
    throw Error(ErrorCode::ZeroBoundaryValue, "phi(1) <= 1: outside the admissible range");
  BoundaryMassCheck chk;
  chk.h0_sq = h0 * h0;
  const double annulus = mass_between_log(p, 0.0, 0.25) / kTwoPi;  // int phi^2 r dr
  chk.bound = 8.0 / (std::exp(0.5) - 1.0) * annulus;
  chk.pass = chk.h0_sq <= chk.bound * (1.0 + 1e-9);
  return chk;
}

/// Random admissible sample for the exterior pointwise bound: a noisy
/// log-cap with boundary value h in [1.05, 6], exterior energy scaled to
/// a random fraction of the budget. Returns the profile and the probe
/// radius R (the cap edge).
inline std::pair<RadialProfile, double> random_tm_sample(Rng& rng, double K) {
  const double h = rng.uniform(1.05, 6.0);
  const double frac = rng.uniform(0.4, 1.0);
  const double T = h * h / (K * frac);  // ramp length in t
  const int m = rng.uniform_int(2, 8);
  std::vector<double> knots, values;
  knots.push_back(-T);
  values.push_back(h);
  // interior ramp knots, strictly decreasing values
  std::vector<double> ts, vs;
  for (int i = 0; i < m; ++i) {
    ts.push_back(rng.uniform(-T, 0.0));
    vs.push_back(rng.uniform(0.0, h));
  }
  std::sort(ts.begin(), ts.end());
  std::sort(vs.begin(), vs.end(), std::greater<double>());
  for (int i = 0; i < m; ++i) {
    if (ts[static_cast<std::size_t>(i)] <= knots.back() + 1e-6) continue;
    if (vs[static_cast<std::size_t>(i)] >= values.back() - 1e-6) continue;
    knots.push_back(ts[static_cast<std::size_t>(i)]);
    values.push_back(vs[static_cast<std::size_t>(i)]);
  }
  knots.push_back(0.0);
  values.push_back(0.0);
  auto p = RadialProfile::create(std::move(knots), std::move(values));
  // stretch the exterior so its energy lands exactly on frac * 2 pi K
  const double e = tail_energy_log(p, -T);
  const double gamma = e / (kTwoPi * K * frac);
  for (std::size_t i = 1; i < p.knots.size(); ++i)
    p.knots[i] = -T + (p.knots[i] + T) * gamma;
  p.validate();
  return {std::move(p), std::exp(-T)};
}

}  // namespace extremal
}  // namespace tmx
