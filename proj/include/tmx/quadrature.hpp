#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tmx/growth.hpp"
#include "tmx/radial_profile.hpp"

namespace tmx {

/// log(sum exp(x_i)) over a list of log-scale contributions.
inline double logsumexp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs)
    if (x != kNegInf) s += std::exp(x - m);
  return m + std::log(s);
}

namespace detail {

inline constexpr double kQuadRelTol = 1e-11;  // per piece; 1e-10 overall

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
  double integral = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

template <class F>
GkEstimate gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double ik = 0.0, ig = 0.0, l1 = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (i == 7) {
      const double v = f(c);
      ik += kGkWeights[7] * v;
      ig += kGaussWeights[3] * v;
      l1 += kGkWeights[7] * std::fabs(v);
      break;
    }
    const double vl = f(c - h * kGkNodes[i]);
    const double vr = f(c + h * kGkNodes[i]);
    ik += kGkWeights[i] * (vl + vr);
    l1 += kGkWeights[i] * (std::fabs(vl) + std::fabs(vr));
    if (i % 2 == 1) ig += kGaussWeights[i / 2] * (vl + vr);
  }
  GkEstimate e;
  e.integral = ik * h;
  e.l1 = l1 * h;
  const double diff = std::fabs(ik - ig) * h;
  // Piessens' error sharpening, with a floor at quadrature noise level
  e.error = std::max(std::pow(200.0 * diff / std::max(e.l1, 1e-300), 1.5) *
                         std::max(e.l1, 1e-300) / 200.0,
                     50.0 * 1e-17 * e.l1);
  e.error = std::min(e.error, diff == 0.0 ? 0.0 : std::max(diff, 50.0 * 1e-17 * e.l1));
  return e;
}

// Globally adaptive Gauss-Kronrod with an explicit interval budget and a
// floating-noise floor, so exponential boundary layers over huge spans
// terminate. Returns the integral of f over [a, b].
template <class F>
double integrate_adaptive(const F& f, double a, double b, double rel_tol) {
  struct Node { double a, b; GkEstimate e; bool saturated; };
  std::vector<Node> nodes;
  nodes.push_back({a, b, gk15(f, a, b), false});
  const int max_intervals = 4000;
  for (int it = 0; it < max_intervals; ++it) {
    double total = 0.0, total_err = 0.0, total_l1 = 0.0;
    int worst = -1;
    double worst_err = 0.0;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      total += nodes[i].e.integral;
      total_l1 += nodes[i].e.l1;
      total_err += nodes[i].saturated ? 0.0 : nodes[i].e.error;
      if (!nodes[i].saturated && nodes[i].e.error > worst_err) {
        worst_err = nodes[i].e.error;
        worst = i;
      }
    }
    const double target = std::max(rel_tol * total_l1, 1e-15 * total_l1);
    if (worst < 0 || total_err <= target) return total;
    Node n = nodes[static_cast<std::size_t>(worst)];
    const double mid = 0.5 * (n.a + n.b);
    if (!(mid > n.a && mid < n.b)) {  // width exhausted
      nodes[static_cast<std::size_t>(worst)].saturated = true;
      continue;
    }
    Node left{n.a, mid, gk15(f, n.a, mid), false};
    Node right{mid, n.b, gk15(f, mid, n.b), false};
    // no measurable improvement: the estimate is noise-limited
    if (left.e.error + right.e.error > 0.99 * n.e.error &&
        std::fabs(left.e.integral + right.e.integral - n.e.integral) <
            1e-15 * std::max(n.e.l1, 1e-300)) {
      left.saturated = right.saturated = true;
    }
    nodes[static_cast<std::size_t>(worst)] = left;
    nodes.push_back(right);
  }
  double total = 0.0;
  for (const auto& n : nodes) total += n.e.integral;
  return total;
}

// log of int_a^b exp(L(t)) dt. The integrand may span thousands of orders
// of magnitude: the max of L is located first (coarse scan plus
// golden-section refinement) and the adaptive rule runs on the shifted
// integrand, split at the peak so a narrow spike always sits on a panel
// boundary.
inline double log_integral_exp(const std::function<double(double)>& L, double a, double b) {
  if (!(b > a)) return kNegInf;
  const int n_coarse = 64;
  double m = kNegInf;
  int arg = 0;
  for (int i = 0; i <= n_coarse; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / n_coarse;
    const double v = L(t);
    if (v > m) { m = v; arg = i; }
  }
  if (m == kNegInf) return kNegInf;
  double peak = a + (b - a) * static_cast<double>(arg) / n_coarse;
  {
    const double h = (b - a) / n_coarse;
    double lo = std::max(a, peak - h);
    double hi = std::min(b, peak + h);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = L(x1), f2 = L(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = L(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = L(x1);
      }
      if (f1 > m) { m = f1; peak = x1; }
      if (f2 > m) { m = f2; peak = x2; }
    }
  }
  const double shift = m;
  auto f = [&](double t) {
    const double v = L(t) - shift;
    return v == kNegInf ? 0.0 : std::exp(v);
  };
  // Integrate in geometric windows away from the peak: the dominant value
  // then always sits on a panel edge, so a boundary layer that is orders
  // of magnitude narrower than the span cannot be stepped over.
  double integral = 0.0;
  auto sweep = [&](double from, double to) {  // |from| side holds the peak
    const double span = std::fabs(to - from);
    if (span == 0.0) return;
    const double dir = to > from ? 1.0 : -1.0;
    double w = std::min(1.0, span);
    double lo = from;
    while (true) {
      double hi = lo + dir * w;
      if ((dir > 0 && hi >= to) || (dir < 0 && hi <= to)) hi = to;
      integral += dir > 0 ? integrate_adaptive(f, lo, hi, kQuadRelTol)
                          : integrate_adaptive(f, hi, lo, kQuadRelTol);
      if (hi == to) break;
      lo = hi;
      w *= 2.0;
    }
  };
  sweep(peak, b);
  if (peak > a) sweep(peak, a);
  if (!(integral > 0.0)) return kNegInf;
  return shift + std::log(integral);
}

// Splits one knot segment so the exponent proxy rate*phi^2 + 2t moves by
// at most ~0.5 per piece (capped), then integrates piece by piece.
inline void segment_log_pieces(const RadialProfile& p, const Growth& g, std::size_t seg,
                               double lo, double hi, std::vector<double>& out) {
  if (!(hi > lo)) return;
  const double s = p.slope(seg);
  const double t0 = p.knots[seg];
  const double v0 = p.values[seg];
  auto phi = [&](double t) { return v0 + s * (t - t0); };
  auto L = [&](double t) { return g.log_value(phi(t)) + 2.0 * t; };

  const double rate = g.exponent_rate();
  auto proxy = [&](double t) { return rate * phi(t) * phi(t) + 2.0 * t; };
  double lo_e = proxy(lo), hi_e = proxy(hi);
  double span = std::fabs(hi_e - lo_e);
  if (rate != 0.0 && s != 0.0) {
    const double t_vertex = t0 + (-1.0 / (rate * s) - v0) / s;
    if (t_vertex > lo && t_vertex < hi) {
      const double ve = proxy(t_vertex);
      span = std::max(std::fabs(hi_e - ve), std::fabs(ve - lo_e)) * 2.0;
    }
  }
  const double wanted = std::ceil(span / 0.5);
  const int pieces = wanted >= 128.0 ? 128 : std::max(1, static_cast<int>(wanted));
  const double log_two_pi = std::log(kTwoPi);
  for (int k = 0; k < pieces; ++k) {
    const double a = lo + (hi - lo) * static_cast<double>(k) / pieces;
    const double b = lo + (hi - lo) * static_cast<double>(k + 1) / pieces;
    const double piece = log_integral_exp(L, a, b);
    if (piece != kNegInf) out.push_back(log_two_pi + piece);
  }
}

}  // namespace detail

/// log of G(phi) = log int g(phi(x)) dx, accumulated in log-sum-exp form so
/// that extreme concentration profiles never overflow. Deterministic.
inline double g_functional_log(const RadialProfile& p, const Growth& g) {
  std::vector<double> parts;
  // plateau inside r_0 contributes pi r_0^2 g(v_0)
  if (p.left == Extension::Constant) {
    const double lg = g.log_value(p.values.front());
    if (lg != kNegInf) parts.push_back(std::log(kPi) + 2.0 * p.knots.front() + lg);
  }
  // beyond the last knot the profile is 0 (or a constant); the integral is
  // finite only if g vanishes there
  const double tail_value = p.right == Extension::Constant ? p.values.back() : 0.0;
  if (g.log_value(tail_value) != kNegInf)
    throw Error(ErrorCode::Overflow, "G(phi) infinite: g does not vanish on the far tail");
  for (std::size_t i = 0; i < p.segment_count(); ++i)
    detail::segment_log_pieces(p, g, i, p.knots[i], p.knots[i + 1], parts);
  return logsumexp(parts);
}

/// G(phi) as a plain double. Throws Overflow when the value exceeds the
/// representable range (the log form is still available then).
inline double g_functional(const RadialProfile& p, const Growth& g) {
  const double lg = g_functional_log(p, g);
  if (lg > 709.5) throw Error(ErrorCode::Overflow, "G(phi) exceeds double range");
  return lg == kNegInf ? 0.0 : std::exp(lg);
}

/// log of int over {t in intervals} of g(phi) dx, with the left plateau
/// included on demand (used for super-level-set integrals).
inline double g_functional_over_log(const RadialProfile& p, const Growth& g,
                                    const LevelSet& set) {
  std::vector<double> parts;
  if (set.left_plateau && p.left == Extension::Constant) {
    const double lg = g.log_value(p.values.front());
    if (lg != kNegInf) parts.push_back(std::log(kPi) + 2.0 * p.knots.front() + lg);
  }
  for (const auto& [a, b] : set.intervals) {
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
      const double lo = std::max(a, p.knots[i]);
      const double hi = std::min(b, p.knots[i + 1]);
      if (hi > lo) detail::segment_log_pieces(p, g, i, lo, hi, parts);
    }
  }
  return logsumexp(parts);
}

inline double g_functional_over(const RadialProfile& p, const Growth& g, const LevelSet& set) {
  const double lg = g_functional_over_log(p, g, set);
  if (lg > 709.5) throw Error(ErrorCode::Overflow, "integral exceeds double range");
  return lg == kNegInf ? 0.0 : std::exp(lg);
}

}  // namespace tmx
