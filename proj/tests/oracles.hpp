#pragma once

// Test-only oracles, independent of the library's closed forms and
// log-domain quadrature: plain adaptive Simpson on the radial integrand
// and exact polynomial-times-exponential moments via the recurrence
// int t^n e^{2t} dt = t^n e^{2t}/2 - (n/2) int t^{n-1} e^{2t} dt.

#include <cmath>
#include <functional>

#include "tmx/radial_profile.hpp"

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps, double whole, int depth) {
  const double c = 0.5 * (a + b);
  const double left = simpson(f, a, c);
  const double right = simpson(f, c, b);
  // floor keeps the refinement demand above floating noise
  const double floor = 1e-16 * (std::fabs(whole) + 1e-300);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * std::max(eps, floor))
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, eps / 2.0, left, depth - 1) +
         adaptive_simpson(f, c, b, eps / 2.0, right, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
  // pre-split to keep the adaptive recursion honest on spiky integrands
  const int pre = 64;
  double total = 0.0;
  for (int i = 0; i < pre; ++i) {
    const double lo = a + (b - a) * i / pre;
    const double hi = a + (b - a) * (i + 1) / pre;
    total += adaptive_simpson(f, lo, hi, eps / pre, simpson(f, lo, hi), 24);
  }
  return total;
}

/// 2 pi int phi(t)^2 e^{2t} dt over the knot hull plus the left plateau,
/// by quadrature only (no closed forms shared with the library).
inline double mass_by_quadrature(const tmx::RadialProfile& p) {
  auto f = [&](double t) {
    const double v = p.value_at_log_r(t);
    return v * v * std::exp(2.0 * t);
  };
  double total = integrate(f, p.knots.front(), p.knots.back());
  if (p.left == tmx::Extension::Constant) {
    const double v = p.values.front();
    // integrate a long but finite stretch of the plateau; e^{2t} makes the
    // remainder negligible at 60 log-units below the first knot
    total += integrate(f, p.knots.front() - 60.0, p.knots.front());
    (void)v;
  }
  return tmx::kTwoPi * total;
}

/// 2 pi int w(phi(t)) e^{2t} dt by plain quadrature for bounded weights.
inline double functional_by_quadrature(const tmx::RadialProfile& p,
                                       const std::function<double(double)>& w) {
  auto f = [&](double t) { return w(p.value_at_log_r(t)) * std::exp(2.0 * t); };
  double total = integrate(f, p.knots.front(), p.knots.back());
  if (p.left == tmx::Extension::Constant)
    total += integrate(f, p.knots.front() - 60.0, p.knots.front());
  return tmx::kTwoPi * total;
}

/// Exact int_0^d (a + b u)^{2n} e^{2u} du via binomial expansion and the
/// t^n e^{2t} recurrence (used to pin quadrature moments).
inline double poly_pow_exp_integral(double a, double b, int two_n, double d) {
  // binomial sum over (a + b u)^{2n}; per power the recurrence
  // I_k = d^k e^{2d}/2 - (k/2) I_{k-1}
  double total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= two_n; ++j) {
    if (j > 0) binom = binom * (two_n - j + 1) / j;
    // coefficient a^{2n-j} b^j binom * int u^j e^{2u}
    double I = 0.5 * std::expm1(2.0 * d);
    for (int k = 1; k <= j; ++k)
      I = 0.5 * std::pow(d, k) * std::exp(2.0 * d) - 0.5 * k * I;
    total += binom * std::pow(a, two_n - j) * std::pow(b, j) * I;
  }
  return total;
}

}  // namespace oracle
