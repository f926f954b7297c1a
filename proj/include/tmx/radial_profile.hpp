#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "tmx/errors.hpp"

namespace tmx {

inline constexpr double kTwoPi = 6.283185307179586476925287;
inline constexpr double kPi = 3.1415926535897932384626434;

enum class Extension {
  Constant,  ///< continue with the boundary knot value
  Zero,      ///< identically zero beyond the boundary knot
};

/// Radial function on the plane, piecewise linear in t = log r between the
/// knots, extended by a constant plateau or by zero on either side. This
/// class of profiles is closed under log-linear replacement and contains
/// every extremizer the toolkit manipulates, so Dirichlet energy and mass
/// have exact closed forms.
struct RadialProfile {
  std::vector<double> knots;   // t_i = log r_i, strictly increasing
  std::vector<double> values;  // amplitudes at the knots
  Extension left = Extension::Constant;
  Extension right = Extension::Zero;

  static RadialProfile create(std::vector<double> knots, std::vector<double> values,
                              Extension left = Extension::Constant,
                              Extension right = Extension::Zero) {
    RadialProfile p;
    p.knots = std::move(knots);
    p.values = std::move(values);
    p.left = left;
    p.right = right;
    p.validate();
    return p;
  }

  void validate() const {
    if (knots.size() < 2 || knots.size() != values.size())
      throw Error(ErrorCode::InvalidProfile, "need >= 2 knots and matching values");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
        throw Error(ErrorCode::InvalidProfile, "non-finite knot or value");
      if (i > 0 && !(knots[i] > knots[i - 1]))
        throw Error(ErrorCode::InvalidProfile, "knots must be strictly increasing");
    }
    if (right == Extension::Zero && values.back() != 0.0)
      throw Error(ErrorCode::InvalidProfile, "zero right extension requires final value 0");
    // A jump at a positive inner radius is not H^1; zero left extension is
    // only admissible if the profile already vanishes there.
    if (left == Extension::Zero && values.front() != 0.0)
      throw Error(ErrorCode::InvalidProfile, "zero left extension requires first value 0");
  }

  std::size_t segment_count() const { return knots.size() - 1; }

  double slope(std::size_t i) const {
    return (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  }

  /// Value at t = log r, extensions included.
  double value_at_log_r(double t) const {
    if (t <= knots.front())
      return left == Extension::Constant ? values.front() : 0.0;
    if (t >= knots.back())
      return right == Extension::Constant ? values.back() : 0.0;
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    const double w = (t - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + w * (values[i + 1] - values[i]);
  }

  double value_at_radius(double r) const {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    return value_at_log_r(std::log(r));
  }

  bool is_nonincreasing() const {
    if (left == Extension::Zero && values.front() > 0.0) return false;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      if (values[i + 1] > values[i]) return false;
    if (right == Extension::Constant && values.back() > 0.0) return true;  // stays constant
    return true;
  }

  double max_abs_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
};

namespace detail {

// Exact integral of (a + b u)^2 e^{2u} over [0, d], times e^{2 t0}:
// the closed form behind every mass computation. The antiderivative is
// e^{2u} (phi^2 - b phi + b^2/2)/2 with phi = a + b u; evaluating the
// bracket through the endpoint value keeps long segments cancellation-free,
// while short segments take the expm1 route.
inline double poly2_exp_integral(double t0, double d, double a, double b) {
  if (d <= 1.0) {
    const double A = 0.5 * b * b;
    const double B = a * b - 0.5 * b * b;
    const double C = 0.5 * (a * a - a * b + 0.5 * b * b);
    const double e0 = std::exp(2.0 * t0);
    return e0 * (C * std::expm1(2.0 * d) + std::exp(2.0 * d) * (A * d * d + B * d));
  }
  auto bracket = [b](double phi) { return 0.5 * (phi * (phi - b) + 0.5 * b * b); };
  const double phi1 = a + b * d;
  return std::exp(2.0 * (t0 + d)) * bracket(phi1) - std::exp(2.0 * t0) * bracket(a);
}

}  // namespace detail

/// Dirichlet energy \|grad phi\|^2_{L^2(R^2)} = 2 pi sum (dphi_i)^2 / dt_i.
/// Exact for the piecewise log-linear class; extensions carry no gradient
/// (constant) or no support (zero beyond a vanishing knot).
inline double dirichlet_energy(const RadialProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double dv = p.values[i + 1] - p.values[i];
    s += dv * dv / (p.knots[i + 1] - p.knots[i]);
  }
  return kTwoPi * s;
}

/// Energy restricted to log-radii in [ta, tb] (intersected with the knot
/// hull; the extensions are flat). Exact.
inline double energy_between_log(const RadialProfile& p, double ta, double tb) {
  if (!(ta < tb)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double lo = std::max(ta, p.knots[i]);
    const double hi = std::min(tb, p.knots[i + 1]);
    if (hi <= lo) continue;
    const double sl = p.slope(i);
    s += sl * sl * (hi - lo);
  }
  return kTwoPi * s;
}

inline double tail_energy_log(const RadialProfile& p, double t) {
  return energy_between_log(p, t, p.knots.back());
}

/// Mass \|phi\|^2_{L^2(R^2)} = 2 pi int phi(t)^2 e^{2t} dt, exact.
/// Requires the profile to vanish at infinity.
inline double mass(const RadialProfile& p) {
  if (p.right == Extension::Constant && p.values.back() != 0.0)
    throw Error(ErrorCode::InfiniteMass, "profile does not vanish at infinity");
  double s = 0.0;
  if (p.left == Extension::Constant && p.values.front() != 0.0) {
    const double v = p.values.front();
    s += 0.5 * v * v * std::exp(2.0 * p.knots.front());  // pi r0^2 v^2 / (2 pi)
  }
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    s += detail::poly2_exp_integral(p.knots[i], p.knots[i + 1] - p.knots[i], p.values[i],
                                    p.slope(i));
  }
  return kTwoPi * s;
}

/// Mass restricted to log-radii in [ta, tb] (tb may exceed the hull only if
/// the profile vanishes there). Exact.
inline double mass_between_log(const RadialProfile& p, double ta, double tb) {
  if (!(ta < tb)) return 0.0;
  if (tb > p.knots.back() && p.right == Extension::Constant && p.values.back() != 0.0)
    throw Error(ErrorCode::InfiniteMass, "profile does not vanish at infinity");
  double s = 0.0;
  // left plateau part
  if (p.left == Extension::Constant && p.values.front() != 0.0 && ta < p.knots.front()) {
    const double v = p.values.front();
    const double hi = std::min(tb, p.knots.front());
    const double upper = std::exp(2.0 * hi);
    const double lower = std::isinf(ta) ? 0.0 : std::exp(2.0 * ta);
    s += 0.5 * v * v * (upper - lower);
  }
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double lo = std::max(ta, p.knots[i]);
    const double hi = std::min(tb, p.knots[i + 1]);
    if (hi <= lo) continue;
    const double a = p.values[i] + p.slope(i) * (lo - p.knots[i]);
    s += detail::poly2_exp_integral(lo, hi - lo, a, p.slope(i));
  }
  return kTwoPi * s;
}

inline double tail_mass_log(const RadialProfile& p, double t) {
  return mass_between_log(p, t, std::numeric_limits<double>::infinity());
}

/// Ratio |phi(r)|^2 r / (\|phi\| \|phi_r\|): the scale-invariant quantity of
/// the radial Sobolev bound. For nonincreasing profiles it never exceeds
/// 1/pi.
inline double pointwise_radial_bound(const RadialProfile& p, double r) {
  const double m = mass(p);
  const double e = dirichlet_energy(p);
  if (m == 0.0 || e == 0.0)
    throw Error(ErrorCode::DivisionByZero, "radial bound undefined for trivial profile");
  const double v = p.value_at_radius(r);
  return v * v * r / std::sqrt(m * e);
}

/// Spatial rescaling phi(x / s): every knot shifts by log s. Energy is
/// invariant, mass picks up s^2.
inline RadialProfile with_log_shift(const RadialProfile& p, double log_s) {
  RadialProfile q = p;
  for (double& t : q.knots) t += log_s;
  q.validate();
  return q;
}

/// Amplitude scaling lambda * phi.
inline RadialProfile with_value_scale(const RadialProfile& p, double lambda) {
  RadialProfile q = p;
  for (double& v : q.values) v *= lambda;
  q.validate();
  return q;
}

/// Inserts a knot at t (no-op outside the hull or on an existing knot).
/// The function is unchanged; energy and mass are exactly preserved.
inline RadialProfile refined_with_knot(const RadialProfile& p, double t) {
  if (t <= p.knots.front() || t >= p.knots.back()) return p;
  RadialProfile q = p;
  const auto it = std::lower_bound(q.knots.begin(), q.knots.end(), t);
  if (it != q.knots.end() && *it == t) return q;
  const std::size_t idx = static_cast<std::size_t>(it - q.knots.begin());
  q.knots.insert(q.knots.begin() + static_cast<std::ptrdiff_t>(idx), t);
  q.values.insert(q.values.begin() + static_cast<std::ptrdiff_t>(idx),
                  p.value_at_log_r(t));
  q.validate();
  return q;
}

/// Replaces the profile on [ta, tb] by the straight line in t through its
/// endpoint values: the energy-optimal connection (Schwarz). Endpoint
/// values are unchanged and the energy never increases.
inline RadialProfile replace_log_linear(const RadialProfile& p, double ta, double tb) {
  ta = std::max(ta, p.knots.front());
  tb = std::min(tb, p.knots.back());
  if (!(ta < tb)) return p;
  const double va = p.value_at_log_r(ta);
  const double vb = p.value_at_log_r(tb);
  std::vector<double> knots, values;
  for (std::size_t i = 0; i < p.knots.size() && p.knots[i] < ta; ++i) {
    knots.push_back(p.knots[i]);
    values.push_back(p.values[i]);
  }
  knots.push_back(ta);
  values.push_back(va);
  knots.push_back(tb);
  values.push_back(vb);
  for (std::size_t i = 0; i < p.knots.size(); ++i) {
    if (p.knots[i] > tb) {
      knots.push_back(p.knots[i]);
      values.push_back(p.values[i]);
    }
  }
  return RadialProfile::create(std::move(knots), std::move(values), p.left, p.right);
}

/// Super-level set {t : phi(t) >= level} for level > 0, as finite
/// t-intervals within the knot hull plus a flag for the left plateau.
struct LevelSet {
  bool left_plateau = false;  // phi >= level on all of r < r_0
  std::vector<std::pair<double, double>> intervals;
};

inline LevelSet level_intervals(const RadialProfile& p, double level) {
  if (!(level > 0.0))
    throw Error(ErrorCode::InvalidArgument, "level must be positive");
  LevelSet out;
  out.left_plateau =
      (p.left == Extension::Constant && p.values.front() >= level);
  double open_start = std::numeric_limits<double>::quiet_NaN();
  bool open = false;
  auto begin_at = [&](double t) {
    if (!open) { open = true; open_start = t; }
  };
  auto end_at = [&](double t) {
    if (open) { open = false; if (t > open_start) out.intervals.emplace_back(open_start, t); }
  };
  if (p.values.front() >= level) begin_at(p.knots.front());
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const double v0 = p.values[i], v1 = p.values[i + 1];
    const double t0 = p.knots[i], t1 = p.knots[i + 1];
    if (v0 >= level && v1 >= level) continue;           // stays inside
    if (v0 < level && v1 < level) continue;             // stays outside
    const double tc = t0 + (level - v0) / (v1 - v0) * (t1 - t0);
    if (v0 >= level) end_at(tc);
    else begin_at(tc);
  }
  end_at(p.knots.back());
  return out;
}

}  // namespace tmx
