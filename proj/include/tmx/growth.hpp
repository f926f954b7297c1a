#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tmx/errors.hpp"

namespace tmx {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

namespace detail {
// log(e^x - 1) without overflow or cancellation.
inline double log_expm1(double x) {
  if (x <= 0.0) return kNegInf;
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}
}  // namespace detail

enum class GrowthKind { ExactGrowth, ExpMinusOne, TheoremForm, Custom };

/// Nonnegative Borel growth function g(u), evaluated through its logarithm
/// so that amplitudes far beyond the double-precision exp range stay
/// usable. Direct evaluation is guarded by `overflow_cap` on log g.
class Growth {
 public:
  GrowthKind kind = GrowthKind::Custom;
  double overflow_cap = 650.0;  // max log g for direct (non-log) evaluation

  /// g(u) = (e^{2u^2/K} - 1) / (1 + |u|)^p. With 2 pi K = 1 the exponent is
  /// the sharp 4 pi u^2.
  static Growth exact_growth(double K, double p) {
    if (!(K > 0.0) || !(p >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "exact_growth needs K > 0, p >= 0");
    Growth g;
    g.kind = GrowthKind::ExactGrowth;
    g.K_ = K;
    g.p_ = p;
    g.rate_ = 2.0 / K;
    g.log_g_ = [K, p](double u) {
      u = std::fabs(u);
      return detail::log_expm1(2.0 * u * u / K) - p * std::log1p(u);
    };
    g.name_ = "exact_growth(K=" + std::to_string(K) + ",p=" + std::to_string(p) + ")";
    return g;
  }

  /// g(u) = e^{alpha u^2} - 1.
  static Growth exp_minus_one(double alpha) {
    if (!(alpha > 0.0))
      throw Error(ErrorCode::InvalidArgument, "exp_minus_one needs alpha > 0");
    Growth g;
    g.kind = GrowthKind::ExpMinusOne;
    g.alpha_ = alpha;
    g.rate_ = alpha;
    g.log_g_ = [alpha](double u) { return detail::log_expm1(alpha * u * u); };
    g.name_ = "exp_minus_one(alpha=" + std::to_string(alpha) + ")";
    return g;
  }

  /// g(u) = min(u^2, u^{-2}) e^{2u^2/K}: the threshold functional whose
  /// boundedness characterizes the gradient budget 2 pi K.
  static Growth theorem_form(double K) {
    if (!(K > 0.0)) throw Error(ErrorCode::InvalidArgument, "theorem_form needs K > 0");
    Growth g;
    g.kind = GrowthKind::TheoremForm;
    g.K_ = K;
    g.rate_ = 2.0 / K;
    g.log_g_ = [K](double u) {
      u = std::fabs(u);
      if (u == 0.0) return kNegInf;
      const double lu = std::log(u);
      return 2.0 * u * u / K + (u <= 1.0 ? 2.0 * lu : -2.0 * lu);
    };
    g.name_ = "theorem_form(K=" + std::to_string(K) + ")";
    return g;
  }

  /// g(u) = u^2, so that G(phi) equals the mass. Used for cross-checks.
  static Growth square() {
    Growth g;
    g.kind = GrowthKind::Custom;
    g.rate_ = 0.0;
    g.log_g_ = [](double u) {
      u = std::fabs(u);
      return u == 0.0 ? kNegInf : 2.0 * std::log(u);
    };
    g.name_ = "square";
    return g;
  }

  /// Arbitrary growth from a log-scale callable. `exponent_rate` is the
  /// asymptotic d(log g)/d(u^2), used to pace quadrature subdivision.
  static Growth from_log_function(std::string name, std::function<double(double)> log_g,
                                  double exponent_rate) {
    Growth g;
    g.kind = GrowthKind::Custom;
    g.rate_ = exponent_rate;
    g.log_g_ = std::move(log_g);
    g.name_ = std::move(name);
    return g;
  }

  /// Piecewise-linear interpolation of log g over sorted (u, log g)
  /// samples, clamped to the edge values outside the table.
  static Growth from_table(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "growth table needs >= 2 samples");
    for (std::size_t i = 1; i < table.size(); ++i)
      if (!(table[i].first > table[i - 1].first))
        throw Error(ErrorCode::InvalidArgument, "growth table must be sorted in u");
    Growth g;
    g.kind = GrowthKind::Custom;
    g.rate_ = 0.0;
    g.log_g_ = [tab = std::move(table)](double u) {
      u = std::fabs(u);
      if (u <= tab.front().first) return tab.front().second;
      if (u >= tab.back().first) return tab.back().second;
      std::size_t lo = 0, hi = tab.size() - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (tab[mid].first <= u ? lo : hi) = mid;
      }
      const double w = (u - tab[lo].first) / (tab[hi].first - tab[lo].first);
      return tab[lo].second + w * (tab[hi].second - tab[lo].second);
    };
    g.name_ = "table";
    return g;
  }

  double log_value(double u) const { return log_g_(u); }

  /// Direct value; refuses to materialize numbers the double range cannot
  /// hold (callers needing those work with log_value).
  double value(double u) const {
    const double l = log_g_(u);
    if (l > overflow_cap)
      throw Error(ErrorCode::Overflow, "g(u) exceeds direct-evaluation cap; use log_value");
    return l == kNegInf ? 0.0 : std::exp(l);
  }

  double exponent_rate() const { return rate_; }
  const std::string& name() const { return name_; }
  double K() const { return K_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }

 private:
  double K_ = 0.0, p_ = 0.0, alpha_ = 0.0, rate_ = 0.0;
  std::function<double(double)> log_g_;
  std::string name_;
};

enum class TailClass { Zero, Finite, Diverging };

struct TailEstimate {
  TailClass cls = TailClass::Finite;
  double log_sup = kNegInf;  // sup of the probed quantity, log scale
  double u_at_sup = 0.0;
};

namespace detail {
inline TailEstimate classify_band(const std::function<double(double)>& w, double u_lo,
                                  double u_hi, bool toward_zero) {
  // geometric grid, 64 points per decade
  const double decades = std::log10(u_hi / u_lo);
  const int n = std::max(32, static_cast<int>(std::ceil(decades * 64.0)));
  TailEstimate est;
  std::vector<std::pair<double, double>> pts;  // (x, w) with x increasing toward the limit
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = u_lo * std::pow(u_hi / u_lo, static_cast<double>(i) / n);
    const double v = w(u);
    if (v > est.log_sup) { est.log_sup = v; est.u_at_sup = u; }
    const double x = toward_zero ? -std::log(u) : std::log(u);
    pts.emplace_back(x, v);
  }
  if (toward_zero) std::reverse(pts.begin(), pts.end());
  // least-squares slope of w against log-distance on the half of the grid
  // nearest the probed limit; the sign of the trend is the classification
  const std::size_t half = pts.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0, dead = 0;
  for (std::size_t i = half; i < pts.size(); ++i) {
    if (pts[i].second == kNegInf) { ++dead; continue; }
    sx += pts[i].first;
    sy += pts[i].second;
    sxx += pts[i].first * pts[i].first;
    sxy += pts[i].first * pts[i].second;
    ++cnt;
  }
  if (cnt < 4 || dead > cnt) {
    est.cls = TailClass::Zero;  // the probed quantity vanishes on most of the band
    return est;
  }
  const double denom = static_cast<double>(cnt) * sxx - sx * sx;
  const double slope = denom != 0.0 ? (static_cast<double>(cnt) * sxy - sx * sy) / denom : 0.0;
  const double thresh = 0.35;
  if (slope > thresh)
    est.cls = TailClass::Diverging;
  else if (slope < -thresh)
    est.cls = TailClass::Zero;
  else
    est.cls = TailClass::Finite;
  return est;
}
}  // namespace detail

/// Numerical estimate of limsup_{u->inf} e^{-2u^2/K} u^2 g(u), probed on a
/// geometric grid up to the amplitude where 2u^2/K hits the overflow cap.
/// An estimate, not a proof: slowly varying tails may be misclassified.
inline TailEstimate classify_critical_tail(const Growth& g, double K) {
  const double u_max = std::sqrt(0.5 * g.overflow_cap * K);
  auto w = [&](double u) { return g.log_value(u) - 2.0 * u * u / K + 2.0 * std::log(u); };
  return detail::classify_band(w, 1.0, u_max, /*toward_zero=*/false);
}

/// Numerical estimate of limsup_{u->0} g(u)/u^2.
inline TailEstimate classify_origin(const Growth& g) {
  auto w = [&](double u) { return g.log_value(u) - 2.0 * std::log(u); };
  return detail::classify_band(w, 1e-6, 1.0, /*toward_zero=*/true);
}

/// True when both tail conditions for G(phi) <= C ||phi||^2 under the
/// gradient budget 2 pi K hold (finite limsup at infinity and at zero).
inline bool boundedness_condition_holds(const Growth& g, double K) {
  return classify_critical_tail(g, K).cls != TailClass::Diverging &&
         classify_origin(g).cls != TailClass::Diverging;
}

}  // namespace tmx
