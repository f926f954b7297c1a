#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tmx/growth.hpp"
#include "tmx/quadrature.hpp"
#include "tmx/radial_profile.hpp"

namespace tmx {
namespace witness {

/// Plateau profile: value a inside r < R, log-linear ramp down to 0 at
/// R + 1, zero outside. The ramp is the energy-optimal connection, with
/// energy 2 pi a^2 / log(1 + 1/R) = 2 pi a^2 (R + 1/2 + O(1/R)).
inline RadialProfile make_plateau(double a, double R) {
  if (!(a > 0.0) || !(R > 1.0))
    throw Error(ErrorCode::InvalidArgument, "plateau needs a > 0, R > 1");
  return RadialProfile::create({std::log(R), std::log(R + 1.0)}, {a, 0.0},
                               Extension::Constant, Extension::Zero);
}

/// The canonical concentration profile: sqrt(alpha/(2 pi)) inside
/// r < e^{-alpha}, log-linear down to 0 at r = 1. Unit Dirichlet energy.
inline RadialProfile make_moser(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const double top = std::sqrt(alpha / kTwoPi);
  return RadialProfile::create({-alpha, 0.0}, {top, 0.0}, Extension::Constant,
                               Extension::Zero);
}

/// Closed form of the Moser-profile mass: (1/(4a))(1-e^{-2a}) - e^{-2a}/2.
inline double moser_mass_closed_form(double alpha) {
  return (1.0 - std::exp(-2.0 * alpha)) / (4.0 * alpha) - 0.5 * std::exp(-2.0 * alpha);
}

/// Log-capped profile: value b inside r < R_cap = e^{-b^2/Kk}, log-linear
/// down to 0 at r = 1. Dirichlet energy exactly 2 pi Kk.
inline RadialProfile make_log_cap(double b, double Kk) {
  if (!(b > 1.0) || !(Kk > 0.0))
    throw Error(ErrorCode::InvalidArgument, "log_cap needs b > 1, Kk > 0");
  return RadialProfile::create({-b * b / Kk, 0.0}, {b, 0.0}, Extension::Constant,
                               Extension::Zero);
}

/// log of the cap radius of make_log_cap.
inline double log_cap_radius(double b, double Kk) { return -b * b / Kk; }

/// Log-capped profile dilated by S: phi(x) = psi(x / S). Energy unchanged,
/// mass multiplied by S^2.
inline RadialProfile make_rescaled(double b, double Kk, double S) {
  if (!(S > 0.0)) throw Error(ErrorCode::InvalidArgument, "S must be positive");
  return with_log_shift(make_log_cap(b, Kk), std::log(S));
}

enum class Family { Plateau, Moser, LogCap, Rescaled };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Plateau: return "plateau";
    case Family::Moser: return "moser";
    case Family::LogCap: return "log_cap";
    case Family::Rescaled: return "rescaled";
  }
  return "?";
}

struct WitnessParams {
  Family family = Family::Rescaled;
  double a = 0.0, R = 0.0;        // plateau
  double alpha = 0.0;             // moser
  double b = 0.0, Kk = 0.0, S = 1.0;  // log_cap / rescaled
};

struct WitnessReport {
  WitnessParams params;
  int k = 0;
  double energy = 0.0;
  double mass = 0.0;
  double g_lower_bound = 0.0;  // guaranteed cap contribution pi R_cap^2 g(b) S^2
  double g_value = 0.0;
  double ratio = 0.0;          // G / mass
  double log_ck = kNegInf;     // log of c_k = e^{-2 b^2/Kk} b^2 g(b)
  double mismatch = 0.0;       // c_k / K^2 vs the reported ratio, for reference
};

enum class Regime { CompactnessFail, BoundednessFail };

/// Default parameter schedule. b_k grows geometrically and Kk approaches
/// the budget K at rate 1/b_k^2, which pins the concentration level
/// c_k = e^{-2 b_k^2/Kk} b_k^2 g(b_k) to e^{-2/K} times the probed tail
/// quantity at u = b_k, so c_k tracks its limsup.
struct ConcentrationSchedule {
  double b0 = 1.2;
  double growth = 3.0;

  double b(int k) const { return b0 * std::pow(growth, k - 1); }
  double Kk(int k, double K) const {
    const double bb = b(k) * b(k);
    return K * bb / (bb + 1.0);
  }
};

inline double log_ck(const Growth& g, double b, double Kk) {
  return g.log_value(b) - 2.0 * b * b / Kk + 2.0 * std::log(b);
}

/// Witness sequence for the failure regimes of the critical tail
/// condition. CompactnessFail keeps the mass bounded below (dilation
/// S_k = b_k); BoundednessFail sends the mass to 0 while G diverges.
inline std::vector<WitnessReport> make_concentration_sequence(
    double K, const Growth& g, int n_terms, Regime regime,
    const ConcentrationSchedule& sched = {}) {
  if (n_terms < 1) throw Error(ErrorCode::InvalidArgument, "n_terms must be >= 1");
  const TailEstimate tail = classify_critical_tail(g, K);
  if (regime == Regime::CompactnessFail && tail.cls == TailClass::Zero)
    throw Error(ErrorCode::RegimeMismatch,
                "critical tail limit is 0: no concentration witness exists");
  if (regime == Regime::BoundednessFail && tail.cls != TailClass::Diverging)
    throw Error(ErrorCode::RegimeMismatch,
                "critical tail limsup is finite: blow-up witness requires divergence");

  std::vector<WitnessReport> out;
  out.reserve(static_cast<std::size_t>(n_terms));
  for (int k = 1; k <= n_terms; ++k) {
    WitnessReport rep;
    rep.k = k;
    const double b = sched.b(k);
    const double Kk = sched.Kk(k, K);
    rep.log_ck = log_ck(g, b, Kk);
    const double ck = std::exp(std::min(rep.log_ck, 700.0));
    double S = b;
    if (regime == Regime::BoundednessFail)
      S = b / std::sqrt(std::min(ck, static_cast<double>(k)));
    rep.params = WitnessParams{Family::Rescaled, 0.0, 0.0, 0.0, b, Kk, S};
    const RadialProfile phi = make_rescaled(b, Kk, S);
    rep.energy = dirichlet_energy(phi);
    rep.mass = mass(phi);
    // cap contribution: pi (S R_cap)^2 g(b), assembled in logs
    rep.g_lower_bound = std::exp(std::log(kPi) + 2.0 * std::log(S) +
                                 2.0 * log_cap_radius(b, Kk) + g.log_value(b));
    rep.g_value = g_functional(phi, g);
    rep.ratio = rep.g_value / rep.mass;
    rep.mismatch = rep.ratio / (std::exp(rep.log_ck) / (K * K));
    out.push_back(rep);
  }
  return out;
}

/// Report for a single standalone witness profile.
inline WitnessReport report_for(const RadialProfile& phi, const Growth& g,
                                WitnessParams params, int k = 0) {
  WitnessReport rep;
  rep.params = params;
  rep.k = k;
  rep.energy = dirichlet_energy(phi);
  rep.mass = mass(phi);
  rep.g_value = g_functional(phi, g);
  if (params.family == Family::Plateau)
    rep.g_lower_bound = kPi * params.R * params.R * g.value(params.a);
  rep.ratio = rep.mass > 0.0 ? rep.g_value / rep.mass : 0.0;
  return rep;
}

}  // namespace witness
}  // namespace tmx
