#pragma once

// Best responses against a fixed opponent allocation.
//
// Transmitter: waterfilling on the floors a_J J_k + N_k.
// Jammer: the stationarity condition of its KKT system has the closed-form
// root J_k(u) for each budget multiplier u > 0; sum_k J_k(u) is continuous
// and strictly decreasing wherever positive, so u* is found by bisection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jamgame/game.hpp"
#include "jamgame/waterfill.hpp"

namespace jamgame {

/// Absolute tolerance on jammer KKT residuals.
inline constexpr double kKktTol = 1e-8;
/// Tolerance for optimality comparisons (utilities, allocation distances).
inline constexpr double kOptTol = 1e-6;

struct TxResponse {
  Allocation tx;
  double level = 0.0;  // v
};

inline TxResponse tx_best_response(const GameParams& p, const Allocation& jam) {
  require_jam(p, jam);
  const auto& ch = p.channels();
  std::vector<double> floors(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) floors[k] = ch.alpha_j() * jam[k] + ch.noise(k);
  auto wf = water_fill(floors, ch.alpha_t() * p.t_budget());
  TxResponse r;
  r.level = wf.level;
  r.tx.budget = p.t_budget();
  r.tx.powers.resize(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) r.tx.powers[k] = wf.fills[k] / ch.alpha_t();
  return r;
}

/// Complementary slackness of the transmitter's waterfilling at level v:
/// max over funded channels of |a_T T_k + a_J J_k + N_k - v| and over idle
/// channels of (v - a_J J_k - N_k)^+.
inline double tx_waterfill_residual(const GameParams& p, const Allocation& tx, const Allocation& jam, double v) {
  const auto& ch = p.channels();
  double r = 0.0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const double floor = ch.alpha_j() * jam[k] + ch.noise(k);
    if (tx[k] > 0.0) r = std::max(r, std::abs(ch.alpha_t() * tx[k] + floor - v));
    else r = std::max(r, v - floor);
  }
  return r;
}

/// Multipliers of the jammer's problem plus the residuals of its KKT
/// system at a given point.
struct JammerKktState {
  double u = 0.0;
  std::vector<double> lambdas;
  double stationarity = 0.0;     // max_k |dL/dJ_k| with lambda_k clamped at 0
  double complementarity = 0.0;  // max_k lambda_k * J_k
  double budget = 0.0;           // |sum J_k - J|

  double max_residual() const { return std::max({stationarity, complementarity, budget}); }
};

namespace detail {

/// d/dJ_k of the transmitter rate.
inline double rate_partial_jam(const ChannelSet& ch, std::size_t k, double tx, double jam) {
  const double x = ch.alpha_j() * jam + ch.noise(k);
  const double a = ch.alpha_t() * tx;
  return ch.alpha_j() / (2.0 * (a + x)) - ch.alpha_j() / (2.0 * x);
}

/// Positive root of x^2 + a x - a a_J / (2u) = 0, in the cancellation-free
/// form c / (2 (a + sqrt(a^2 + c))) with c = 2 a_J a / u.
inline double jammer_total_floor(double a, double alpha_j, double u) {
  if (a <= 0.0) return 0.0;
  const double c = 2.0 * alpha_j * a / u;
  return c / (2.0 * (a + std::sqrt(a * a + c)));
}

}  // namespace detail

/// J_k = [ -a_T T_k - 2 N_k + sqrt((a_T T_k)^2 + 2 a_J a_T T_k / u) ]^+ / (2 a_J)
inline std::vector<double> jam_closed_form(const GameParams& p, const Allocation& tx, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("jam_closed_form: u must be positive");
  require_tx(p, tx);
  const auto& ch = p.channels();
  std::vector<double> jam(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const double x = detail::jammer_total_floor(ch.alpha_t() * tx[k], ch.alpha_j(), u);
    jam[k] = std::max(x - ch.noise(k), 0.0) / ch.alpha_j();
  }
  return jam;
}

namespace detail {

inline JammerKktState jammer_kkt_unchecked(const GameParams& p, const Allocation& tx, const Allocation& jam,
                                           double u) {
  const auto& ch = p.channels();
  JammerKktState s;
  s.u = u;
  s.lambdas.resize(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const double raw = rate_partial_jam(ch, k, tx[k], jam[k]) + u;
    s.lambdas[k] = std::max(raw, 0.0);
    s.stationarity = std::max(s.stationarity, s.lambdas[k] - raw);
    s.complementarity = std::max(s.complementarity, s.lambdas[k] * jam[k]);
  }
  s.budget = std::abs(jam.sum() - p.j_budget());
  return s;
}

inline bool all_zero(const Allocation& a) {
  return std::all_of(a.powers.begin(), a.powers.end(), [](double t) { return t == 0.0; });
}

}  // namespace detail

/// Evaluates the jammer's KKT system at (jam, u). lambda_k is read off the
/// stationarity equation and clamped at zero; whatever clamping removes
/// shows up as stationarity residual.
inline JammerKktState jammer_kkt(const GameParams& p, const Allocation& tx, const Allocation& jam, double u) {
  require_tx(p, tx);
  require_jam(p, jam);
  return detail::jammer_kkt_unchecked(p, tx, jam, u);
}

/// Gradient of the jammer's Lagrangian
///   L(J) = rate(T, J) + u (sum J_k - J) - sum lambda_k J_k
/// at the given point.
inline std::vector<double> jammer_lagrangian_gradient(const GameParams& p, const Allocation& tx,
                                                      const Allocation& jam, const JammerKktState& kkt) {
  const auto& ch = p.channels();
  std::vector<double> g(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) {
    g[k] = detail::rate_partial_jam(ch, k, tx[k], jam[k]) + kkt.u - kkt.lambdas[k];
  }
  return g;
}

struct JamResponse {
  Allocation jam;
  JammerKktState kkt;
  // All-zero transmit power: every allocation is optimal and the
  // noise-waterfilled one is returned with u = 0.
  bool degenerate = false;
};

/// An all-zero `tx` of the right length is accepted even though it cannot
/// meet a positive budget; it yields the degenerate response.
inline JamResponse jam_best_response(const GameParams& p, const Allocation& tx) {
  const auto& ch = p.channels();
  const double budget = p.j_budget();
  JamResponse r;
  r.jam.budget = budget;

  if (tx.size() == ch.size() && detail::all_zero(tx)) {
    auto wf = water_fill(ch.noise(), ch.alpha_j() * budget);
    r.jam.powers.resize(ch.size());
    for (std::size_t k = 0; k < ch.size(); ++k) r.jam.powers[k] = wf.fills[k] / ch.alpha_j();
    r.degenerate = true;
    r.kkt = detail::jammer_kkt_unchecked(p, tx, r.jam, 0.0);
    return r;
  }
  require_tx(p, tx);

  auto total = [&](double u) {
    double s = 0.0;
    for (std::size_t k = 0; k < ch.size(); ++k) {
      const double x = detail::jammer_total_floor(ch.alpha_t() * tx[k], ch.alpha_j(), u);
      s += std::max(x - ch.noise(k), 0.0) / ch.alpha_j();
    }
    return s;
  };

  // total(u) -> inf as u -> 0+ and -> 0 as u -> inf.
  double u_lo = 1.0;
  double u_hi = 1.0;
  int guard = 0;
  while (total(u_lo) <= budget) {
    u_lo *= 0.5;
    if (++guard > 4000 || u_lo == 0.0) throw std::logic_error("jam_best_response: lower bracket failed");
  }
  guard = 0;
  while (total(u_hi) >= budget) {
    u_hi *= 2.0;
    if (++guard > 4000 || !std::isfinite(u_hi)) throw std::logic_error("jam_best_response: upper bracket failed");
  }

  const double tol = kSolveTol * std::max(1.0, budget);
  double u = 0.5 * (u_lo + u_hi);
  for (int it = 0; it < 200; ++it) {
    u = 0.5 * (u_lo + u_hi);
    const double s = total(u);
    if (std::abs(s - budget) < tol) break;
    (s > budget ? u_lo : u_hi) = u;
    if (u_hi - u_lo <= 0.0) break;
  }

  r.jam.powers = jam_closed_form(p, tx, u);
  r.kkt = jammer_kkt(p, tx, r.jam, u);
  return r;
}

}  // namespace jamgame
