#pragma once

// Data model of the transmitter-vs-jammer power allocation game over M
// independent Gaussian channels, and the transmitter's rate (the zero-sum
// payoff).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jamgame {

/// Relative tolerance on allocation sums.
inline constexpr double kBudgetTol = 1e-9;

/// Per-channel noise powers plus the two (channel-independent) attenuations.
class ChannelSet {
 public:
  ChannelSet(std::vector<double> noise, double alpha_t, double alpha_j)
      : noise_(std::move(noise)), alpha_t_(alpha_t), alpha_j_(alpha_j) {
    if (noise_.empty()) throw std::invalid_argument("channels must be non-empty");
    for (std::size_t k = 0; k < noise_.size(); ++k) {
      if (!std::isfinite(noise_[k]) || noise_[k] <= 0.0) {
        throw std::invalid_argument("noise[" + std::to_string(k) + "] must be positive and finite");
      }
    }
    if (!std::isfinite(alpha_t_) || alpha_t_ <= 0.0) throw std::invalid_argument("alpha_t must be positive");
    if (!std::isfinite(alpha_j_) || alpha_j_ <= 0.0) throw std::invalid_argument("alpha_j must be positive");
  }

  std::span<const double> noise() const { return noise_; }
  double noise(std::size_t k) const { return noise_[k]; }
  double alpha_t() const { return alpha_t_; }
  double alpha_j() const { return alpha_j_; }
  std::size_t size() const { return noise_.size(); }

 private:
  std::vector<double> noise_;
  double alpha_t_;
  double alpha_j_;
};

/// Channels plus the two total power budgets.
class GameParams {
 public:
  GameParams(ChannelSet channels, double t_budget, double j_budget)
      : channels_(std::move(channels)), t_budget_(t_budget), j_budget_(j_budget) {
    if (!std::isfinite(t_budget_) || t_budget_ <= 0.0) throw std::invalid_argument("t_budget must be positive");
    if (!std::isfinite(j_budget_) || j_budget_ <= 0.0) throw std::invalid_argument("j_budget must be positive");
  }

  const ChannelSet& channels() const { return channels_; }
  double t_budget() const { return t_budget_; }
  double j_budget() const { return j_budget_; }
  std::size_t size() const { return channels_.size(); }

 private:
  ChannelSet channels_;
  double t_budget_;
  double j_budget_;
};

/// One player's per-channel power split. Not self-validating: the
/// invariants are checked by validate_allocation() at every consumer.
struct Allocation {
  std::vector<double> powers;
  double budget = 0.0;

  double sum() const {
    double s = 0.0;
    for (double p : powers) s += p;
    return s;
  }
  std::size_t size() const { return powers.size(); }
  double operator[](std::size_t k) const { return powers[k]; }
};

struct AllocationReport {
  bool length_ok = true;
  std::vector<std::size_t> negative;   // offending indices
  std::vector<std::size_t> nonfinite;  // offending indices
  bool sum_ok = true;
  double sum = 0.0;

  bool ok() const { return length_ok && negative.empty() && nonfinite.empty() && sum_ok; }

  std::string describe() const {
    if (ok()) return "ok";
    std::ostringstream os;
    const char* sep = "";
    if (!length_ok) {
      os << "length mismatch";
      sep = "; ";
    }
    for (auto k : nonfinite) {
      os << sep << "non-finite power at index " << k;
      sep = "; ";
    }
    for (auto k : negative) {
      os << sep << "negative power at index " << k;
      sep = "; ";
    }
    if (!sum_ok) os << sep << "budget-sum violation (" << sum << " vs budget)";
    return os.str();
  }
};

/// Reports negativity, length mismatch and budget-sum violations beyond
/// kBudgetTol (relative to the budget).
inline AllocationReport validate_allocation(const Allocation& alloc, std::size_t expected_len) {
  AllocationReport r;
  r.length_ok = alloc.powers.size() == expected_len;
  for (std::size_t k = 0; k < alloc.powers.size(); ++k) {
    if (!std::isfinite(alloc.powers[k])) r.nonfinite.push_back(k);
    else if (alloc.powers[k] < 0.0) r.negative.push_back(k);
  }
  r.sum = alloc.sum();
  double scale = std::max(std::abs(alloc.budget), 1e-300);
  r.sum_ok = std::abs(r.sum - alloc.budget) <= kBudgetTol * scale;
  return r;
}

namespace detail {

inline void require_feasible(const Allocation& a, std::size_t m, double budget, const char* who) {
  auto rep = validate_allocation(a, m);
  if (!rep.ok()) throw std::invalid_argument(std::string(who) + " allocation: " + rep.describe());
  if (std::abs(a.budget - budget) > kBudgetTol * budget) {
    throw std::invalid_argument(std::string(who) + " allocation budget does not match the game");
  }
}

}  // namespace detail

inline void require_tx(const GameParams& p, const Allocation& tx) {
  detail::require_feasible(tx, p.size(), p.t_budget(), "transmitter");
}

inline void require_jam(const GameParams& p, const Allocation& jam) {
  detail::require_feasible(jam, p.size(), p.j_budget(), "jammer");
}

/// Rate of one channel in nats per channel use.
inline double channel_rate(double alpha_t, double alpha_j, double noise, double tx, double jam) {
  return 0.5 * std::log1p(alpha_t * tx / (alpha_j * jam + noise));
}

/// Transmitter rate 1/2 sum_k ln(1 + a_T T_k / (a_J J_k + N_k)), nats per
/// channel use. Throws on dimension mismatch or infeasible allocations.
inline double utility(const GameParams& p, const Allocation& tx, const Allocation& jam) {
  require_tx(p, tx);
  require_jam(p, jam);
  const auto& ch = p.channels();
  double rate = 0.0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    rate += channel_rate(ch.alpha_t(), ch.alpha_j(), ch.noise(k), tx[k], jam[k]);
  }
  return rate;
}

/// Same formula without feasibility checks; used by inner loops that only
/// ever see convex combinations of feasible points.
inline double utility_unchecked(const ChannelSet& ch, std::span<const double> tx, std::span<const double> jam) {
  double rate = 0.0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    rate += channel_rate(ch.alpha_t(), ch.alpha_j(), ch.noise(k), tx[k], jam[k]);
  }
  return rate;
}

}  // namespace jamgame
