#pragma once

// Independent checks on the closed-form equilibrium: brute-force minimax on
// a discretized jammer simplex, and damped best-response dynamics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamgame/best_response.hpp"
#include "jamgame/equilibrium.hpp"
#include "jamgame/game.hpp"
#include "jamgame/saddle.hpp"

namespace jamgame {

/// Target sup-norm distance to the equilibrium for converged dynamics.
inline constexpr double kDynTol = 1e-6;
/// Step size below which dynamics stop. The iteration contracts roughly
/// linearly, so stopping on a step of kDynTol leaves the iterate about
/// kDynTol away; three more digits keep the final distance well inside it.
inline constexpr double kDynStepTol = 1e-9;
inline constexpr std::size_t kMaxGridChannels = 4;

struct GridSpec {
  std::size_t resolution = 101;  // points per simplex edge
  std::size_t m = 0;
  std::size_t cap = 10'000'000;  // maximum number of evaluations
};

/// Number of points on the simplex grid, C(R - 1 + m - 1, m - 1). Saturates
/// at SIZE_MAX.
inline std::size_t grid_size(std::size_t resolution, std::size_t m) {
  const std::size_t n = resolution - 1;
  // C(n + m - 1, m - 1) built up incrementally; every partial product is an
  // exact binomial coefficient.
  unsigned long long c = 1;
  for (std::size_t i = 1; i < m; ++i) {
    unsigned long long num = n + i;
    if (c > std::numeric_limits<unsigned long long>::max() / num) return std::numeric_limits<std::size_t>::max();
    c = c * num / i;
  }
  return static_cast<std::size_t>(c);
}

struct GridResult {
  double value = 0.0;           // min over grid jam points of max over tx
  Allocation argmin_jam;
  Allocation best_tx;           // transmitter best response at argmin_jam
  std::vector<double> inner_values;  // max over tx, per grid point, enumeration order
  std::size_t points = 0;
  double spacing = 0.0;    // J / (R - 1), per-coordinate grid step
  double lipschitz = 0.0;  // bound on sum_k |d value / d J_k|
  double gap_bound = 0.0;  // lipschitz * spacing
};

/// Enumerates jammer allocations on {J_k = J n_k / (R-1), sum n_k = R-1} in
/// lexicographic order of (n_1..n_M). The transmitter's inner maximization
/// is solved exactly by waterfilling. Ties keep the lexicographically
/// smallest point.
///
/// The gap to the true value is at most gap_bound: the rate's envelope has
/// |d/dJ_k| <= a_J / (2 min N), and every simplex point has a grid point
/// within one spacing in each coordinate.
inline GridResult grid_minimax(const GameParams& p, const GridSpec& spec) {
  const std::size_t m = p.size();
  if (spec.m != 0 && spec.m != m) throw std::invalid_argument("grid_minimax: grid channel count mismatch");
  if (spec.resolution < 2) throw std::invalid_argument("grid_minimax: resolution must be at least 2");
  if (m > kMaxGridChannels) {
    throw std::invalid_argument("grid_minimax: at most " + std::to_string(kMaxGridChannels) +
                                " channels supported (got " + std::to_string(m) + ")");
  }
  const std::size_t total = grid_size(spec.resolution, m);
  if (total > spec.cap) {
    throw std::invalid_argument("grid_minimax: grid of " + std::to_string(total) + " points exceeds cap " +
                                std::to_string(spec.cap));
  }

  const auto& ch = p.channels();
  const std::size_t n = spec.resolution - 1;
  const double step = p.j_budget() / static_cast<double>(n);

  GridResult r;
  r.points = total;
  r.spacing = step;
  const double n_min = *std::min_element(ch.noise().begin(), ch.noise().end());
  r.lipschitz = static_cast<double>(m) * ch.alpha_j() / (2.0 * n_min);
  r.gap_bound = r.lipschitz * r.spacing;
  r.inner_values.reserve(total);
  r.value = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> parts(m, 0);
  parts[m - 1] = n;  // lexicographically smallest composition
  Allocation jam;
  jam.budget = p.j_budget();
  jam.powers.resize(m);
  for (;;) {
    for (std::size_t k = 0; k < m; ++k) jam.powers[k] = step * static_cast<double>(parts[k]);
    // Keep the sum exact so feasibility checks see a clean budget.
    double last = p.j_budget();
    for (std::size_t k = 0; k + 1 < m; ++k) last -= jam.powers[k];
    jam.powers[m - 1] = std::max(last, 0.0);
    auto br = tx_best_response(p, jam);
    double val = utility_unchecked(ch, br.tx.powers, jam.powers);
    r.inner_values.push_back(val);
    if (val < r.value) {
      r.value = val;
      r.argmin_jam = jam;
      r.best_tx = br.tx;
    }

    // Lexicographic successor: take the last nonzero part j, move one unit
    // to j-1 and pour the rest of part j into the tail.
    std::size_t j = m - 1;
    while (j > 0 && parts[j] == 0) --j;
    if (j == 0) break;
    const std::size_t rest = parts[j] - 1;
    parts[j] = 0;
    parts[j - 1] += 1;
    parts[m - 1] = rest;
  }
  return r;
}

struct DynamicsOptions {
  double damping = 0.5;          // gamma in (0, 1]
  std::size_t max_iters = 10'000;
  double tol = kDynStepTol;      // stop when the sup-norm step is below this
  bool alternating = false;      // jammer responds to the freshly updated tx
};

struct DynamicsIterate {
  std::vector<double> tx;
  std::vector<double> jam;
  double utility = 0.0;
};

struct DynamicsTrace {
  std::vector<DynamicsIterate> iterates;  // one per update, at most max_iters
  double damping = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double last_step = 0.0;
  double final_distance = 0.0;  // sup-norm distance of the last point to the equilibrium
};

/// Damped best-response dynamics x <- (1 - g) x + g BR(opponent), with
/// simultaneous updates unless opt.alternating is set. Non-convergence is
/// reported, not thrown.
inline DynamicsTrace run_dynamics(const GameParams& p, const Allocation& tx0, const Allocation& jam0,
                                  const DynamicsOptions& opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw std::invalid_argument("run_dynamics: damping must be in (0, 1]");
  require_tx(p, tx0);
  require_jam(p, jam0);
  const double g = opt.damping;
  const auto& ch = p.channels();
  DynamicsTrace trace;
  trace.damping = g;
  Allocation tx = tx0;
  Allocation jam = jam0;

  auto blend = [g](std::vector<double>& x, const std::vector<double>& target) {
    double step = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double nx = (1.0 - g) * x[k] + g * target[k];
      step = std::max(step, std::abs(nx - x[k]));
      x[k] = nx;
    }
    return step;
  };

  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    double step;
    if (opt.alternating) {
      auto tx_target = tx_best_response(p, jam).tx.powers;
      step = blend(tx.powers, tx_target);
      auto jam_target = jam_best_response(p, tx).jam.powers;
      step = std::max(step, blend(jam.powers, jam_target));
    } else {
      auto tx_target = tx_best_response(p, jam).tx.powers;
      auto jam_target = jam_best_response(p, tx).jam.powers;
      step = std::max(blend(tx.powers, tx_target), blend(jam.powers, jam_target));
    }
    trace.iterations = it + 1;
    trace.last_step = step;
    trace.iterates.push_back({tx.powers, jam.powers, utility_unchecked(ch, tx.powers, jam.powers)});
    if (step < opt.tol) {
      trace.converged = true;
      break;
    }
  }

  NashSolution ne = solve_nash(p);
  trace.final_distance = std::max(sup_distance(tx.powers, ne.tx.powers), sup_distance(jam.powers, ne.jam.powers));
  return trace;
}

struct UniquenessProbe {
  std::vector<DynamicsTrace> runs;
  bool all_converged = false;
  double max_distance = 0.0;  // worst final_distance over runs
};

/// Runs damped dynamics from `starts` uniform random interior points.
inline UniquenessProbe probe_uniqueness(const GameParams& p, std::size_t starts, std::uint64_t seed,
                                        const DynamicsOptions& opt = {}) {
  UniquenessProbe out;
  out.all_converged = true;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < starts; ++i) {
    Allocation tx = sample_simplex(rng, p.size(), p.t_budget());
    Allocation jam = sample_simplex(rng, p.size(), p.j_budget());
    auto tr = run_dynamics(p, tx, jam, opt);
    out.all_converged = out.all_converged && tr.converged;
    out.max_distance = std::max(out.max_distance, tr.final_distance);
    out.runs.push_back(std::move(tr));
  }
  return out;
}

}  // namespace jamgame
