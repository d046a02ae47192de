#pragma once

// Water-level solver: given per-channel floors f_k and a budget B, find the
// level L with sum_k (L - f_k)^+ = B.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jamgame {

/// Tolerance on fill-sum residuals and level agreement, scaled by
/// max(1, |budget|) (or max(1, |level|)).
inline constexpr double kSolveTol = 1e-12;

struct WaterSolution {
  double level = 0.0;
  std::vector<double> fills;
  std::vector<std::size_t> active;  // ascending channel indices with fill > 0
};

namespace detail {

inline void check_floors(std::span<const double> floors) {
  if (floors.empty()) throw std::invalid_argument("water_fill: empty floors");
  for (double f : floors) {
    if (!std::isfinite(f)) throw std::invalid_argument("water_fill: non-finite floor");
    if (f < 0.0) throw std::invalid_argument("water_fill: negative floor");
  }
}

inline WaterSolution fill_at_level(std::span<const double> floors, double level) {
  WaterSolution s;
  s.level = level;
  s.fills.resize(floors.size());
  for (std::size_t k = 0; k < floors.size(); ++k) {
    // floor == level counts as inactive
    s.fills[k] = floors[k] < level ? level - floors[k] : 0.0;
    if (s.fills[k] > 0.0) s.active.push_back(k);
  }
  return s;
}

/// Plain bisection on the level. Slower and less exact than the breakpoint
/// scan; kept as a cross-check.
inline double water_level_bisect(std::span<const double> floors, double budget) {
  double lo = *std::min_element(floors.begin(), floors.end());
  double hi = *std::max_element(floors.begin(), floors.end()) + budget;
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double s = 0.0;
    for (double f : floors) s += std::max(mid - f, 0.0);
    (s < budget ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Sorts the floors and scans the breakpoints for the active set, then
/// solves the level in closed form. O(M log M).
///
/// budget == 0 returns level = min(floors) with all-zero fills.
inline WaterSolution water_fill(std::span<const double> floors, double budget) {
  detail::check_floors(floors);
  if (!std::isfinite(budget)) throw std::invalid_argument("water_fill: non-finite budget");
  if (budget < 0.0) throw std::invalid_argument("water_fill: negative budget");

  const std::size_t m = floors.size();
  std::vector<double> sorted(floors.begin(), floors.end());
  std::sort(sorted.begin(), sorted.end());
  if (budget == 0.0) return detail::fill_at_level(floors, sorted.front());

  // With the k cheapest channels active, L = (B + sum of their floors) / k.
  // Accept the first k whose level does not reach the next floor.
  double prefix = 0.0;
  double level = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    prefix += sorted[k - 1];
    level = (budget + prefix) / static_cast<double>(k);
    if (k == m || level <= sorted[k]) break;
  }

  WaterSolution s = detail::fill_at_level(floors, level);
#ifndef NDEBUG
  double check = detail::water_level_bisect(floors, budget);
  assert(std::abs(check - level) <= 1e-9 * std::max(1.0, std::abs(level)));
#endif
  return s;
}

inline WaterSolution water_fill(const std::vector<double>& floors, double budget) {
  return water_fill(std::span<const double>(floors), budget);
}

struct LevelCheck {
  std::optional<double> level;  // empty when no channel is active
  bool consistent = false;
  std::string detail;
};

/// Inverse check: recovers the level from an allocation and reports whether
/// the allocation is a valid waterfilling against `floors`.
inline LevelCheck level_for_fills(std::span<const double> floors, std::span<const double> fills,
                                  double tol = kSolveTol) {
  if (floors.size() != fills.size()) throw std::invalid_argument("level_for_fills: length mismatch");
  LevelCheck out;
  std::size_t first = floors.size();
  for (std::size_t k = 0; k < fills.size(); ++k) {
    if (fills[k] > 0.0) {
      first = k;
      break;
    }
  }
  if (first == floors.size()) {
    out.detail = "no active channel";
    return out;
  }
  const double level = floors[first] + fills[first];
  out.level = level;
  const double eps = tol * std::max(1.0, std::abs(level));
  for (std::size_t k = 0; k < fills.size(); ++k) {
    if (fills[k] < 0.0) {
      out.detail = "negative fill at index " + std::to_string(k);
      return out;
    }
    if (fills[k] > 0.0) {
      double lk = floors[k] + fills[k];
      if (std::abs(lk - level) > eps) {
        out.detail = "active levels disagree: " + std::to_string(level) + " vs " + std::to_string(lk) +
                     " at index " + std::to_string(k);
        return out;
      }
    } else if (floors[k] < level - eps) {
      out.detail = "inactive channel " + std::to_string(k) + " lies below the level";
      return out;
    }
  }
  out.consistent = true;
  return out;
}

}  // namespace jamgame
