#pragma once

// Pareto dominance utilities for two minimization objectives.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace morphoforge {

struct ObjectivePair {
  double task = 0.0;
  double design = 0.0;

  double operator[](std::size_t i) const { return i == 0 ? task : design; }
  friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

/// a <= b componentwise and a < b in at least one component.
constexpr bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.task <= b.task && a.design <= b.design && (a.task < b.task || a.design < b.design);
}

using Fronts = std::vector<std::vector<std::size_t>>;

/// Front 0 is the non-dominated set, front k is non-dominated once fronts < k
/// are removed. Indices inside each front are ascending.
///
/// Two-objective sweep: after a lexicographic sort every earlier point has a
/// smaller-or-equal first objective, so a front dominates the incoming point
/// exactly when its most recently added member does. Front membership is
/// monotone in the front index, which allows a binary search.
inline Fronts non_dominated_sort(std::span<const ObjectivePair> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].task != pts[b].task) return pts[a].task < pts[b].task;
    return pts[a].design < pts[b].design;
  });

  Fronts fronts;
  std::vector<std::size_t> last;  // last member added to each front
  for (std::size_t idx : order) {
    const auto& p = pts[idx];
    std::size_t lo = 0;
    std::size_t hi = fronts.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (dominates(pts[last[mid]], p)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == fronts.size()) {
      fronts.emplace_back();
      last.push_back(idx);
    }
    fronts[lo].push_back(idx);
    last[lo] = idx;
  }
  for (auto& f : fronts) std::sort(f.begin(), f.end());
  return fronts;
}

/// Per-point rank (front index) from a front decomposition.
inline std::vector<int> ranks_from_fronts(const Fronts& fronts, std::size_t n) {
  std::vector<int> rank(n, -1);
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    for (std::size_t i : fronts[k]) rank[i] = static_cast<int>(k);
  }
  return rank;
}

/// Crowding distance of each member of one front. Boundary members of either
/// objective get +inf; an objective with zero spread contributes nothing.
inline std::vector<double> crowding_distance(std::span<const ObjectivePair> front) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < 2; ++m) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double span = front[order.back()][m] - front[order.front()][m];
    if (!(span > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      dist[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / span;
    }
  }
  return dist;
}

/// Area dominated by `pts` and bounded by `reference`. Points that do not
/// strictly dominate the reference contribute nothing.
inline double hypervolume_2d(std::span<const ObjectivePair> pts, const ObjectivePair& reference) {
  std::vector<ObjectivePair> inside;
  for (const auto& p : pts) {
    if (p.task < reference.task && p.design < reference.design) inside.push_back(p);
  }
  std::sort(inside.begin(), inside.end(), [](const ObjectivePair& a, const ObjectivePair& b) {
    return a.task != b.task ? a.task < b.task : a.design < b.design;
  });
  double volume = 0.0;
  double best_design = reference.design;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    if (inside[i].design >= best_design) continue;
    // Next strictly better design value bounds this strip on the right.
    double right = reference.task;
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      if (inside[j].design < inside[i].design) {
        right = inside[j].task;
        break;
      }
    }
    volume += (right - inside[i].task) * (reference.design - inside[i].design);
    best_design = inside[i].design;
  }
  return volume;
}

}  // namespace morphoforge
