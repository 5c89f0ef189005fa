#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "patrol/instance.hpp"
#include "patrol/walk.hpp"

namespace patrol {

class InfeasibleBudget : public Error {
 public:
  using Error::Error;
};

class BudgetTooSmall : public Error {
 public:
  using Error::Error;
};

struct Cycle {
  std::vector<Vertex> vertices;  // each at most once; closing edge implied
  Time length;
};

template <class Prize>
struct Path {
  std::vector<Vertex> vertices;  // from x to y
  Time length;
  Prize prize{};
};

/// Length of the closed tour through `seq` (0 for fewer than two vertices).
inline Time cycle_length(const Instance& inst, std::span<const Vertex> seq) {
  Time total(0);
  if (seq.size() < 2) return total;
  for (std::size_t i = 0; i < seq.size(); ++i) total += inst.dist(seq[i], seq[(i + 1) % seq.size()]);
  return total;
}

inline Time path_length(const Instance& inst, std::span<const Vertex> seq) {
  Time total(0);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) total += inst.dist(seq[i], seq[i + 1]);
  return total;
}

namespace detail {

inline std::vector<Vertex> sorted_unique(std::span<const Vertex> subset) {
  std::vector<Vertex> s(subset.begin(), subset.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline std::vector<Vertex> nearest_neighbor(const Instance& inst, const std::vector<Vertex>& verts,
                                            std::size_t start) {
  const std::size_t m = verts.size();
  std::vector<bool> used(m, false);
  std::vector<Vertex> tour{verts[start]};
  used[start] = true;
  for (std::size_t step = 1; step < m; ++step) {
    const Vertex cur = tour.back();
    std::size_t best = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      if (best == m || inst.dist(cur, verts[j]) < inst.dist(cur, verts[best])) best = j;
    }
    used[best] = true;
    tour.push_back(verts[best]);
  }
  return tour;
}

/// First-improvement 2-opt until no exchange shortens the tour.
inline void two_opt(const Instance& inst, std::vector<Vertex>& t) {
  const std::size_t m = t.size();
  if (m < 4) return;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 2 < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;  // adjacent edges
        const Vertex a = t[i], b = t[i + 1], c = t[j], d = t[(j + 1) % m];
        if (inst.dist(a, c) + inst.dist(b, d) < inst.dist(a, b) + inst.dist(c, d)) {
          std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i + 1),
                       t.begin() + static_cast<std::ptrdiff_t>(j + 1));
          improved = true;
        }
      }
    }
  }
}

}  // namespace detail

/// True iff no single 2-opt exchange shortens the tour.
inline bool is_two_opt_optimal(const Instance& inst, std::span<const Vertex> t) {
  const std::size_t m = t.size();
  for (std::size_t i = 0; i + 2 < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      const Vertex a = t[i], b = t[i + 1], c = t[j], d = t[(j + 1) % m];
      if (inst.dist(a, c) + inst.dist(b, d) < inst.dist(a, b) + inst.dist(c, d)) return false;
    }
  }
  return true;
}

/// Heuristic TSP tour of `subset`: the best nearest-neighbour tour over all
/// start vertices, then 2-opt to a local optimum. Deterministic; ties go to
/// the lowest vertex index.
inline Cycle tsp_tour(const Instance& inst, std::span<const Vertex> subset) {
  const std::vector<Vertex> verts = detail::sorted_unique(subset);
  if (verts.empty()) throw std::invalid_argument("tsp_tour: empty vertex set");
  for (Vertex v : verts) {
    if (!inst.contains(v)) throw VertexOutOfRange("tsp_tour: vertex outside instance");
  }
  if (verts.size() <= 3) return {verts, cycle_length(inst, verts)};

  std::vector<Vertex> best;
  Time best_len;
  for (std::size_t s = 0; s < verts.size(); ++s) {
    auto tour = detail::nearest_neighbor(inst, verts, s);
    const Time len = cycle_length(inst, tour);
    if (best.empty() || len < best_len) {
      best = std::move(tour);
      best_len = len;
    }
  }
  detail::two_opt(inst, best);
  return {best, cycle_length(inst, best)};
}

inline Cycle tsp_tour(const Instance& inst) {
  std::vector<Vertex> all(static_cast<std::size_t>(inst.size()));
  std::iota(all.begin(), all.end(), 0);
  return tsp_tour(inst, all);
}

/// Worst-case ratio between the cycle count of mccp() and the optimum that
/// the build documents and audits (see tests/subroutines_test.cpp).
inline constexpr int kMccpFactor = 5;

/// Cycle cover of `subset` with every cycle no longer than `budget`, by
/// tour splitting.
///
/// The TSP tour is cut greedily into maximal consecutive segments whose path
/// length is at most budget/2; closing a segment at most doubles its length
/// in a metric, so each cycle fits. Adjacent cycles are then merged while
/// the merged cycle still fits. Every rotation of the tour is tried and the
/// one with the fewest cycles wins. Singleton (zero-length) cycles are
/// allowed, so any nonnegative budget is feasible.
inline std::vector<Cycle> mccp(const Instance& inst, std::span<const Vertex> subset, const Time& budget) {
  if (budget.sign() < 0) throw InfeasibleBudget("mccp: negative cycle length budget");
  const Cycle tour = tsp_tour(inst, subset);
  if (tour.length <= budget) return {tour};

  const std::vector<Vertex>& t = tour.vertices;
  const std::size_t m = t.size();
  const Time half = budget / 2;

  std::vector<std::vector<Vertex>> best;
  for (std::size_t rot = 0; rot < m; ++rot) {
    std::vector<std::vector<Vertex>> segments;
    Time seg_len(0);
    for (std::size_t k = 0; k < m; ++k) {
      const Vertex v = t[(rot + k) % m];
      if (!segments.empty() && !segments.back().empty() &&
          seg_len + inst.dist(segments.back().back(), v) <= half) {
        seg_len += inst.dist(segments.back().back(), v);
        segments.back().push_back(v);
      } else {
        segments.push_back({v});
        seg_len = Time(0);
      }
    }
    std::vector<std::vector<Vertex>> merged;
    for (auto& seg : segments) {
      if (!merged.empty()) {
        std::vector<Vertex> joined = merged.back();
        joined.insert(joined.end(), seg.begin(), seg.end());
        if (cycle_length(inst, joined) <= budget) {
          merged.back() = std::move(joined);
          continue;
        }
      }
      merged.push_back(std::move(seg));
    }
    if (best.empty() || merged.size() < best.size()) best = std::move(merged);
  }

  std::vector<Cycle> out;
  std::vector<int> seen(static_cast<std::size_t>(inst.size()), 0);
  for (auto& c : best) {
    Time len = cycle_length(inst, c);
    if (len > budget) throw std::logic_error("mccp: cycle exceeds budget");
    for (Vertex v : c) ++seen[static_cast<std::size_t>(v)];
    out.push_back({std::move(c), len});
  }
  for (Vertex v : t) {
    if (seen[static_cast<std::size_t>(v)] != 1) throw std::logic_error("mccp: cover is not a partition");
  }
  return out;
}

/// `k` robots on cycle `c`, phase-shifted by length/k each, so every vertex
/// of the cycle sees latency exactly length/k.
inline std::vector<TimedWalk> equally_place(const Cycle& c, int k) {
  if (k < 1) throw std::invalid_argument("equally_place: need at least one robot");
  if (c.vertices.empty()) throw std::invalid_argument("equally_place: empty cycle");
  std::vector<TimedWalk> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const Time offset = c.length.is_zero() ? Time(0) : c.length * Rational(j, k);
    out.push_back(TimedWalk::simple(c.vertices, offset));
  }
  return out;
}

/// Candidate-count limit for the exact orienteering search.
inline constexpr std::size_t kExactOrienteeringLimit = 16;

namespace detail {

template <class Prize>
Prize to_prize(const Time& t) {
  if constexpr (std::is_same_v<Prize, Rational>) {
    return t;
  } else {
    return static_cast<Prize>(t.to_double());
  }
}

template <class Prize>
class OrienteeringSearch {
 public:
  OrienteeringSearch(const Instance& inst, std::vector<Vertex> cands, Vertex x, Vertex y,
                     const Time& budget, std::span<const Prize> psi)
      : inst_(inst), cands_(std::move(cands)), x_(x), y_(y), budget_(budget), psi_(psi) {}

  Path<Prize> run() {
    best_.vertices = {x_, y_};
    best_.length = inst_.dist(x_, y_);
    best_.prize = psi_[static_cast<std::size_t>(x_)] + psi_[static_cast<std::size_t>(y_)];
    path_ = {x_};
    dfs(x_, Time(0), 0, best_.prize);
    return best_;
  }

 private:
  void dfs(Vertex cur, const Time& len, std::uint32_t mask, Prize prize) {
    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 8) |
                              static_cast<std::uint64_t>(path_.size() == 1 ? 0xFF : index_of(cur));
    if (auto it = reached_.find(key); it != reached_.end() && it->second <= len) return;
    reached_[key] = len;

    if (best_.prize < prize) {
      best_.vertices = path_;
      best_.vertices.push_back(y_);
      best_.length = len + inst_.dist(cur, y_);
      best_.prize = prize;
    }

    Prize bound = prize;
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      if ((mask >> i) & 1U) continue;
      if (len + inst_.dist(cur, cands_[i]) + inst_.dist(cands_[i], y_) <= budget_) {
        bound = bound + psi_[static_cast<std::size_t>(cands_[i])];
      }
    }
    if (bound <= best_.prize) return;

    for (std::size_t i = 0; i < cands_.size(); ++i) {
      if ((mask >> i) & 1U) continue;
      const Vertex z = cands_[i];
      const Time next = len + inst_.dist(cur, z);
      if (next + inst_.dist(z, y_) > budget_) continue;
      path_.push_back(z);
      dfs(z, next, mask | (1U << i), prize + psi_[static_cast<std::size_t>(z)]);
      path_.pop_back();
    }
  }

  std::size_t index_of(Vertex v) const {
    return static_cast<std::size_t>(std::lower_bound(cands_.begin(), cands_.end(), v) - cands_.begin());
  }

  const Instance& inst_;
  std::vector<Vertex> cands_;
  Vertex x_, y_;
  Time budget_;
  std::span<const Prize> psi_;
  Path<Prize> best_;
  std::vector<Vertex> path_;
  std::unordered_map<std::uint64_t, Time> reached_;
};

/// Repeated best-ratio insertion (prize per unit of added length).
template <class Prize>
Path<Prize> insertion_orienteering(const Instance& inst, std::vector<Vertex> cands, Vertex x, Vertex y,
                                   const Time& budget, std::span<const Prize> psi) {
  std::vector<Vertex> path{x, y};
  Time len = inst.dist(x, y);
  Prize prize = psi[static_cast<std::size_t>(x)] + psi[static_cast<std::size_t>(y)];
  std::vector<bool> used(cands.size(), false);
  while (true) {
    std::size_t best_c = cands.size();
    std::size_t best_pos = 0;
    Time best_delta;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (used[c]) continue;
      const Vertex z = cands[c];
      std::size_t pos = 0;
      Time delta;
      for (std::size_t p = 0; p + 1 < path.size(); ++p) {
        const Time dlt = inst.dist(path[p], z) + inst.dist(z, path[p + 1]) - inst.dist(path[p], path[p + 1]);
        if (pos == 0 || dlt < delta) {
          delta = dlt;
          pos = p + 1;
        }
      }
      if (len + delta > budget) continue;
      if (best_c == cands.size()) {
        best_c = c;
        best_pos = pos;
        best_delta = delta;
        continue;
      }
      // psi_z / delta_z > psi_best / delta_best, without dividing.
      const Prize lhs = psi[static_cast<std::size_t>(z)] * to_prize<Prize>(best_delta);
      const Prize rhs = psi[static_cast<std::size_t>(cands[best_c])] * to_prize<Prize>(delta);
      if (rhs < lhs) {
        best_c = c;
        best_pos = pos;
        best_delta = delta;
      }
    }
    if (best_c == cands.size()) break;
    used[best_c] = true;
    path.insert(path.begin() + static_cast<std::ptrdiff_t>(best_pos), cands[best_c]);
    len += best_delta;
    prize = prize + psi[static_cast<std::size_t>(cands[best_c])];
  }
  return {std::move(path), len, prize};
}

}  // namespace detail

/// Path from x to y of length at most `budget` through `candidates`,
/// maximizing the sum of psi over its vertices (x and y always included).
///
/// Candidates z with dist(x,z) + dist(z,y) > budget are dropped first. Up to
/// kExactOrienteeringLimit survivors are solved exactly by depth-first branch
/// and bound; larger sets fall back to best-ratio insertion. `psi` is
/// indexed by vertex and must cover the whole instance.
template <class Prize>
Path<Prize> orienteering(const Instance& inst, std::span<const Vertex> candidates, Vertex x, Vertex y,
                         const Time& budget, std::span<const Prize> psi) {
  if (static_cast<int>(psi.size()) != inst.size()) {
    throw std::invalid_argument("orienteering: weights must cover every vertex");
  }
  if (budget < inst.dist(x, y)) {
    throw BudgetTooSmall("orienteering: budget " + budget.str() + " below dist(x,y) = " +
                         inst.dist(x, y).str());
  }
  if (x == y) return {{x}, Time(0), psi[static_cast<std::size_t>(x)]};

  std::vector<Vertex> cands;
  for (Vertex z : detail::sorted_unique(candidates)) {
    if (z == x || z == y) continue;
    if (inst.dist(x, z) + inst.dist(z, y) <= budget) cands.push_back(z);
  }
  if (cands.size() <= kExactOrienteeringLimit) {
    return detail::OrienteeringSearch<Prize>(inst, std::move(cands), x, y, budget, psi).run();
  }
  return detail::insertion_orienteering<Prize>(inst, std::move(cands), x, y, budget, psi);
}

}  // namespace patrol
