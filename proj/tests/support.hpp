#pragma once

// Shared fixtures and brute-force reference solvers for the test suites.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "patrol/patrol.hpp"

namespace patrol::testing {

/// Unit-edge triangle a-b, a-c with b-c = 2 and r = (2, 4, 4).
inline Instance triangle_instance() {
  std::vector<std::vector<Time>> d{{0, 1, 1}, {1, 0, 2}, {1, 2, 0}};
  return Instance("triangle", {"a", "b", "c"}, d, {2, 4, 4});
}

/// Random integer metric: edge weights uniform on [1, max_d], then closed
/// under shortest paths. Latency constraints uniform on [r_lo, r_hi].
inline Instance random_integer_instance(std::mt19937_64& rng, int n, int max_d, int r_lo, int r_hi) {
  const auto un = static_cast<std::size_t>(n);
  std::uniform_int_distribution<int> dd(1, max_d);
  std::uniform_int_distribution<int> rr(r_lo, r_hi);
  std::vector<std::vector<int>> w(un, std::vector<int>(un, 0));
  for (std::size_t u = 0; u < un; ++u) {
    for (std::size_t v = u + 1; v < un; ++v) w[u][v] = w[v][u] = dd(rng);
  }
  for (std::size_t k = 0; k < un; ++k) {
    for (std::size_t u = 0; u < un; ++u) {
      for (std::size_t v = 0; v < un; ++v) w[u][v] = std::min(w[u][v], w[u][k] + w[k][v]);
    }
  }
  std::vector<std::vector<Time>> d(un, std::vector<Time>(un));
  std::vector<Time> r;
  for (std::size_t u = 0; u < un; ++u) {
    for (std::size_t v = 0; v < un; ++v) d[u][v] = Time(w[u][v]);
    r.push_back(Time(rr(rng)));
  }
  return Instance(d, r);
}

inline std::vector<Vertex> all_vertices(const Instance& inst) {
  std::vector<Vertex> v(static_cast<std::size_t>(inst.size()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

/// Shortest Hamiltonian cycle through `verts` by trying every order.
inline Time brute_tsp(const Instance& inst, std::vector<Vertex> verts) {
  if (verts.size() <= 1) return Time(0);
  std::sort(verts.begin() + 1, verts.end());
  std::optional<Time> best;
  do {
    const Time len = cycle_length(inst, verts);
    if (!best || len < *best) best = len;
  } while (std::next_permutation(verts.begin() + 1, verts.end()));
  return *best;
}

/// Fewest cycles of length at most `budget` partitioning `verts`, over all
/// set partitions.
inline int brute_min_cycle_cover(const Instance& inst, const std::vector<Vertex>& verts, const Time& budget) {
  const std::size_t m = verts.size();
  std::map<std::uint32_t, bool> fits;
  auto block_fits = [&](std::uint32_t mask) {
    auto it = fits.find(mask);
    if (it != fits.end()) return it->second;
    std::vector<Vertex> b;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) b.push_back(verts[i]);
    }
    const bool ok = brute_tsp(inst, b) <= budget;
    fits[mask] = ok;
    return ok;
  };
  // dp over subsets: fewest fitting blocks covering the mask
  const std::uint32_t full = (1U << m) - 1;
  std::vector<int> dp(full + 1, std::numeric_limits<int>::max());
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || dp[mask ^ sub] == std::numeric_limits<int>::max()) continue;
      if (block_fits(sub)) dp[mask] = std::min(dp[mask], dp[mask ^ sub] + 1);
    }
  }
  return dp[full];
}

/// Best prize of an x-y path within `budget` through any ordered subset of
/// `cands`.
inline Rational brute_orienteering(const Instance& inst, const std::vector<Vertex>& cands, Vertex x, Vertex y,
                                   const Time& budget, const std::vector<Rational>& psi) {
  const std::size_t m = cands.size();
  Rational best = psi[static_cast<std::size_t>(x)] + psi[static_cast<std::size_t>(y)];
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    std::vector<Vertex> sub;
    Rational prize = psi[static_cast<std::size_t>(x)] + psi[static_cast<std::size_t>(y)];
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) {
        sub.push_back(cands[i]);
        prize += psi[static_cast<std::size_t>(cands[i])];
      }
    }
    if (prize <= best) continue;
    std::sort(sub.begin(), sub.end());
    do {
      std::vector<Vertex> path{x};
      path.insert(path.end(), sub.begin(), sub.end());
      path.push_back(y);
      if (path_length(inst, path) <= budget) {
        best = prize;
        break;
      }
    } while (std::next_permutation(sub.begin(), sub.end()));
  }
  return best;
}

/// Steady-state feasibility of one periodic leg list, by listing every
/// arrival and departure over a single period and checking circular gaps.
inline bool legs_feasible_by_gaps(const Instance& inst, const std::vector<Leg>& legs) {
  struct Visit {
    Time arrive, depart;
  };
  std::map<Vertex, std::vector<Visit>> visits;
  Time now(0);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (i > 0) now += legs[i].travel;
    const Time arrive = now;
    now += legs[i].hold;
    visits[legs[i].vertex].push_back({arrive, now});
  }
  const Time period = now + legs.front().travel;
  for (const auto& [v, vs] : visits) {
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const Time next = k + 1 < vs.size() ? vs[k + 1].arrive : vs.front().arrive + period;
      if (next - vs[k].depart > inst.r(v)) return false;
    }
  }
  return true;
}

/// Largest grid multiple d in [dist(x, y), slack] for which appending a
/// leg of duration d to `prefix` stays feasible, by scanning upwards.
inline Time linear_scan_detour(const TimedWalk& prefix, Vertex y, const Instance& inst) {
  std::vector<Leg> legs = legs_of(prefix, inst);
  Time elapsed(0);
  for (std::size_t i = 0; i < legs.size(); ++i) elapsed += (i > 0 ? legs[i].travel : Time(0)) + legs[i].hold;
  const Vertex x = prefix.steps().back().vertex;
  const Vertex start = prefix.steps().front().vertex;
  // last departure from y within the prefix, or the start of the walk
  Time last_y(0);
  Time t(0);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (i > 0) t += legs[i].travel;
    t += legs[i].hold;
    if (legs[i].vertex == y) last_y = t;
  }
  const Time slack = inst.r(y) - (elapsed - last_y);
  const Time grid = inst.time_grid();
  Time best = inst.dist(x, y);
  for (Time d = inst.dist(x, y); d <= slack; d += grid) {
    auto ext = legs;
    ext.push_back({y, d, Time(0)});
    ext.front().travel = inst.dist(y, start);
    if (legs_feasible_by_gaps(inst, ext)) best = d;
  }
  return best;
}

/// Random walk over an instance: `len` steps, no consecutive repeats,
/// random grid holds and a random offset inside the period.
inline TimedWalk random_walk(std::mt19937_64& rng, const Instance& inst, int len, int max_hold) {
  std::uniform_int_distribution<int> pick(0, inst.size() - 1);
  std::uniform_int_distribution<int> hold(0, max_hold);
  std::vector<Step> steps;
  while (static_cast<int>(steps.size()) < len) {
    const Vertex v = pick(rng);
    if (!steps.empty() && steps.back().vertex == v) continue;
    if (static_cast<int>(steps.size()) == len - 1 && steps.size() > 0 && steps.front().vertex == v) continue;
    steps.push_back({v, Time(hold(rng))});
  }
  TimedWalk w(steps);
  const Time p = w.period(inst);
  if (p.sign() > 0) {
    std::uniform_int_distribution<std::int64_t> off(0, p.ceil() * 4 - 1);
    w.set_offset(mod(Rational(off(rng), 4), p));
  }
  return w;
}

/// Smallest robot count over partitioned solutions in which each part is
/// one simple cycle (in its best order) shared by equally spaced robots.
inline int min_partitioned_cyclic_robots(const Instance& inst) {
  const int n = inst.size();
  const std::uint32_t full = (1U << n) - 1;
  std::vector<int> cost(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<Vertex> b;
    Time tight;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        if (b.empty() || inst.r(i) < tight) tight = inst.r(i);
        b.push_back(i);
      }
    }
    const auto k = (brute_tsp(inst, b) / tight).ceil();
    cost[mask] = static_cast<int>(std::max<Rational::int_type>(1, k));
  }
  std::vector<int> dp(full + 1, std::numeric_limits<int>::max());
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (sub & low) dp[mask] = std::min(dp[mask], dp[mask ^ sub] + cost[sub]);
    }
  }
  return dp[full];
}

}  // namespace patrol::testing
