#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "patrol/instance.hpp"
#include "patrol/latency.hpp"
#include "patrol/subroutines.hpp"
#include "patrol/walk.hpp"

namespace patrol {

struct GreedyConfig {
  Rational m{1, 10};       // weight discount for vertices already on the walk
  int restarts = 5;        // independent seeded runs; the best one is kept
  std::uint64_t seed = 0;

  void validate() const {
    if (m.sign() <= 0 || m > Rational(1)) throw std::invalid_argument("greedy: m must lie in (0, 1]");
    if (restarts < 1) throw std::invalid_argument("greedy: restarts must be at least 1");
  }
};

namespace detail {

/// One robot's walk under construction, with its expiry state and the leg
/// list used for periodic feasibility checks.
class WalkBuilder {
 public:
  WalkBuilder(const Instance& inst, Vertex start)
      : inst_(inst), start_(start), state_(inst, start), on_walk_(static_cast<std::size_t>(inst.size()), false) {
    steps_.push_back({start, Time(0)});
    legs_.push_back({start, Time(0), Time(0)});
    on_walk_[static_cast<std::size_t>(start)] = true;
  }

  Vertex start() const { return start_; }
  Vertex current() const { return state_.current(); }
  const ExpiryState& state() const { return state_; }
  bool on_walk(Vertex v) const { return on_walk_[static_cast<std::size_t>(v)]; }
  const std::vector<Step>& steps() const { return steps_; }

  void hold_current(const Time& t) {
    steps_.back().hold += t;
    legs_.back().hold += t;
    state_.hold(t);
  }

  void append(Vertex v, const Time& hold) {
    const Time travel = inst_.dist(current(), v);
    state_.move_to(v);
    state_.hold(hold);
    steps_.push_back({v, hold});
    legs_.push_back({v, travel, hold});
    legs_.front().travel = inst_.dist(v, start_);
    on_walk_[static_cast<std::size_t>(v)] = true;
  }

  /// Periodic feasibility of the walk extended by a leg to `y` that takes
  /// `travel` time (arrival at y, zero hold, then back to the start).
  bool feasible_with(Vertex y, const Time& travel) {
    const Time saved = legs_.front().travel;
    legs_.push_back({y, travel, Time(0)});
    legs_.front().travel = inst_.dist(y, start_);
    const bool ok = periodic_feasible_legs(inst_, legs_);
    legs_.pop_back();
    legs_.front().travel = saved;
    return ok;
  }

  bool feasible() const { return periodic_feasible_legs(inst_, legs_); }

  /// Largest leg duration d on the instance's time grid, between dist(x,y)
  /// and the slack of y, that keeps the extended walk feasible. Feasibility
  /// only gets harder as d grows, so binary search applies.
  Time max_detour(Vertex y, const Time& grid) {
    const Time lo = inst_.dist(current(), y);
    const Time hi = state_.slack(y);
    if (hi <= lo || grid.sign() <= 0) return lo;
    Rational::int_type good = 0;
    Rational::int_type bad = ((hi - lo) / grid).floor() + 1;
    while (bad - good > 1) {
      const auto mid = good + (bad - good) / 2;
      if (feasible_with(y, lo + grid * Rational(mid))) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return lo + grid * Rational(good);
  }

  TimedWalk walk() const { return TimedWalk(steps_); }

 private:
  const Instance& inst_;
  Vertex start_;
  ExpiryState state_;
  std::vector<Step> steps_;
  std::vector<Leg> legs_;  // legs_[0].travel is the closing leg
  std::vector<bool> on_walk_;
};

inline WalkBuilder replay(const Instance& inst, const TimedWalk& prefix) {
  if (prefix.empty()) throw std::invalid_argument("empty walk prefix");
  WalkBuilder b(inst, prefix.steps().front().vertex);
  b.hold_current(prefix.steps().front().hold);
  for (std::size_t i = 1; i < prefix.size(); ++i) b.append(prefix.steps()[i].vertex, prefix.steps()[i].hold);
  return b;
}

}  // namespace detail

/// Longest x -> y leg (x = last vertex of `prefix`) on the instance's time
/// grid that keeps [prefix, y] periodic-feasible.
inline Time max_feasible_detour(const TimedWalk& prefix, Vertex y, const Instance& inst) {
  auto b = detail::replay(inst, prefix);
  return b.max_detour(y, inst.time_grid());
}

/// Result of one seeded greedy run.
struct GreedyRun {
  Solution solution;
  /// Per walk, the vertices that were deferred to later robots while it was
  /// being built.
  std::vector<std::vector<Vertex>> expired;
};

enum class GreedyKind { kSimple, kOrienteering };

namespace detail {

inline std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

inline constexpr std::size_t kMaxAppendsPerWalk = 1'000'000;

}  // namespace detail

/// A single randomized run of either greedy heuristic.
inline GreedyRun greedy_run(const Instance& inst, const GreedyConfig& cfg, int restart, GreedyKind kind) {
  cfg.validate();
  const int n = inst.size();
  const auto un = static_cast<std::size_t>(n);
  const Time grid = inst.time_grid();
  auto rng = detail::restart_rng(cfg.seed, restart);
  const double discount = cfg.m.to_double();

  GreedyRun run;
  std::vector<bool> remaining(un, true);
  std::size_t left = un;

  while (left > 0) {
    std::vector<Vertex> pool;
    for (Vertex v = 0; v < n; ++v) {
      if (remaining[static_cast<std::size_t>(v)]) pool.push_back(v);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const Vertex a = pool[pick(rng)];

    detail::WalkBuilder b(inst, a);
    std::vector<bool> expired(un, false);
    auto open = [&](Vertex v) {
      const auto i = static_cast<std::size_t>(v);
      return remaining[i] && !expired[i];
    };

    for (std::size_t appends = 0;; ++appends) {
      if (appends > detail::kMaxAppendsPerWalk) throw std::logic_error("greedy: walk construction does not terminate");
      bool pending = false;
      for (Vertex v : pool) pending = pending || (open(v) && !b.on_walk(v));
      if (!pending) break;

      const Vertex x = b.current();
      // least slack first; ties go to the nearer vertex, then the lower index
      std::vector<std::tuple<Time, Time, Vertex>> order;
      for (Vertex v : pool) {
        if (open(v) && v != x) order.emplace_back(b.state().slack(v), inst.dist(x, v), v);
      }
      std::sort(order.begin(), order.end());

      bool appended = false;
      for (const auto& [slack, dist, y] : order) {
        if (expired[static_cast<std::size_t>(y)]) continue;
        if (!b.feasible_with(y, inst.dist(x, y))) {
          if (!b.on_walk(y)) expired[static_cast<std::size_t>(y)] = true;
          continue;
        }
        if (kind == GreedyKind::kSimple) {
          b.append(y, Time(0));
        } else {
          const Time d = b.max_detour(y, grid);
          const Time closing = inst.dist(y, a);
          for (Vertex z : pool) {
            if (z == y || !open(z) || b.on_walk(z)) continue;
            if (b.state().slack(z) < d + closing) expired[static_cast<std::size_t>(z)] = true;
          }
          std::vector<double> psi(un, 0.0);
          std::vector<Vertex> cands;
          for (Vertex v : pool) {
            if (!open(v)) continue;
            cands.push_back(v);
            double w = 1.0 / std::max(b.state().slack(v).to_double(), 1e-12);
            if (b.on_walk(v)) w *= discount;
            psi[static_cast<std::size_t>(v)] = w;
          }
          const auto path = orienteering<double>(inst, cands, x, y, d, psi);
          for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) b.append(path.vertices[i], Time(0));
          b.append(y, d - path.length);
        }
        if (!b.feasible()) throw std::logic_error("greedy: walk prefix lost periodic feasibility");
        appended = true;
        break;
      }
      if (!appended) break;
    }

    std::vector<Vertex> deferred;
    for (Vertex v : pool) {
      if (expired[static_cast<std::size_t>(v)]) deferred.push_back(v);
    }
    run.expired.push_back(std::move(deferred));
    const TimedWalk w = b.walk();
    for (Vertex v : w.vertices()) {
      remaining[static_cast<std::size_t>(v)] = false;
      --left;
    }
    run.solution.walks.push_back(w);
  }
  return run;
}

namespace detail {

inline Solution best_of_restarts(const Instance& inst, const GreedyConfig& cfg, GreedyKind kind) {
  cfg.validate();
  Solution best;
  Time best_len;
  for (int k = 0; k < cfg.restarts; ++k) {
    Solution s = greedy_run(inst, cfg, k, kind).solution;
    const Time len = s.total_length(inst);
    if (k == 0 || s.robots() < best.robots() || (s.robots() == best.robots() && len < best_len)) {
      best = std::move(s);
      best_len = len;
    }
  }
  return best;
}

}  // namespace detail

/// Minimum-expiry greedy: each robot repeatedly moves to the vertex closest
/// to expiring whose addition keeps its walk periodic-feasible; vertices it
/// cannot serve are left to the next robot.
inline Solution solve_simple_greedy(const Instance& inst, const GreedyConfig& cfg = {}) {
  return detail::best_of_restarts(inst, cfg, GreedyKind::kSimple);
}

/// Orienteering-based greedy: like the simple greedy, but every leg to the
/// chosen target is stretched to the longest feasible duration and filled
/// with an orienteering path that collects urgent vertices on the way.
inline Solution solve_orienteering_greedy(const Instance& inst, const GreedyConfig& cfg = {}) {
  return detail::best_of_restarts(inst, cfg, GreedyKind::kOrienteering);
}

}  // namespace patrol
