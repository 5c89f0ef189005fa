#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "patrol/instance.hpp"
#include "patrol/latency.hpp"
#include "patrol/walk.hpp"

namespace patrol {

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

inline constexpr int kOracleMaxVertices = 6;
inline constexpr int kOracleMaxRobots = 3;
inline constexpr int kOracleHorizonCap = 64;

struct DecisionResult {
  bool feasible = false;
  std::optional<Solution> solution;
  /// Search statistics.
  std::size_t states_expanded = 0;
};

namespace detail {

/// Exhaustive search over joint robot states on the integer time grid.
///
/// A state is the sorted list of robot positions (target vertex, remaining
/// travel steps; 0 means "at the vertex") plus the expiry counter of every
/// vertex. A cycle among valid states is exactly a feasible periodic
/// schedule: a vertex left unvisited would see its counter strictly
/// decrease and the state could not repeat. Searches start from every robot
/// placement with all counters full, which dominates the true state of any
/// feasible schedule at the same phase; such a schedule of period P closes
/// a cycle within 2P steps, so a depth limit of 2 * horizon covers every
/// schedule with period at most `horizon`.
class JointSearch {
 public:
  static constexpr std::size_t kMaxRobots = kOracleMaxRobots;
  static constexpr std::size_t kMaxVertices = kOracleMaxVertices;

  struct Pos {
    std::uint8_t target = 0;
    std::uint8_t residual = 0;
    friend bool operator==(const Pos&, const Pos&) = default;
    friend auto operator<=>(const Pos&, const Pos&) = default;
  };

  struct State {
    std::array<Pos, kMaxRobots> robots{};
    std::array<std::uint8_t, kMaxVertices> slack{};
    friend bool operator==(const State&, const State&) = default;
  };

  struct StateHash {
    std::size_t operator()(const State& s) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      auto mix = [&](std::uint8_t b) {
        h ^= b;
        h *= 1099511628211ULL;
      };
      for (const auto& p : s.robots) {
        mix(p.target);
        mix(p.residual);
      }
      for (auto b : s.slack) mix(b);
      return static_cast<std::size_t>(h);
    }
  };

  JointSearch(std::vector<std::vector<int>> dist, std::vector<int> r, int robots, int depth_limit)
      : d_(std::move(dist)), r_(std::move(r)), n_(static_cast<int>(r_.size())), k_(robots), limit_(depth_limit) {}

  /// Finds a cycle; on success returns per-robot position trajectories over
  /// one full period (robot identities followed through permutations).
  std::optional<std::vector<std::vector<Pos>>> run() {
    std::vector<Pos> places;
    for (int v = 0; v < n_; ++v) {
      places.push_back({static_cast<std::uint8_t>(v), 0});
      int longest = 0;
      for (int u = 0; u < n_; ++u) longest = std::max(longest, d_[u][v]);
      for (int res = 1; res < longest; ++res) {
        places.push_back({static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(res)});
      }
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(k_), 0);
    while (true) {
      State s{};
      for (int i = 0; i < k_; ++i) s.robots[static_cast<std::size_t>(i)] = places[idx[static_cast<std::size_t>(i)]];
      for (int v = 0; v < n_; ++v) s.slack[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(r_[static_cast<std::size_t>(v)]);
      if (!dead_.count(s)) {
        if (dfs(s, 0) == Outcome::kFound) return unroll();
      }
      // next nondecreasing index tuple
      int i = k_ - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] + 1 == places.size()) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k_; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(i)];
    }
    return std::nullopt;
  }

  std::size_t expanded() const { return expanded_; }

 private:
  enum class Outcome { kFound, kDead, kTruncated };

  struct Frame {
    State state;
    std::array<std::uint8_t, kMaxRobots> perm{};  // robot i of this state -> index in the next
  };

  Outcome dfs(const State& s, int depth) {
    if (depth >= limit_) return Outcome::kTruncated;
    ++expanded_;
    on_path_.emplace(s, path_.size());
    path_.push_back({s, {}});

    bool truncated = false;
    std::unordered_set<State, StateHash> tried;
    std::array<std::uint8_t, kMaxRobots> choice{};
    Outcome result = Outcome::kDead;

    // Each robot at a vertex may stay (choice 0) or leave for vertex c-1.
    auto options = [&](int i) {
      return s.robots[static_cast<std::size_t>(i)].residual == 0 ? n_ + 1 : 1;
    };
    bool more = true;
    while (more) {
      State next{};
      std::array<std::uint8_t, kMaxRobots> perm{};
      if (successor(s, choice, next, perm) && tried.insert(next).second) {
        if (auto it = on_path_.find(next); it != on_path_.end()) {
          path_.back().perm = perm;
          cycle_start_ = it->second;
          result = Outcome::kFound;
          break;
        }
        if (!dead_.count(next)) {
          path_.back().perm = perm;
          const Outcome o = dfs(next, depth + 1);
          if (o == Outcome::kFound) {
            result = o;
            break;
          }
          truncated = truncated || o == Outcome::kTruncated;
        }
      }
      // advance the mixed-radix choice counter
      more = false;
      for (int i = 0; i < k_; ++i) {
        auto& c = choice[static_cast<std::size_t>(i)];
        if (++c < options(i)) {
          more = true;
          break;
        }
        c = 0;
      }
    }

    if (result == Outcome::kFound) return result;
    on_path_.erase(s);
    path_.pop_back();
    if (truncated) return Outcome::kTruncated;
    dead_.insert(s);
    return Outcome::kDead;
  }

  bool successor(const State& s, const std::array<std::uint8_t, kMaxRobots>& choice, State& next,
                 std::array<std::uint8_t, kMaxRobots>& perm) const {
    std::array<std::pair<Pos, std::uint8_t>, kMaxRobots> moved{};
    for (int i = 0; i < k_; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Pos p = s.robots[ui];
      Pos q = p;
      if (p.residual > 0) {
        q.residual = static_cast<std::uint8_t>(p.residual - 1);
      } else if (choice[ui] > 0) {
        const int to = choice[ui] - 1;
        if (to == p.target) return false;
        q.target = static_cast<std::uint8_t>(to);
        q.residual = static_cast<std::uint8_t>(d_[p.target][static_cast<std::size_t>(to)] - 1);
      }
      moved[ui] = {q, static_cast<std::uint8_t>(i)};
    }
    std::sort(moved.begin(), moved.begin() + k_);
    for (int i = 0; i < k_; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      next.robots[ui] = moved[ui].first;
      perm[moved[ui].second] = static_cast<std::uint8_t>(i);
    }
    for (int v = 0; v < n_; ++v) {
      const auto uv = static_cast<std::size_t>(v);
      if (s.slack[uv] == 0) return false;
      next.slack[uv] = static_cast<std::uint8_t>(s.slack[uv] - 1);
    }
    for (int i = 0; i < k_; ++i) {
      const Pos& p = next.robots[static_cast<std::size_t>(i)];
      if (p.residual == 0) next.slack[p.target] = static_cast<std::uint8_t>(r_[p.target]);
    }
    return true;
  }

  std::vector<std::vector<Pos>> unroll() const {
    const std::size_t len = path_.size() - cycle_start_;
    std::vector<std::vector<Pos>> traj(static_cast<std::size_t>(k_));
    for (int r = 0; r < k_; ++r) {
      std::size_t at = static_cast<std::size_t>(r);
      std::size_t t = 0;
      do {
        const Frame& f = path_[cycle_start_ + t % len];
        traj[static_cast<std::size_t>(r)].push_back(f.state.robots[at]);
        at = f.perm[at];
        ++t;
      } while (!(t % len == 0 && at == static_cast<std::size_t>(r)));
    }
    return traj;
  }

  std::vector<std::vector<int>> d_;
  std::vector<int> r_;
  int n_;
  int k_;
  int limit_;
  std::size_t expanded_ = 0;
  std::vector<Frame> path_;
  std::size_t cycle_start_ = 0;
  std::unordered_map<State, std::size_t, StateHash> on_path_;
  std::unordered_set<State, StateHash> dead_;
};

/// Turns a robot's per-step positions over one period into a timed walk.
inline TimedWalk trajectory_to_walk(const std::vector<JointSearch::Pos>& traj,
                                    const std::vector<std::vector<int>>& d, const Time& unit) {
  const std::size_t p = traj.size();
  auto at_vertex = [&](std::size_t t) { return traj[t % p].residual == 0; };
  std::vector<std::size_t> arrivals;
  for (std::size_t t = 0; t < p; ++t) {
    const auto& prev = traj[(t + p - 1) % p];
    if (at_vertex(t) && !(prev.residual == 0 && prev.target == traj[t].target)) arrivals.push_back(t);
  }
  if (arrivals.empty()) return TimedWalk::parked(traj.front().target);

  std::vector<Step> steps;
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    const std::size_t t0 = arrivals[k];
    std::size_t dep = t0;
    while (at_vertex(dep + 1) && traj[(dep + 1) % p].target == traj[t0].target) ++dep;
    const std::size_t next = k + 1 < arrivals.size() ? arrivals[k + 1] : arrivals.front() + p;
    const int v = traj[t0].target;
    const int w = traj[next % p].target;
    if (next - dep != static_cast<std::size_t>(d[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)])) {
      throw std::logic_error("oracle: trajectory travel time disagrees with the metric");
    }
    steps.push_back({v, unit * Rational(static_cast<Rational::int_type>(dep - t0))});
  }
  const auto phase = static_cast<Rational::int_type>((p - arrivals.front()) % p);
  return TimedWalk(std::move(steps), unit * Rational(phase));
}

}  // namespace detail

/// Decides whether `robots` robots can meet every latency constraint with a
/// schedule whose period is at most `horizon` grid steps (the grid being the
/// largest common divisor of all instance times). A `false` verdict only
/// rules out schedules up to that period; a found schedule may be longer.
inline DecisionResult exact_decision(const Instance& inst, int robots, int horizon = kOracleHorizonCap) {
  if (inst.size() > kOracleMaxVertices) throw InstanceTooLarge("oracle: at most 6 vertices");
  if (robots > kOracleMaxRobots) throw InstanceTooLarge("oracle: at most 3 robots");
  if (horizon > kOracleHorizonCap) throw InstanceTooLarge("oracle: horizon above the cap of 64 steps");
  if (robots < 1 || horizon < 1) throw std::invalid_argument("oracle: robots and horizon must be positive");
  if (!validate_instance(inst)) throw std::invalid_argument("oracle: invalid instance");

  const Time unit = inst.time_grid();
  const int n = inst.size();
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<int> r(static_cast<std::size_t>(n));
  auto grid_steps = [&](const Time& t) {
    const Rational q = t / unit;
    if (!q.is_integer() || q.num() > 255) throw InstanceTooLarge("oracle: times exceed 255 grid steps");
    return static_cast<int>(q.num());
  };
  for (int u = 0; u < n; ++u) {
    r[static_cast<std::size_t>(u)] = grid_steps(inst.r(u));
    for (int v = 0; v < n; ++v) d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = grid_steps(inst.dist(u, v));
  }

  detail::JointSearch search(d, r, robots, 2 * horizon);
  DecisionResult out;
  auto traj = search.run();
  out.states_expanded = search.expanded();
  if (!traj) return out;

  Solution sol;
  for (const auto& t : *traj) sol.walks.push_back(detail::trajectory_to_walk(t, d, unit));
  if (!verify(sol, inst).feasible) throw std::logic_error("oracle: reconstructed schedule fails verification");
  out.feasible = true;
  out.solution = std::move(sol);
  return out;
}

/// Smallest robot count with a schedule of period at most `horizon`.
/// |V| robots parked one per vertex always work.
inline int exact_min_robots(const Instance& inst, int horizon = kOracleHorizonCap) {
  if (inst.size() > kOracleMaxVertices) throw InstanceTooLarge("oracle: at most 6 vertices");
  const int n = inst.size();
  for (int k = 1; k < n; ++k) {
    if (k > kOracleMaxRobots) throw InstanceTooLarge("oracle: optimum needs more than 3 robots");
    if (exact_decision(inst, k, horizon).feasible) return k;
  }
  return n;
}

}  // namespace patrol
