#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "patrol/instance.hpp"
#include "patrol/latency.hpp"
#include "patrol/subroutines.hpp"
#include "patrol/walk.hpp"

namespace patrol {

class UnvisitedVertex : public Error {
 public:
  using Error::Error;
};

class NoFeasibleR : public Error {
 public:
  using Error::Error;
};

/// Geometry plus positive vertex weights normalized to max 1.
class WeightedInstance {
 public:
  WeightedInstance(Instance base, std::vector<Rational> weights) : base_(std::move(base)) {
    if (static_cast<int>(weights.size()) != base_.size() || weights.empty()) {
      throw std::invalid_argument("weighted instance: one weight per vertex required");
    }
    Rational top = weights.front();
    for (const auto& w : weights) {
      if (w.sign() <= 0) throw std::invalid_argument("weighted instance: weights must be positive");
      top = std::max(top, w);
    }
    for (auto& w : weights) w /= top;
    phi_ = std::move(weights);
  }

  /// phi(v) = r_min / r(v): the weighting under which a solution meets
  /// every r(v) exactly when its weighted cost is at most r_min.
  static WeightedInstance from_constraints(const Instance& inst) {
    std::vector<Rational> w;
    const Time r_min = inst.r_min();
    for (Vertex v = 0; v < inst.size(); ++v) w.push_back(r_min / inst.r(v));
    return WeightedInstance(inst, std::move(w));
  }

  const Instance& base() const { return base_; }
  int size() const { return base_.size(); }
  const Rational& phi(Vertex v) const { return phi_.at(static_cast<std::size_t>(v)); }
  const std::vector<Rational>& weights() const { return phi_; }

  /// max phi / min phi, plus one when that is an exact power of two.
  Rational rho() const {
    Rational lo = phi_.front();
    for (const auto& w : phi_) lo = std::min(lo, w);
    return adjusted_ratio(Rational(1) / lo);
  }

  /// Number of weight classes, ceil(log2 rho).
  int class_count() const { return ceil_log2(rho()); }

  /// Class i (1-based) holds weights in (2^-i, 2^-(i-1)].
  int weight_class(Vertex v) const { return floor_log2(Rational(1) / phi(v)) + 1; }

 private:
  Instance base_;
  std::vector<Rational> phi_;
};

/// max_v phi(v) * L(sol, v). Throws UnvisitedVertex if some vertex is never
/// visited.
inline Rational weighted_cost(const Solution& sol, const WeightedInstance& winst) {
  const LatencyReport rep = evaluate_latencies(sol, winst.base());
  Rational cost(0);
  for (Vertex v = 0; v < winst.size(); ++v) {
    const auto& lat = rep.latency[static_cast<std::size_t>(v)];
    if (!lat) throw UnvisitedVertex("vertex " + winst.base().vertex_name(v) + " is never visited");
    cost = std::max(cost, winst.phi(v) * *lat);
  }
  return cost;
}

/// Single-robot walk over a vertex subset, minimizing max weighted latency.
using OneRobotStrategy = std::function<TimedWalk(const WeightedInstance&, std::span<const Vertex>)>;

/// Default single-robot walk: one TSP tour per weight class, with class i
/// toured 2^(i_max - i) times per period, interleaved round-robin so the
/// heavier classes come around more often. No approximation guarantee is
/// claimed for it.
inline TimedWalk min_max_one_robot(const WeightedInstance& winst, std::span<const Vertex> subset) {
  if (subset.empty()) throw std::invalid_argument("min_max_one_robot: empty subset");
  std::vector<std::pair<int, std::vector<Vertex>>> classes;  // (class, members)
  std::vector<Vertex> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (Vertex v : sorted) {
    const int c = winst.weight_class(v);
    auto it = std::find_if(classes.begin(), classes.end(), [c](const auto& e) { return e.first == c; });
    if (it == classes.end()) {
      classes.push_back({c, {v}});
    } else {
      it->second.push_back(v);
    }
  }
  std::sort(classes.begin(), classes.end());
  const int lo = classes.front().first;
  const int hi = classes.back().first;
  if (hi - lo > 20) throw std::length_error("min_max_one_robot: weight spread too large");

  std::vector<std::vector<Vertex>> tours;
  for (const auto& [c, members] : classes) tours.push_back(tsp_tour(winst.base(), members).vertices);

  std::vector<Vertex> seq;
  const long rounds = 1L << (hi - lo);
  for (long t = 0; t < rounds; ++t) {
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const long every = 1L << (classes[k].first - lo);
      if (t % every != 0) continue;
      for (Vertex v : tours[k]) {
        if (seq.empty() || seq.back() != v) seq.push_back(v);
      }
    }
  }
  while (seq.size() > 1 && seq.back() == seq.front()) seq.pop_back();
  return TimedWalk::simple(seq);
}

/// Smallest integer m with m >= (j / R) * log2(rho), computed exactly.
inline int ceil_scaled_log2(const Rational& rho, int j, int robots) {
  using boost::multiprecision::cpp_int;
  if (j == 0) return 0;
  const cpp_int p = boost::multiprecision::pow(cpp_int(rho.num()), static_cast<unsigned>(j));
  const cpp_int q = boost::multiprecision::pow(cpp_int(rho.den()), static_cast<unsigned>(j));
  int m = 0;
  while ((cpp_int(1) << (m * robots)) * q < p) ++m;
  return m;
}

/// Inclusive weight-class ranges [first, last] handed to each robot when
/// there are fewer robots than log2(rho).
inline std::vector<std::pair<int, int>> weight_blocks(const Rational& rho, int robots) {
  std::vector<std::pair<int, int>> blocks;
  for (int j = 1; j <= robots; ++j) {
    blocks.emplace_back(ceil_scaled_log2(rho, j - 1, robots) + 1, ceil_scaled_log2(rho, j, robots));
  }
  return blocks;
}

/// True iff R < log2(rho).
inline bool fewer_robots_than_log_rho(const Rational& rho, int robots) {
  Rational p(1);
  for (int i = 0; i < robots && p < rho; ++i) p *= 2;
  return p < rho;
}

/// Robot counts per weight class for the many-robot case: one robot per
/// nonempty class, then every further robot joins the class with the highest
/// cost under its current count. The result is never worse than floor(R / K)
/// robots per class, and adding a robot never raises the maximum cost.
inline std::vector<int> class_robot_counts(const std::vector<Cycle>& tours,
                                           const std::vector<Rational>& heaviest, int robots) {
  const int k = static_cast<int>(tours.size());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  int left = robots;
  for (std::size_t i = 0; i < tours.size(); ++i) {
    if (tours[i].vertices.empty()) continue;
    counts[i] = 1;
    --left;
  }
  if (left < 0) throw std::invalid_argument("class_robot_counts: fewer robots than nonempty classes");
  for (; left > 0; --left) {
    int arg = -1;
    Rational worst(0);
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (tours[ui].vertices.empty()) continue;
      const Rational cost = heaviest[ui] * tours[ui].length / Rational(counts[ui]);
      if (arg < 0 || cost > worst) {
        arg = i;
        worst = cost;
      }
    }
    ++counts[static_cast<std::size_t>(arg)];
  }
  return counts;
}

/// R walks (at most) minimizing the maximum weighted latency.
///
/// With R < log2(rho) the weight classes are split into R contiguous blocks
/// and each block gets one walk from `one_robot`. Otherwise the robots are
/// shared among the classes by class_robot_counts and equally spaced on each
/// class's TSP tour. When R is at
/// least log2(rho) but smaller than the class count K, the block split is
/// used. Blocks or classes without vertices produce no walk.
inline Solution latency_walks(const WeightedInstance& winst, int robots,
                              const OneRobotStrategy& one_robot = min_max_one_robot) {
  if (robots < 1) throw std::invalid_argument("latency_walks: need at least one robot");
  const Rational rho = winst.rho();
  const int k = winst.class_count();
  std::vector<std::vector<Vertex>> members(static_cast<std::size_t>(k));
  for (Vertex v = 0; v < winst.size(); ++v) {
    members.at(static_cast<std::size_t>(winst.weight_class(v) - 1)).push_back(v);
  }

  Solution sol;
  if (fewer_robots_than_log_rho(rho, robots) || robots / k == 0) {
    for (const auto& [first, last] : weight_blocks(rho, robots)) {
      std::vector<Vertex> subset;
      for (int i = first; i <= last && i <= k; ++i) {
        const auto& m = members[static_cast<std::size_t>(i - 1)];
        subset.insert(subset.end(), m.begin(), m.end());
      }
      if (!subset.empty()) sol.walks.push_back(one_robot(winst, subset));
    }
    return sol;
  }

  std::vector<Cycle> tours(static_cast<std::size_t>(k));
  std::vector<Rational> heaviest(static_cast<std::size_t>(k), Rational(0));
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].empty()) continue;
    tours[i] = tsp_tour(winst.base(), members[i]);
    for (Vertex v : members[i]) heaviest[i] = std::max(heaviest[i], winst.phi(v));
  }
  const auto counts = class_robot_counts(tours, heaviest, robots);
  for (std::size_t i = 0; i < tours.size(); ++i) {
    if (tours[i].vertices.empty()) continue;
    for (auto& w : equally_place(tours[i], counts[i])) sol.walks.push_back(std::move(w));
  }
  return sol;
}

struct BicriterionResult {
  /// R handed to latency_walks; the solution may hold fewer walks.
  int robots = 0;
  Solution solution;
  /// max_v L(v) / r(v) achieved by `solution`.
  Rational achieved_factor;
  /// True when no latency_walks output met the relaxed constraints and the
  /// one-parked-robot-per-vertex solution was returned instead.
  bool parked_fallback = false;
};

/// Fewest robots for which latency_walks meets every constraint relaxed by
/// `alpha`, i.e. weighted cost <= alpha * r_min under phi = r_min / r.
///
/// Robot counts below log2(rho) are scanned linearly (cost need not be
/// monotone there); from log2(rho) up to |V| a binary search is used.
inline BicriterionResult bicriterion_min_robots(const Instance& inst, const Rational& alpha,
                                                const OneRobotStrategy& one_robot = min_max_one_robot) {
  if (alpha.sign() <= 0) throw std::invalid_argument("bicriterion: alpha must be positive");
  if (!validate_instance(inst)) throw std::invalid_argument("bicriterion: invalid instance");
  const WeightedInstance winst = WeightedInstance::from_constraints(inst);
  const Rational threshold = alpha * inst.r_min();
  const int n = inst.size();

  auto attempt = [&](int r) -> std::optional<Solution> {
    Solution s = latency_walks(winst, r, one_robot);
    if (weighted_cost(s, winst) <= threshold) return s;
    return std::nullopt;
  };
  auto finish = [&](int r, Solution s, bool fallback) {
    BicriterionResult res;
    res.robots = r;
    res.achieved_factor = verify(s, inst).worst_ratio();
    res.solution = std::move(s);
    res.parked_fallback = fallback;
    return res;
  };

  const Rational rho = winst.rho();
  int r = 1;
  for (; r <= n && fewer_robots_than_log_rho(rho, r); ++r) {
    if (auto s = attempt(r)) return finish(r, std::move(*s), false);
  }
  if (r <= n) {
    if (auto top = attempt(n)) {
      int lo = r;
      int hi = n;
      Solution best = std::move(*top);
      while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (auto s = attempt(mid)) {
          hi = mid;
          best = std::move(*s);
        } else {
          lo = mid + 1;
        }
      }
      return finish(hi, std::move(best), false);
    }
  }

  Solution parked;
  for (Vertex v = 0; v < n; ++v) parked.walks.push_back(TimedWalk::parked(v));
  if (weighted_cost(parked, winst) > threshold) throw NoFeasibleR("bicriterion: no robot count works");
  return finish(n, std::move(parked), true);
}

}  // namespace patrol
