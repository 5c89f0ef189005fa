#pragma once

#include <vector>

#include "patrol/instance.hpp"
#include "patrol/subroutines.hpp"
#include "patrol/walk.hpp"

namespace patrol {

/// Vertices grouped by latency constraint: class i (1-based) holds every v
/// with r_min * 2^(i-1) <= r(v) < r_min * 2^i.
struct LatencyPartition {
  std::vector<std::vector<Vertex>> classes;  // classes[i-1] is class i; may be empty
  std::vector<int> class_of;                 // per vertex, 1-based
  std::vector<Time> relaxed;                 // per vertex, r_min * 2^class
  Time r_min;

  int count() const { return static_cast<int>(classes.size()); }

  /// Cycle length budget handed to the cycle cover for class i.
  Time cycle_budget(int i) const { return r_min * Rational(Rational::int_type{1} << (i + 1)); }
};

inline LatencyPartition partition_by_latency(const Instance& inst) {
  LatencyPartition p;
  p.r_min = inst.r_min();
  p.classes.resize(static_cast<std::size_t>(ceil_log2(inst.rho())));
  for (Vertex v = 0; v < inst.size(); ++v) {
    const int cls = floor_log2(inst.r(v) / p.r_min) + 1;
    p.class_of.push_back(cls);
    p.relaxed.push_back(p.r_min * Rational(Rational::int_type{1} << cls));
    p.classes.at(static_cast<std::size_t>(cls - 1)).push_back(v);
  }
  return p;
}

/// Robots needed on a cycle so that equal spacing meets the tightest
/// constraint among its vertices.
inline int robots_for_cycle(const Instance& inst, const Cycle& c) {
  Time tightest = inst.r(c.vertices.front());
  for (Vertex v : c.vertices) tightest = std::min(tightest, inst.r(v));
  const auto k = (c.length / tightest).ceil();
  return k < 1 ? 1 : static_cast<int>(k);
}

/// How one latency class was covered.
struct ClassPlan {
  int class_index = 0;
  bool used_cycle_cover = false;
  std::vector<Cycle> cycles;
  std::vector<int> robots;  // per cycle

  int total_robots() const {
    int t = 0;
    for (int k : robots) t += k;
    return t;
  }
};

/// Per class: cover with bounded-length cycles, or one TSP tour, whichever
/// needs fewer equally spaced robots (the cycle cover wins ties).
inline std::vector<ClassPlan> plan_approx(const Instance& inst) {
  const LatencyPartition part = partition_by_latency(inst);
  std::vector<ClassPlan> plans;
  for (int i = 1; i <= part.count(); ++i) {
    const auto& cls = part.classes[static_cast<std::size_t>(i - 1)];
    if (cls.empty()) continue;

    ClassPlan cover{i, true, mccp(inst, cls, part.cycle_budget(i)), {}};
    for (const auto& c : cover.cycles) cover.robots.push_back(robots_for_cycle(inst, c));

    ClassPlan tour{i, false, {tsp_tour(inst, cls)}, {}};
    tour.robots.push_back(robots_for_cycle(inst, tour.cycles.front()));

    plans.push_back(tour.total_robots() < cover.total_robots() ? std::move(tour) : std::move(cover));
  }
  return plans;
}

/// Latency-class approximation: within each class, robots equally spaced on
/// cycles. The result is partitioned and meets every constraint.
inline Solution solve_approx(const Instance& inst) {
  Solution sol;
  for (const auto& plan : plan_approx(inst)) {
    for (std::size_t c = 0; c < plan.cycles.size(); ++c) {
      for (auto& w : equally_place(plan.cycles[c], plan.robots[c])) sol.walks.push_back(std::move(w));
    }
  }
  return sol;
}

/// Upper bound on solve_approx's robot count relative to the optimum:
/// 4 * kMccpFactor * ceil(log2 rho).
inline int approx_guarantee_factor(const Instance& inst) {
  return 4 * kMccpFactor * ceil_log2(inst.rho());
}

}  // namespace patrol
