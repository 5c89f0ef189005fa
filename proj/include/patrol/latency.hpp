#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patrol/instance.hpp"
#include "patrol/walk.hpp"

namespace patrol {

class EmptySolution : public Error {
 public:
  EmptySolution() : Error("solution has no walks") {}
};

class InvalidWalk : public Error {
 public:
  using Error::Error;
};

struct VisitInterval {
  Time arrival;
  Time departure;

  friend bool operator==(const VisitInterval&, const VisitInterval&) = default;
};

/// Steady-state visits per vertex over one hyper-period.
///
/// Each vertex uses the hyper-period of the walks that visit it (the lcm of
/// their periods); the circular gap structure is the same as over the lcm
/// of all walk periods. Arrivals lie in [0, H); a departure may exceed H
/// when the visit wraps. Overlapping visits by different robots are merged.
struct VisitSchedule {
  struct PerVertex {
    Time hyper_period;
    bool always_occupied = false;
    std::vector<VisitInterval> visits;
  };
  std::vector<PerVertex> vertices;
};

namespace detail {

inline void check_walk(const TimedWalk& w, const Instance& inst, const Time& period) {
  if (w.empty()) throw InvalidWalk("walk has no steps");
  for (const auto& s : w.steps()) {
    if (!inst.contains(s.vertex)) {
      throw VertexOutOfRange("walk visits vertex " + std::to_string(s.vertex) +
                             " outside the instance");
    }
    if (s.hold.sign() < 0) throw InvalidWalk("negative hold time");
  }
  if (w.offset().sign() < 0 || (period.sign() > 0 && w.offset() >= period) ||
      (period.is_zero() && !w.offset().is_zero())) {
    throw InvalidWalk("walk offset " + w.offset().str() + " outside [0, period)");
  }
}

inline std::vector<VisitInterval> merge_circular(std::vector<VisitInterval> v) {
  std::sort(v.begin(), v.end(), [](const VisitInterval& a, const VisitInterval& b) {
    return a.arrival < b.arrival || (a.arrival == b.arrival && a.departure > b.departure);
  });
  std::vector<VisitInterval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.arrival <= out.back().departure) {
      if (iv.departure > out.back().departure) out.back().departure = iv.departure;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace detail

inline constexpr Rational::int_type kMaxHyperPeriodCopies = 1'000'000;

inline VisitSchedule build_visit_schedule(const Solution& sol, const Instance& inst) {
  if (sol.walks.empty()) throw EmptySolution();
  const int n = inst.size();

  std::vector<Time> periods;
  periods.reserve(sol.walks.size());
  for (const auto& w : sol.walks) {
    periods.push_back(w.period(inst));
    detail::check_walk(w, inst, periods.back());
  }

  VisitSchedule sched;
  sched.vertices.resize(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < sol.walks.size(); ++k) {
    for (Vertex v : sol.walks[k].vertices()) {
      auto& pv = sched.vertices[static_cast<std::size_t>(v)];
      if (periods[k].is_zero()) {
        pv.always_occupied = true;
      } else {
        pv.hyper_period = pv.hyper_period.is_zero() ? periods[k] : lcm(pv.hyper_period, periods[k]);
      }
    }
  }

  for (std::size_t k = 0; k < sol.walks.size(); ++k) {
    const auto& w = sol.walks[k];
    const Time& period = periods[k];
    if (period.is_zero()) continue;
    Time phase(0);
    const auto& steps = w.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const Vertex v = steps[i].vertex;
      auto& pv = sched.vertices[static_cast<std::size_t>(v)];
      const Rational copies = pv.hyper_period / period;
      if (!copies.is_integer() || copies.num() > kMaxHyperPeriodCopies) {
        throw std::overflow_error("hyper-period at vertex " + inst.vertex_name(v) +
                                  " is too large to enumerate");
      }
      const Time start = mod(phase - w.offset(), period);
      for (Rational::int_type c = 0; c < copies.num(); ++c) {
        const Time a = start + period * Rational(c);
        pv.visits.push_back({a, a + steps[i].hold});
      }
      phase += steps[i].hold + inst.dist(v, steps[(i + 1) % steps.size()].vertex);
    }
  }

  for (auto& pv : sched.vertices) pv.visits = detail::merge_circular(std::move(pv.visits));
  return sched;
}

/// Per-vertex latency with the constraint check folded in.
struct LatencyReport {
  std::vector<std::optional<Time>> latency;  // nullopt: never visited
  std::vector<Time> constraint;
  std::vector<bool> vertex_feasible;
  bool feasible = false;

  std::size_t size() const { return latency.size(); }

  /// Vertices that are unvisited or over their constraint.
  std::vector<Vertex> violations() const {
    std::vector<Vertex> out;
    for (std::size_t v = 0; v < vertex_feasible.size(); ++v) {
      if (!vertex_feasible[v]) out.push_back(static_cast<Vertex>(v));
    }
    return out;
  }

  /// max over visited v of latency(v) / r(v).
  Rational worst_ratio() const {
    Rational worst(0);
    for (std::size_t v = 0; v < latency.size(); ++v) {
      if (latency[v] && constraint[v].sign() > 0) {
        worst = std::max(worst, *latency[v] / constraint[v]);
      }
    }
    return worst;
  }
};

/// Largest departure-to-next-arrival gap of one vertex over its circular
/// schedule.
inline std::optional<Time> vertex_latency(const VisitSchedule::PerVertex& pv) {
  if (pv.always_occupied) return Time(0);
  if (pv.visits.empty()) return std::nullopt;
  Time last_departure = pv.visits.front().departure;
  for (const auto& iv : pv.visits) last_departure = std::max(last_departure, iv.departure);
  Time running = last_departure - pv.hyper_period;  // carried over from the previous lap
  Time worst(0);
  for (const auto& iv : pv.visits) {
    worst = std::max(worst, iv.arrival - running);
    running = std::max(running, iv.departure);
  }
  return worst;
}

/// Steady-state latency of every vertex under the periodic schedule of
/// `sol`. Throws EmptySolution, VertexOutOfRange or InvalidWalk.
inline LatencyReport evaluate_latencies(const Solution& sol, const Instance& inst) {
  const VisitSchedule sched = build_visit_schedule(sol, inst);
  LatencyReport rep;
  const auto n = static_cast<std::size_t>(inst.size());
  rep.latency.resize(n);
  rep.constraint = inst.latency_constraints();
  rep.vertex_feasible.assign(n, false);
  rep.feasible = true;
  for (std::size_t v = 0; v < n; ++v) {
    rep.latency[v] = vertex_latency(sched.vertices[v]);
    rep.vertex_feasible[v] = rep.latency[v].has_value() && *rep.latency[v] <= rep.constraint[v];
    rep.feasible = rep.feasible && rep.vertex_feasible[v];
  }
  return rep;
}

/// Checks a solution against every latency constraint; the report's
/// `feasible` flag is the verdict.
inline LatencyReport verify(const Solution& sol, const Instance& inst) {
  return evaluate_latencies(sol, inst);
}

/// Time-to-expiry bookkeeping for a single robot.
///
/// s(v) = r(v) - (time since the robot last left v); starting a walk counts
/// as a visit to every vertex. Entries are evaluated lazily so a step costs
/// O(1) regardless of the number of vertices.
class ExpiryState {
 public:
  ExpiryState(const Instance& inst, Vertex start)
      : inst_(&inst), refreshed_(static_cast<std::size_t>(inst.size()), Time(0)), current_(start) {}

  Vertex current() const { return current_; }
  const Time& elapsed() const { return elapsed_; }

  Time slack(Vertex v) const {
    return inst_->r(v) - (elapsed_ - refreshed_[static_cast<std::size_t>(v)]);
  }

  std::vector<Time> slacks() const {
    std::vector<Time> out;
    out.reserve(refreshed_.size());
    for (std::size_t v = 0; v < refreshed_.size(); ++v) out.push_back(slack(static_cast<Vertex>(v)));
    return out;
  }

  /// Stay at the current vertex.
  void hold(const Time& t) {
    elapsed_ += t;
    refreshed_[static_cast<std::size_t>(current_)] = elapsed_;
  }

  /// Travel to `v`, taking `travel` time (defaults to the metric distance).
  void move_to(Vertex v, std::optional<Time> travel = std::nullopt) {
    elapsed_ += travel ? *travel : inst_->dist(current_, v);
    current_ = v;
    refreshed_[static_cast<std::size_t>(v)] = elapsed_;
  }

 private:
  const Instance* inst_;
  std::vector<Time> refreshed_;
  Time elapsed_;
  Vertex current_;
};

/// One step of a walk with an explicit arrival leg: the robot arrives at
/// `vertex` after `travel` time since its previous departure, then holds.
struct Leg {
  Vertex vertex = 0;
  Time travel;
  Time hold;
};

/// Feasibility of the periodic repetition of `legs` on the vertices it
/// visits. legs[0].travel is the closing leg from the last vertex.
///
/// Simulates two laps starting from the optimistic state s = r; every gap
/// of the steady state shows up in the second lap, and the first lap's gaps
/// are never longer than the true ones.
inline bool periodic_feasible_legs(const Instance& inst, std::span<const Leg> legs) {
  if (legs.empty()) return true;
  std::vector<Time> last_departure(static_cast<std::size_t>(inst.size()), Time(0));
  Time now(0);
  const std::size_t k = legs.size();
  for (std::size_t i = 0; i < 2 * k; ++i) {
    const Leg& leg = legs[i % k];
    auto& dep = last_departure[static_cast<std::size_t>(leg.vertex)];
    if (i > 0) {
      now += leg.travel;
      if (now - dep > inst.r(leg.vertex)) return false;
    }
    now += leg.hold;
    dep = now;
  }
  return true;
}

inline std::vector<Leg> legs_of(const TimedWalk& w, const Instance& inst) {
  std::vector<Leg> legs;
  const auto& steps = w.steps();
  legs.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Vertex prev = steps[(i + steps.size() - 1) % steps.size()].vertex;
    legs.push_back({steps[i].vertex, inst.dist(prev, steps[i].vertex), steps[i].hold});
  }
  return legs;
}

/// True iff the periodic walk meets r(v) for every vertex it visits.
inline bool periodic_feasibility(const TimedWalk& w, const Instance& inst) {
  for (const auto& s : w.steps()) {
    if (!inst.contains(s.vertex)) throw VertexOutOfRange("walk vertex outside instance");
  }
  const auto legs = legs_of(w, inst);
  return periodic_feasible_legs(inst, legs);
}

}  // namespace patrol
