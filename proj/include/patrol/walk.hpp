#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "patrol/instance.hpp"

namespace patrol {

struct Step {
  Vertex vertex = 0;
  Time hold;

  friend bool operator==(const Step&, const Step&) = default;
};

/// A periodic timed walk: the robot cycles through `steps` forever,
/// holding at each vertex and then travelling the metric distance to the
/// next one (the last step wraps to the first).
///
/// `offset` is the phase of the walk at time 0: the robot's position at
/// time t is its position at t + offset along the repeated walk, where
/// phase 0 is the arrival at the first step.
class TimedWalk {
 public:
  TimedWalk() = default;
  explicit TimedWalk(std::vector<Step> steps, Time offset = Time(0))
      : steps_(std::move(steps)), offset_(offset) {}

  /// Walk with zero holds.
  static TimedWalk simple(std::span<const Vertex> vertices, Time offset = Time(0)) {
    std::vector<Step> steps;
    steps.reserve(vertices.size());
    for (Vertex v : vertices) steps.push_back({v, Time(0)});
    return TimedWalk(std::move(steps), offset);
  }

  static TimedWalk parked(Vertex v) { return TimedWalk({{v, Time(0)}}); }

  const std::vector<Step>& steps() const { return steps_; }
  std::vector<Step>& steps() { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  const Time& offset() const { return offset_; }
  void set_offset(Time offset) { offset_ = offset; }

  /// Cyclic length: travel including the closing leg plus all holds.
  Time period(const Instance& inst) const {
    Time total(0);
    const std::size_t k = steps_.size();
    for (std::size_t i = 0; i < k; ++i) {
      total += steps_[i].hold;
      total += inst.dist(steps_[i].vertex, steps_[(i + 1) % k].vertex);
    }
    return total;
  }

  /// Travel time from the first vertex to the last one plus holds, without
  /// the closing leg.
  Time open_length(const Instance& inst) const {
    Time total(0);
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      total += steps_[i].hold;
      if (i + 1 < steps_.size()) total += inst.dist(steps_[i].vertex, steps_[i + 1].vertex);
    }
    return total;
  }

  std::vector<Vertex> vertex_sequence() const {
    std::vector<Vertex> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.vertex);
    return out;
  }

  /// Distinct vertices, sorted.
  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out = vertex_sequence();
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool visits(Vertex v) const {
    return std::any_of(steps_.begin(), steps_.end(),
                       [v](const Step& s) { return s.vertex == v; });
  }

  TimedWalk scaled(const Rational& factor) const {
    TimedWalk out = *this;
    for (auto& s : out.steps_) s.hold *= factor;
    out.offset_ *= factor;
    return out;
  }

  friend bool operator==(const TimedWalk&, const TimedWalk&) = default;

 private:
  std::vector<Step> steps_;
  Time offset_;
};

/// A set of timed walks sharing a common time origin.
struct Solution {
  std::vector<TimedWalk> walks;

  std::size_t robots() const { return walks.size(); }

  /// True iff the distinct vertex sets of the walks are pairwise disjoint.
  /// Robots sharing one cycle have equal vertex sets and count as one group.
  bool partitioned() const {
    std::set<std::vector<Vertex>> groups;
    for (const auto& w : walks) groups.insert(w.vertices());
    std::set<Vertex> seen;
    for (const auto& g : groups) {
      for (Vertex v : g) {
        if (!seen.insert(v).second) return false;
      }
    }
    return true;
  }

  /// Sorted set of vertices visited by at least one walk.
  std::vector<Vertex> covered() const {
    std::set<Vertex> seen;
    for (const auto& w : walks) {
      for (Vertex v : w.vertex_sequence()) seen.insert(v);
    }
    return {seen.begin(), seen.end()};
  }

  /// Sum of walk periods.
  Time total_length(const Instance& inst) const {
    Time total(0);
    for (const auto& w : walks) total += w.period(inst);
    return total;
  }

  Solution scaled(const Rational& factor) const {
    Solution out;
    for (const auto& w : walks) out.walks.push_back(w.scaled(factor));
    return out;
  }

  friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace patrol
