#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "patrol/rational.hpp"

namespace patrol {

using Vertex = int;

/// Base class for every error the library reports by exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VertexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Symmetric metric graph with a latency constraint per vertex.
///
/// Construction only checks shapes; metric and positivity properties are
/// reported by validate_instance() so callers can inspect every violation.
class Instance {
 public:
  Instance() = default;

  Instance(std::string name, std::vector<std::string> names,
           std::vector<std::vector<Time>> dist, std::vector<Time> r)
      : name_(std::move(name)),
        names_(std::move(names)),
        dist_(std::move(dist)),
        r_(std::move(r)) {
    const std::size_t n = r_.size();
    if (names_.empty()) {
      for (std::size_t i = 0; i < n; ++i) names_.push_back("v" + std::to_string(i));
    }
    if (names_.size() != n || dist_.size() != n) {
      throw Error("instance: names/dist/r sizes disagree");
    }
    for (const auto& row : dist_) {
      if (row.size() != n) throw Error("instance: dist is not square");
    }
  }

  /// Convenience for unnamed instances.
  Instance(std::vector<std::vector<Time>> dist, std::vector<Time> r)
      : Instance("", {}, std::move(dist), std::move(r)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  int size() const { return static_cast<int>(r_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& vertex_name(Vertex v) const { return names_.at(index(v)); }

  const Time& dist(Vertex u, Vertex v) const { return dist_[index(u)][index(v)]; }
  const std::vector<std::vector<Time>>& dist_matrix() const { return dist_; }

  const Time& r(Vertex v) const { return r_[index(v)]; }
  const std::vector<Time>& latency_constraints() const { return r_; }

  Time r_min() const {
    Time m = r_.at(0);
    for (const auto& x : r_) m = x < m ? x : m;
    return m;
  }

  Time r_max() const {
    Time m = r_.at(0);
    for (const auto& x : r_) m = x > m ? x : m;
    return m;
  }

  /// r_max / r_min, plus one when that ratio is an exact power of two.
  Rational rho() const;

  /// Largest g such that every distance and every r(v) is a multiple of g.
  Time time_grid() const {
    Time g(0);
    for (const auto& row : dist_) {
      for (const auto& d : row) g = gcd(g, d);
    }
    for (const auto& x : r_) g = gcd(g, x);
    return g;
  }

  bool contains(Vertex v) const { return v >= 0 && v < size(); }

  /// Copy with every time multiplied by `factor`.
  Instance scaled(const Rational& factor) const {
    auto dist = dist_;
    for (auto& row : dist) {
      for (auto& d : row) d *= factor;
    }
    auto r = r_;
    for (auto& x : r) x *= factor;
    return Instance(name_, names_, std::move(dist), std::move(r));
  }

  /// Copy with replaced latency constraints.
  Instance with_constraints(std::vector<Time> r) const {
    return Instance(name_, names_, dist_, std::move(r));
  }

  /// Sub-instance on `subset`; vertex i of the result is subset[i].
  Instance induced(std::span<const Vertex> subset) const {
    std::vector<std::string> names;
    std::vector<std::vector<Time>> dist;
    std::vector<Time> r;
    for (Vertex u : subset) {
      names.push_back(vertex_name(u));
      r.push_back(this->r(u));
      auto& row = dist.emplace_back();
      for (Vertex v : subset) row.push_back(this->dist(u, v));
    }
    return Instance(name_, std::move(names), std::move(dist), std::move(r));
  }

 private:
  std::size_t index(Vertex v) const {
    if (!contains(v)) {
      throw VertexOutOfRange("vertex " + std::to_string(v) + " not in instance");
    }
    return static_cast<std::size_t>(v);
  }

  std::string name_;
  std::vector<std::string> names_;
  std::vector<std::vector<Time>> dist_;
  std::vector<Time> r_;
};

/// True iff `q` is 2^k for some integer k (q > 0).
inline bool is_power_of_two(const Rational& q) {
  auto pow2 = [](Rational::int_type x) { return x > 0 && (x & (x - 1)) == 0; };
  return q.sign() > 0 && pow2(q.num()) && pow2(q.den());
}

/// Smallest integer k with 2^k >= q (q > 0).
inline int ceil_log2(const Rational& q) {
  if (q.sign() <= 0) throw std::domain_error("ceil_log2 of nonpositive value");
  int k = 0;
  Rational p(1);
  if (p >= q) {
    while (p / 2 >= q) {
      p /= 2;
      --k;
    }
    return k;
  }
  while (p < q) {
    p *= 2;
    ++k;
  }
  return k;
}

/// Largest integer k with 2^k <= q (q > 0).
inline int floor_log2(const Rational& q) {
  if (q.sign() <= 0) throw std::domain_error("floor_log2 of nonpositive value");
  int k = 0;
  Rational p(1);
  if (p <= q) {
    while (p * 2 <= q) {
      p *= 2;
      ++k;
    }
    return k;
  }
  while (p > q) {
    p /= 2;
    --k;
  }
  return k;
}

/// Ratio adjusted so that it is never an exact power of two.
inline Rational adjusted_ratio(const Rational& ratio) {
  return is_power_of_two(ratio) ? ratio + 1 : ratio;
}

inline Rational Instance::rho() const { return adjusted_ratio(r_max() / r_min()); }

enum class ViolationKind {
  kShape,
  kAsymmetric,
  kNonzeroDiagonal,
  kNonpositiveDistance,
  kTriangle,
  kNonpositiveLatency,
};

struct Violation {
  ViolationKind kind;
  /// Witness vertices; the triangle witness (a, b, c) means
  /// dist(a, c) > dist(a, b) + dist(b, c).
  std::vector<Vertex> witness;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

inline ValidationResult validate_instance(const Instance& inst) {
  ValidationResult out;
  const int n = inst.size();
  auto add = [&](ViolationKind kind, std::vector<Vertex> witness, std::string msg) {
    out.violations.push_back({kind, std::move(witness), std::move(msg)});
  };
  if (n == 0) {
    add(ViolationKind::kShape, {}, "instance has no vertices");
    return out;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (inst.r(v).sign() <= 0) {
      add(ViolationKind::kNonpositiveLatency, {v},
          "r(" + inst.vertex_name(v) + ") = " + inst.r(v).str() + " is not positive");
    }
    if (!inst.dist(v, v).is_zero()) {
      add(ViolationKind::kNonzeroDiagonal, {v},
          "dist(" + inst.vertex_name(v) + "," + inst.vertex_name(v) + ") is not zero");
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (inst.dist(u, v) != inst.dist(v, u)) {
        add(ViolationKind::kAsymmetric, {u, v},
            "dist(" + inst.vertex_name(u) + "," + inst.vertex_name(v) + ") != dist(" +
                inst.vertex_name(v) + "," + inst.vertex_name(u) + ")");
      }
      if (inst.dist(u, v).sign() <= 0 || inst.dist(v, u).sign() <= 0) {
        add(ViolationKind::kNonpositiveDistance, {u, v},
            "dist between " + inst.vertex_name(u) + " and " + inst.vertex_name(v) +
                " is not positive");
      }
    }
  }
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      if (b == a) continue;
      for (Vertex c = a + 1; c < n; ++c) {
        if (c == b) continue;
        if (inst.dist(a, c) > inst.dist(a, b) + inst.dist(b, c)) {
          add(ViolationKind::kTriangle, {a, b, c},
              "triangle inequality fails: dist(" + inst.vertex_name(a) + "," +
                  inst.vertex_name(c) + ") > dist(" + inst.vertex_name(a) + "," +
                  inst.vertex_name(b) + ") + dist(" + inst.vertex_name(b) + "," +
                  inst.vertex_name(c) + ")");
        }
      }
    }
  }
  return out;
}

}  // namespace patrol
