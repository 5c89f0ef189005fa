#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "patrol/approx.hpp"
#include "patrol/greedy.hpp"
#include "patrol/instance.hpp"
#include "patrol/latency.hpp"
#include "patrol/subroutines.hpp"

namespace patrol {

/// Random instance parameters: n uniform points in the unit square,
/// latency constraints drawn on [L_T / k, k * L_T] with k uniform on
/// [k_min, k_max] and L_T the TSP tour length.
struct GenSpec {
  int n = 10;
  int k_min = 4;
  int k_max = 8;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("gen: n must be at least 1");
    if (k_min < 2 || k_max > 16 || k_min > k_max) throw std::invalid_argument("gen: k range must lie within [2, 16]");
  }
};

/// Distances and constraints are rounded to multiples of 10^-6.
inline constexpr Rational::int_type kGenGrid = 1'000'000;

inline Instance generate(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  const auto n = static_cast<std::size_t>(spec.n);

  std::vector<std::pair<double, double>> pts(n);
  for (auto& [x, y] : pts) {
    x = coord(rng);
    y = coord(rng);
  }
  std::vector<std::vector<Rational::int_type>> ticks(n, std::vector<Rational::int_type>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double e = std::hypot(pts[u].first - pts[v].first, pts[u].second - pts[v].second);
      const auto t = std::max<Rational::int_type>(1, std::llround(e * static_cast<double>(kGenGrid)));
      ticks[u][v] = ticks[v][u] = t;
    }
  }
  // rounding can break the triangle inequality; restore it by shortest paths
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) ticks[u][v] = std::min(ticks[u][v], ticks[u][k] + ticks[k][v]);
    }
  }

  std::vector<std::vector<Time>> dist(n, std::vector<Time>(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) dist[u][v] = Rational(ticks[u][v], kGenGrid);
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  const std::string name = "gen-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.seed);

  std::vector<Time> r(n, Time(1));
  Instance inst(name, names, dist, r);
  if (n == 1) return inst;

  const Time tour = tsp_tour(inst).length;
  std::uniform_int_distribution<int> pick_k(spec.k_min, spec.k_max);
  const int k = pick_k(rng);
  const Time lo = tour / Rational(k);
  const Time hi = tour * Rational(k);
  std::uniform_real_distribution<double> pick_r(lo.to_double(), hi.to_double());
  for (auto& rv : r) {
    Time t(std::llround(pick_r(rng) * static_cast<double>(kGenGrid)), kGenGrid);
    rv = std::clamp(t, lo, hi);
  }
  return inst.with_constraints(std::move(r));
}

/// A solver under benchmark.
struct Algorithm {
  std::string name;
  std::function<Solution(const Instance&)> solve;
};

/// The built-in solvers by CLI name: approx, greedy, ogreedy.
inline Algorithm algorithm_by_name(const std::string& name, const GreedyConfig& cfg = {}) {
  if (name == "approx") return {name, [](const Instance& i) { return solve_approx(i); }};
  if (name == "greedy") return {name, [cfg](const Instance& i) { return solve_simple_greedy(i, cfg); }};
  if (name == "ogreedy") return {name, [cfg](const Instance& i) { return solve_orienteering_greedy(i, cfg); }};
  throw std::invalid_argument("unknown algorithm: " + name);
}

struct ResultRow {
  std::string instance;
  std::string algorithm;
  int n = 0;
  int robots = 0;
  Time total_length;
  double millis = 0;
  bool feasible = false;
  bool timed_out = false;
  std::string error;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

struct BenchOptions {
  /// Wall-clock seconds per cell; exceeding it marks the cell as timed out
  /// after the fact (a running solver is not interrupted). 0 disables it.
  double budget = 0;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 1;
};

inline ResultRow run_cell(const Instance& inst, const Algorithm& algo, double budget) {
  ResultRow row;
  row.instance = inst.name();
  row.algorithm = algo.name;
  row.n = inst.size();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Solution sol = algo.solve(inst);
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.robots = sol.robots();
    row.total_length = sol.total_length(inst);
    const auto rep = verify(sol, inst);
    row.feasible = rep.feasible && sol.covered().size() == static_cast<std::size_t>(inst.size());
  } catch (const std::exception& e) {
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.error = e.what();
  }
  row.timed_out = budget > 0 && row.millis > budget * 1000.0;
  return row;
}

/// Runs every (instance, algorithm) cell; rows come out ordered by instance,
/// then algorithm, whatever the thread count.
inline ResultTable run_benchmark(const std::vector<Instance>& instances, const std::vector<Algorithm>& algorithms,
                                 const BenchOptions& opt = {}) {
  ResultTable table;
  const std::size_t cells = instances.size() * algorithms.size();
  table.rows.resize(cells);
  if (cells == 0) return table;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      table.rows[c] = run_cell(instances[c / algorithms.size()], algorithms[c % algorithms.size()], opt.budget);
    }
  };
  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return table;
}

inline constexpr const char* kCsvHeader = "instance,algorithm,robots,total_length,millis,feasible";

/// The feasible column holds true, false, timeout or error.
inline std::string to_csv(const ResultTable& t) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : t.rows) {
    os << r.instance << ',' << r.algorithm << ',' << r.robots << ',' << r.total_length.decimal_str() << ','
       << std::fixed << std::setprecision(3) << r.millis << std::defaultfloat << ',';
    if (!r.error.empty()) {
      os << "error";
    } else if (r.timed_out) {
      os << "timeout";
    } else {
      os << (r.feasible ? "true" : "false");
    }
    os << '\n';
  }
  return os.str();
}

/// Inverse of to_csv. Sizes are recovered from "gen-n<N>-..." names when
/// possible; feasibility of timed-out rows is not recorded and reads false.
inline ResultTable from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::invalid_argument("csv: missing or wrong header");
  ResultTable t;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw std::invalid_argument("csv: line " + std::to_string(lineno) + " needs 6 fields");
    ResultRow r;
    r.instance = f[0];
    r.algorithm = f[1];
    r.robots = std::stoi(f[2]);
    r.total_length = Rational::parse(f[3]);
    r.millis = std::stod(f[4]);
    r.feasible = f[5] == "true";
    r.timed_out = f[5] == "timeout";
    if (f[5] == "error") r.error = "error";
    if (r.instance.rfind("gen-n", 0) == 0) r.n = std::atoi(r.instance.c_str() + 5);
    t.rows.push_back(std::move(r));
  }
  return t;
}

struct BucketStats {
  int n = 0;
  std::string algorithm;
  int cells = 0;
  double mean_robots = 0;
  int min_robots = 0;
  int max_robots = 0;
  double mean_millis = 0;
  int feasible = 0;
  int timed_out = 0;
};

/// Per (size, algorithm) aggregates, ordered by size then algorithm.
inline std::vector<BucketStats> summarize(const ResultTable& t) {
  std::map<std::pair<int, std::string>, BucketStats> acc;
  for (const auto& r : t.rows) {
    auto& b = acc[{r.n, r.algorithm}];
    if (b.cells == 0) {
      b.n = r.n;
      b.algorithm = r.algorithm;
      b.min_robots = b.max_robots = r.robots;
    }
    ++b.cells;
    b.mean_robots += r.robots;
    b.mean_millis += r.millis;
    b.min_robots = std::min(b.min_robots, r.robots);
    b.max_robots = std::max(b.max_robots, r.robots);
    b.feasible += r.feasible ? 1 : 0;
    b.timed_out += r.timed_out ? 1 : 0;
  }
  std::vector<BucketStats> out;
  for (auto& [key, b] : acc) {
    b.mean_robots /= b.cells;
    b.mean_millis /= b.cells;
    out.push_back(b);
  }
  return out;
}

inline std::string summary_table(const ResultTable& t) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "n" << std::setw(10) << "algorithm" << std::right << std::setw(7) << "cells"
     << std::setw(12) << "robots" << std::setw(6) << "min" << std::setw(6) << "max" << std::setw(12) << "ms"
     << std::setw(10) << "feasible" << std::setw(9) << "timeout" << '\n';
  for (const auto& b : summarize(t)) {
    os << std::left << std::setw(6) << b.n << std::setw(10) << b.algorithm << std::right << std::setw(7) << b.cells
       << std::setw(12) << std::fixed << std::setprecision(2) << b.mean_robots << std::setw(6) << b.min_robots
       << std::setw(6) << b.max_robots << std::setw(12) << b.mean_millis << std::setw(10) << b.feasible
       << std::setw(9) << b.timed_out << '\n';
  }
  return os.str();
}

}  // namespace patrol
