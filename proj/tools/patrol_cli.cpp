// patrol: command-line front end for the solvers, verifier and oracle.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patrol/patrol.hpp"

namespace {

using namespace patrol;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUsage = 2;
constexpr int kData = 3;

Instance load_valid_instance(const std::string& path) {
  Instance inst = io::load_instance(path);
  const auto check = validate_instance(inst);
  if (!check) {
    std::ostringstream os;
    os << path << ": invalid instance";
    for (const auto& v : check.violations) os << "\n  " << v.message;
    throw DataError(os.str());
  }
  return inst;
}

void print_report(const Solution& sol, const Instance& inst, const LatencyReport& rep) {
  std::cout << "robots: " << sol.robots() << "\n";
  std::cout << "total length: " << sol.total_length(inst).decimal_str() << "\n";
  std::cout << "vertex        latency          r  ok\n";
  for (Vertex v = 0; v < inst.size(); ++v) {
    const auto uv = static_cast<std::size_t>(v);
    const std::string lat = rep.latency[uv] ? rep.latency[uv]->decimal_str() : "unvisited";
    std::cout << std::left << std::setw(10) << inst.vertex_name(v) << std::right << std::setw(12) << lat
              << std::setw(11) << inst.r(v).decimal_str() << "  " << (rep.vertex_feasible[uv] ? "yes" : "NO") << "\n";
  }
  std::cout << "feasible: " << (rep.feasible ? "yes" : "no") << "\n";
}

int write_solution(const Solution& sol, const Instance& inst, const std::string& out) {
  const auto rep = verify(sol, inst);
  print_report(sol, inst, rep);
  if (!out.empty()) io::save(out, sol);
  return rep.feasible ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot patrolling with per-vertex latency constraints"};
  app.require_subcommand(1);

  std::string in_path, out_path, sol_path, algo = "ogreedy", dir, algos = "approx,greedy,ogreedy", csv_path;
  GreedyConfig greedy;
  double m = 0.1;
  GenSpec gen;
  double budget = 0;
  unsigned threads = 1;
  int robots = 0;
  int horizon = kOracleHorizonCap;
  double alpha = 4.0;

  auto* solve = app.add_subcommand("solve", "solve an instance and write the walks");
  solve->add_option("--algo", algo, "approx | greedy | ogreedy")->check(CLI::IsMember({"approx", "greedy", "ogreedy"}));
  solve->add_option("-i,--input", in_path, "instance JSON")->required();
  solve->add_option("-o,--output", out_path, "solution JSON");
  solve->add_option("--m", m, "greedy weight discount in (0, 1]");
  solve->add_option("--restarts", greedy.restarts, "greedy restarts");
  solve->add_option("--seed", greedy.seed, "greedy seed");

  auto* ver = app.add_subcommand("verify", "evaluate latencies of a solution");
  ver->add_option("-i,--input", in_path, "instance JSON")->required();
  ver->add_option("-s,--solution", sol_path, "solution JSON")->required();

  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("-n", gen.n, "vertex count")->required();
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--kmin", gen.k_min, "smallest spread parameter");
  gen_cmd->add_option("--kmax", gen.k_max, "largest spread parameter");
  gen_cmd->add_option("-o,--output", out_path, "instance JSON")->required();

  auto* bench = app.add_subcommand("bench", "run solvers over a directory of instances");
  bench->add_option("--dir", dir, "directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--algos", algos, "comma-separated algorithm names");
  bench->add_option("--budget", budget, "seconds per cell; slower cells are flagged");
  bench->add_option("--threads", threads, "worker threads, 0 for all cores");
  bench->add_option("--csv", csv_path, "write the result table here");

  auto* oracle = app.add_subcommand("oracle", "exact search on tiny instances");
  oracle->add_option("-i,--input", in_path, "instance JSON")->required();
  oracle->add_option("--robots", robots, "decide this robot count; omit to minimize");
  oracle->add_option("--horizon", horizon, "largest period in grid steps");
  oracle->add_option("-o,--output", out_path, "solution JSON");

  auto* minmax = app.add_subcommand("minmax", "R walks minimizing max weighted latency");
  minmax->add_option("-i,--input", in_path, "instance JSON")->required();
  minmax->add_option("--robots", robots, "robot count")->required()->check(CLI::PositiveNumber);
  minmax->add_option("-o,--output", out_path, "solution JSON");

  auto* minrobots = app.add_subcommand("minrobots", "fewest robots with constraints relaxed by alpha");
  minrobots->add_option("-i,--input", in_path, "instance JSON")->required();
  minrobots->add_option("--alpha", alpha, "relaxation factor")->check(CLI::PositiveNumber);
  minrobots->add_option("-o,--output", out_path, "solution JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (solve->parsed()) {
      greedy.m = Rational::from_double(m);
      greedy.validate();
      const Instance inst = load_valid_instance(in_path);
      const Solution sol = algorithm_by_name(algo, greedy).solve(inst);
      const auto rep = verify(sol, inst);
      if (!rep.feasible) {
        std::cerr << "internal error: " << algo << " produced an infeasible solution\n";
        std::abort();
      }
      return write_solution(sol, inst, out_path);
    }
    if (ver->parsed()) {
      const Instance inst = load_valid_instance(in_path);
      const Solution sol = io::load_solution(sol_path);
      return write_solution(sol, inst, "");
    }
    if (gen_cmd->parsed()) {
      const Instance inst = generate(gen);
      io::save(out_path, inst);
      std::cout << "wrote " << inst.name() << " (" << inst.size() << " vertices) to " << out_path << "\n";
      return kOk;
    }
    if (bench->parsed()) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<Instance> insts;
      for (const auto& f : files) {
        Instance inst = load_valid_instance(f.string());
        if (inst.name().empty()) inst.set_name(f.stem().string());
        insts.push_back(std::move(inst));
      }
      std::vector<Algorithm> algs;
      std::stringstream ss(algos);
      for (std::string a; std::getline(ss, a, ',');) {
        if (!a.empty()) algs.push_back(algorithm_by_name(a, greedy));
      }
      const ResultTable table = run_benchmark(insts, algs, {budget, threads});
      const std::string csv = to_csv(table);
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        io::write_file(csv_path, csv);
      }
      std::cout << summary_table(table);
      return kOk;
    }
    if (oracle->parsed()) {
      const Instance inst = load_valid_instance(in_path);
      if (robots == 0) {
        const int best = exact_min_robots(inst, horizon);
        std::cout << "minimum robots at horizon " << horizon << ": " << best << "\n";
        return kOk;
      }
      const auto res = exact_decision(inst, robots, horizon);
      if (!res.feasible) {
        std::cout << "infeasible at horizon " << horizon << " with " << robots << " robot(s)\n";
        return kInfeasible;
      }
      return write_solution(*res.solution, inst, out_path);
    }
    if (minmax->parsed()) {
      const Instance inst = load_valid_instance(in_path);
      const auto winst = WeightedInstance::from_constraints(inst);
      const Solution sol = latency_walks(winst, robots);
      std::cout << "max weighted latency: " << weighted_cost(sol, winst).decimal_str()
                << " (r_min " << inst.r_min().decimal_str() << ")\n";
      write_solution(sol, inst, out_path);
      return kOk;
    }
    if (minrobots->parsed()) {
      const Instance inst = load_valid_instance(in_path);
      const auto res = bicriterion_min_robots(inst, Rational::from_double(alpha));
      std::cout << "robots: " << res.robots << ", worst latency / r: " << res.achieved_factor.decimal_str()
                << (res.parked_fallback ? " (one robot parked per vertex)" : "") << "\n";
      if (!out_path.empty()) io::save(out_path, res.solution);
      return kOk;
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
