#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "patrol/instance.hpp"
#include "patrol/walk.hpp"

namespace patrol {

/// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

namespace io {

using nlohmann::json;

/// Integers and short exact decimals are written as JSON numbers, anything
/// else as a "p/q" string, so that reading back is exact.
inline json time_to_json(const Time& t) {
  if (t.is_integer()) return t.num();
  const std::string dec = t.decimal_str();
  if (dec.find('/') == std::string::npos) {
    std::size_t significant = 0;
    bool leading = true;
    for (char c : dec) {
      if (c < '0' || c > '9') continue;
      if (leading && c == '0') continue;
      leading = false;
      ++significant;
    }
    if (significant <= 15) {
      const double d = t.to_double();
      if (Rational::from_double(d) == t) return d;
    }
  }
  return t.str();
}

inline Time time_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Time(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Time(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  throw DataError(where + ": expected a number or a rational string");
}

inline json to_json(const Instance& inst) {
  json j;
  j["name"] = inst.name();
  j["n"] = inst.size();
  json dist = json::array();
  for (const auto& row : inst.dist_matrix()) {
    json jr = json::array();
    for (const auto& d : row) jr.push_back(time_to_json(d));
    dist.push_back(std::move(jr));
  }
  j["dist"] = std::move(dist);
  json r = json::array();
  for (const auto& x : inst.latency_constraints()) r.push_back(time_to_json(x));
  j["r"] = std::move(r);
  bool default_names = true;
  for (int v = 0; v < inst.size(); ++v) {
    default_names = default_names && inst.vertex_name(v) == "v" + std::to_string(v);
  }
  if (!default_names) j["names"] = inst.names();
  return j;
}

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw DataError("instance: expected a JSON object");
  for (const char* key : {"n", "dist", "r"}) {
    if (!j.contains(key)) throw DataError(std::string("instance: missing field '") + key + "'");
  }
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 0) {
    throw DataError("instance: 'n' must be a nonnegative integer");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<std::int64_t>());
  const json& jd = j["dist"];
  const json& jr = j["r"];
  if (!jd.is_array() || jd.size() != n) throw DataError("instance: 'dist' must have n rows");
  if (!jr.is_array() || jr.size() != n) throw DataError("instance: 'r' must have n entries");
  std::vector<std::vector<Time>> dist(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (!jd[u].is_array() || jd[u].size() != n) {
      throw DataError("instance: dist row " + std::to_string(u) + " must have n entries");
    }
    for (std::size_t v = 0; v < n; ++v) {
      dist[u].push_back(
          time_from_json(jd[u][v], "dist[" + std::to_string(u) + "][" + std::to_string(v) + "]"));
    }
  }
  std::vector<Time> r;
  for (std::size_t v = 0; v < n; ++v) r.push_back(time_from_json(jr[v], "r[" + std::to_string(v) + "]"));
  std::vector<std::string> names;
  if (j.contains("names")) {
    if (!j["names"].is_array() || j["names"].size() != n) {
      throw DataError("instance: 'names' must have n entries");
    }
    for (const auto& s : j["names"]) {
      if (!s.is_string()) throw DataError("instance: names must be strings");
      names.push_back(s.get<std::string>());
    }
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  return Instance(std::move(name), std::move(names), std::move(dist), std::move(r));
}

inline json to_json(const Solution& sol) {
  json walks = json::array();
  for (const auto& w : sol.walks) {
    json steps = json::array();
    for (const auto& s : w.steps()) steps.push_back(json::array({s.vertex, time_to_json(s.hold)}));
    walks.push_back({{"steps", std::move(steps)}, {"offset", time_to_json(w.offset())}});
  }
  return {{"walks", std::move(walks)}};
}

inline Solution solution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("walks") || !j["walks"].is_array()) {
    throw DataError("solution: expected an object with a 'walks' array");
  }
  Solution sol;
  for (std::size_t k = 0; k < j["walks"].size(); ++k) {
    const json& jw = j["walks"][k];
    const std::string where = "walks[" + std::to_string(k) + "]";
    if (!jw.is_object() || !jw.contains("steps") || !jw["steps"].is_array()) {
      throw DataError(where + ": expected an object with a 'steps' array");
    }
    std::vector<Step> steps;
    for (const auto& js : jw["steps"]) {
      if (!js.is_array() || js.size() != 2 || !js[0].is_number_integer()) {
        throw DataError(where + ": each step must be [vertex, hold]");
      }
      steps.push_back({js[0].get<Vertex>(), time_from_json(js[1], where + " hold")});
    }
    Time offset = jw.contains("offset") ? time_from_json(jw["offset"], where + " offset") : Time(0);
    sol.walks.emplace_back(std::move(steps), offset);
  }
  return sol;
}

/// Parses JSON text, reporting syntax errors with line and column.
inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DataError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": malformed JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline Instance load_instance(const std::string& path) {
  return instance_from_json(parse_json(read_file(path), path));
}

inline Solution load_solution(const std::string& path) {
  return solution_from_json(parse_json(read_file(path), path));
}

inline void save(const std::string& path, const Instance& inst) { write_file(path, dump(to_json(inst))); }
inline void save(const std::string& path, const Solution& sol) { write_file(path, dump(to_json(sol))); }

}  // namespace io
}  // namespace patrol
