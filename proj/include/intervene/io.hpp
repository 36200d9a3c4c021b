#pragma once

// File formats.
//
// DAG text:
//   line 1: N
//   then one "parent child" pair per line, 0-based, whitespace-separated.
//   Lines whose first non-blank character is '#' are comments; blank lines
//   are ignored. Writers emit N followed by edges sorted by (parent, child).
//
// Schedule JSON:
//   {"n":N,"experiments":[[sorted variable indices],...]}
//   A null experiment is []. Writers emit the compact form plus a newline.

#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "intervene/dag.hpp"
#include "intervene/planner.hpp"

namespace intervene {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  /// 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string write_dag_text(const Dag& g) {
  std::string out = std::to_string(g.size()) + "\n";
  for (const auto& e : g.edges()) out += std::to_string(e.parent) + " " + std::to_string(e.child) + "\n";
  return out;
}

namespace detail {

inline bool parse_index(const std::string& token, std::size_t& value) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 18) return false;
  value = std::stoull(token);
  return true;
}

}  // namespace detail

inline Dag read_dag_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  std::size_t n_line = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
    if (!n) {
      std::size_t value = 0;
      if (tokens.size() != 1 || !detail::parse_index(tokens[0], value)) {
        throw ParseError("line " + std::to_string(line_no) + ": expected the variable count N", line_no);
      }
      n = value;
      n_line = line_no;
      continue;
    }
    Edge e;
    if (tokens.size() != 2 || !detail::parse_index(tokens[0], e.parent) || !detail::parse_index(tokens[1], e.child)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected \"parent child\"", line_no);
    }
    if (e.parent >= *n || e.child >= *n) {
      throw ParseError("line " + std::to_string(line_no) + ": endpoint outside [0, " + std::to_string(*n) + ")", line_no);
    }
    edges.push_back(e);
  }
  if (!n) throw ParseError("missing variable count", 0);
  try {
    return Dag(*n, std::move(edges));
  } catch (const DagError& err) {
    throw ParseError(std::string("invalid graph: ") + err.what(), n_line);
  }
}

inline nlohmann::ordered_json schedule_to_json(const Schedule& s) {
  nlohmann::ordered_json j;
  j["n"] = s.variables();
  auto experiments = nlohmann::ordered_json::array();
  for (const auto& e : s.experiments()) experiments.push_back(e.intervention.members());
  j["experiments"] = std::move(experiments);
  return j;
}

inline std::string write_schedule_json(const Schedule& s) { return schedule_to_json(s).dump() + "\n"; }

inline Schedule schedule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("experiments")) {
    throw ParseError("schedule JSON needs \"n\" and \"experiments\"", 0);
  }
  if (!j["n"].is_number_unsigned()) throw ParseError("\"n\" must be a non-negative integer", 0);
  const auto n = j["n"].get<std::size_t>();
  if (n == 0 || n > kMaxVariables) throw ParseError("\"n\" must lie in [1, 64]", 0);
  if (!j["experiments"].is_array()) throw ParseError("\"experiments\" must be an array", 0);
  Schedule s(n);
  std::size_t index = 0;
  for (const auto& e : j["experiments"]) {
    const std::string where = "experiment " + std::to_string(index);
    if (!e.is_array()) throw ParseError(where + " must be an array of variable indices", 0);
    VariableSet members;
    std::optional<std::size_t> previous;
    for (const auto& v : e) {
      if (!v.is_number_unsigned()) throw ParseError(where + ": indices must be non-negative integers", 0);
      const auto id = v.get<std::size_t>();
      if (id >= n) throw ParseError(where + ": index " + std::to_string(id) + " outside [0, n)", 0);
      if (previous && id <= *previous) throw ParseError(where + ": indices must be strictly increasing", 0);
      previous = id;
      members.insert(id);
    }
    s.push_back({members});
    ++index;
  }
  return s;
}

inline Schedule read_schedule_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("schedule JSON: ") + err.what(), 0);
  }
  return schedule_from_json(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace intervene
