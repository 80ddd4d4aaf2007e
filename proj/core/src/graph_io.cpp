#include <string>

#include "wreath/graphs.hpp"

namespace wreath {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::kParse, where + ": " + msg);
}

std::size_t read_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    parse_error(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

json to_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  json out = {{"n", g.order()}, {"labels", g.labels()}, {"edges", std::move(edges)}};
  const auto d = g.regular_degree();
  out["degree"] = d ? json(*d) : json(nullptr);
  if (g.allows_self_loops()) out["self_loops"] = true;
  return out;
}

Graph graph_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object");
  if (!j.contains("n")) parse_error(where, "missing \"n\"");
  const std::size_t n = read_index(j["n"], where + ".n");

  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const json& l = j["labels"];
    if (!l.is_array()) parse_error(where + ".labels", "expected an array");
    if (l.size() != n) {
      parse_error(where + ".labels", "has " + std::to_string(l.size()) +
                                         " entries, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!l[i].is_string()) {
        parse_error(where + ".labels[" + std::to_string(i) + "]", "expected a string");
      }
      labels.push_back(l[i].get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }

  if (!j.contains("edges") || !j["edges"].is_array()) {
    parse_error(where, "missing \"edges\" array");
  }
  const json& e = j["edges"];
  std::vector<Edge> edges;
  edges.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const std::string at = where + ".edges[" + std::to_string(k) + "]";
    if (!e[k].is_array() || e[k].size() != 2) parse_error(at, "expected [u, v]");
    const std::size_t u = read_index(e[k][0], at + "[0]");
    const std::size_t v = read_index(e[k][1], at + "[1]");
    if (u >= n) parse_error(at + "[0]", "vertex " + std::to_string(u) + " out of range");
    if (v >= n) parse_error(at + "[1]", "vertex " + std::to_string(v) + " out of range");
    edges.push_back({u, v});
  }

  std::optional<std::size_t> degree;
  if (j.contains("degree") && !j["degree"].is_null()) {
    degree = read_index(j["degree"], where + ".degree");
  }
  bool loops = false;
  if (j.contains("self_loops")) {
    if (!j["self_loops"].is_boolean()) parse_error(where + ".self_loops", "expected a boolean");
    loops = j["self_loops"].get<bool>();
  }
  try {
    return Graph(std::move(labels), std::move(edges), degree, loops);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::kNonRegular) throw;
    parse_error(where, err.what());
  }
}

std::string to_dot(const Graph& g, const std::string& name) {
  std::string out = "graph " + quoted(name) + " {\n";
  for (std::size_t v = 0; v < g.order(); ++v) {
    out += "  " + std::to_string(v) + " [label=" + quoted(g.labels()[v]) + "];\n";
  }
  for (const Edge& e : g.edges()) {
    out += "  " + std::to_string(e.u) + " -- " + std::to_string(e.v) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace wreath
