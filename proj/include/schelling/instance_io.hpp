#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/game.hpp"
#include "schelling/graph.hpp"

namespace schelling {

// Plain-text instance:
//   n m k
//   u v            (m lines, 0-based)
//   t_1 ... t_k
//   [v_1 ... v_k]  (optional placement, one node per agent in input order)
struct Instance {
  Graph graph;
  TypeProfile types;
  std::optional<Placement> placement;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#') return true;
  }
  return false;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& line, const char* what) {
  std::istringstream s(line);
  std::vector<T> out;
  T value{};
  while (s >> value) out.push_back(value);
  s.clear();
  std::string rest;
  if (s >> rest) throw std::invalid_argument(std::string("malformed ") + what + " line: '" + line + "'");
  return out;
}

}  // namespace detail

inline Instance read_instance(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw std::invalid_argument("empty instance");
  auto header = detail::parse_numbers<long long>(line, "header");
  if (header.size() != 3 || header[0] <= 0 || header[1] < 0 || header[2] <= 0) {
    throw std::invalid_argument("header must be 'n m k' with n, k > 0");
  }
  const auto n = static_cast<std::size_t>(header[0]);
  const auto m = static_cast<std::size_t>(header[1]);
  const auto k = static_cast<std::size_t>(header[2]);
  if (k > n) throw std::invalid_argument("more agents than nodes");

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    if (!detail::next_content_line(in, line)) throw std::invalid_argument("missing edge lines");
    auto uv = detail::parse_numbers<long long>(line, "edge");
    if (uv.size() != 2) throw std::invalid_argument("edge line needs two node indices: '" + line + "'");
    if (uv[0] < 0 || uv[1] < 0 || static_cast<std::size_t>(uv[0]) >= n || static_cast<std::size_t>(uv[1]) >= n) {
      throw std::invalid_argument("edge endpoint out of range: '" + line + "'");
    }
    edges.emplace_back(static_cast<NodeId>(uv[0]), static_cast<NodeId>(uv[1]));
  }

  Instance inst;
  inst.graph = Graph(n, edges);

  if (!detail::next_content_line(in, line)) throw std::invalid_argument("missing type line");
  auto values = detail::parse_numbers<double>(line, "type");
  if (values.size() != k) throw std::invalid_argument("type line must have k values");
  inst.types = TypeProfile(values);
  if (!inst.types.was_sorted()) {
    inst.warnings.push_back("type-values were not sorted; agents renumbered by ascending type");
  }

  if (detail::next_content_line(in, line)) {
    auto nodes = detail::parse_numbers<long long>(line, "placement");
    if (nodes.size() != k) throw std::invalid_argument("placement line must have k node indices");
    std::vector<NodeId> node_of(k);
    for (AgentId i = 0; i < k; ++i) {
      long long v = nodes[inst.types.original_index(i)];
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw std::invalid_argument("placement node out of range");
      node_of[i] = static_cast<NodeId>(v);
    }
    inst.placement = Placement(n, std::move(node_of));
  }
  return inst;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

// Nodes of the agents listed in their original input order.
inline std::string placement_line(const TypeProfile& types, const Placement& placement) {
  std::vector<NodeId> by_input(types.size());
  for (AgentId i = 0; i < types.size(); ++i) by_input[types.original_index(i)] = placement.node_of(i);
  std::ostringstream out;
  for (std::size_t p = 0; p < by_input.size(); ++p) out << (p ? " " : "") << by_input[p];
  return out.str();
}

inline void write_instance(std::ostream& out, const Graph& graph, const TypeProfile& types,
                           const Placement* placement = nullptr) {
  out << graph.node_count() << ' ' << graph.edge_count() << ' ' << types.size() << '\n';
  for (auto [u, v] : graph.edges()) out << u << ' ' << v << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (AgentId i = 0; i < types.size(); ++i) out << (i ? " " : "") << types[i];
  out << '\n';
  if (placement) {
    for (AgentId i = 0; i < types.size(); ++i) out << (i ? " " : "") << placement->node_of(i);
    out << '\n';
  }
}

}  // namespace schelling
