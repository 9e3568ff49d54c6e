#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/graph.hpp"

namespace schelling {

inline Graph make_path(std::size_t n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

inline Graph make_ring(std::size_t n) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return Graph(n, edges);
}

inline Graph make_clique(std::size_t n) {
  if (n < 1) throw std::invalid_argument("clique needs n >= 1");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges);
}

// Center is node 0, leaves are 1..center_degree.
inline Graph make_star(std::size_t center_degree) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= center_degree; ++v) edges.emplace_back(0, v);
  return Graph(center_degree + 1, edges);
}

// Toroidal grid where (x,y) is adjacent to every other cell within Chebyshev
// distance `radius` (radius 1: 8-regular, 2: 24-regular, 3: 48-regular).
inline Graph make_torus(std::size_t width, std::size_t height, std::size_t radius) {
  if (radius < 1) throw std::invalid_argument("torus radius must be >= 1");
  if (width < 2 * radius + 1 || height < 2 * radius + 1) {
    throw std::invalid_argument("torus dimensions must be at least 2*radius+1");
  }
  const auto r = static_cast<long>(radius);
  const auto w = static_cast<long>(width), h = static_cast<long>(height);
  std::vector<Edge> edges;
  edges.reserve(width * height * ((2 * radius + 1) * (2 * radius + 1) - 1) / 2);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const auto u = static_cast<NodeId>(y * w + x);
      for (long dy = -r; dy <= r; ++dy) {
        for (long dx = -r; dx <= r; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const auto v = static_cast<NodeId>(((y + dy + h) % h) * w + (x + dx + w) % w);
          if (u < v) edges.emplace_back(u, v);
        }
      }
    }
  }
  return Graph(width * height, edges, GridLayout{width, height});
}

// 4-regular torus: cells sharing a side are adjacent.
inline Graph make_von_neumann_torus(std::size_t width, std::size_t height) {
  if (width < 3 || height < 3) throw std::invalid_argument("von Neumann torus needs width, height >= 3");
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const auto u = static_cast<NodeId>(y * width + x);
      edges.emplace_back(u, static_cast<NodeId>(y * width + (x + 1) % width));
      edges.emplace_back(u, static_cast<NodeId>(((y + 1) % height) * width + x));
    }
  }
  return Graph(width * height, edges, GridLayout{width, height});
}

// Random spanning tree plus every remaining pair with probability `extra_edge_prob`.
template <typename Rng>
Graph random_connected_graph(std::size_t n, double extra_edge_prob, Rng& rng) {
  if (n < 1) throw std::invalid_argument("graph needs n >= 1");
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<Edge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    NodeId a = order[k], b = order[pick(rng)];
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  std::bernoulli_distribution coin(extra_edge_prob);
  if (extra_edge_prob > 0.0) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (coin(rng)) edges.emplace(u, v);
  }
  return Graph(n, std::vector<Edge>(edges.begin(), edges.end()));
}

// Two nodes u, v and e further nodes S, each adjacent to both u and v.
struct K2eSubgraph {
  NodeId u = 0;
  NodeId v = 0;
  std::vector<NodeId> shared;
};

// Smallest (u, v) pair with at least e common neighbors; S = the e smallest of them.
inline std::optional<K2eSubgraph> find_k2e(const Graph& graph, std::size_t e) {
  if (e < 1) throw std::invalid_argument("find_k2e needs e >= 1");
  const auto n = static_cast<NodeId>(graph.node_count());
  std::vector<NodeId> common;
  for (NodeId u = 0; u < n; ++u) {
    if (graph.degree(u) < e) continue;
    for (NodeId v = u + 1; v < n; ++v) {
      if (graph.degree(v) < e) continue;
      common.clear();
      auto a = graph.neighbors(u), b = graph.neighbors(v);
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (common.size() >= e) {
        common.resize(e);
        return K2eSubgraph{u, v, common};
      }
    }
  }
  return std::nullopt;
}

namespace detail {

inline std::size_t neighbors_outside(const Graph& graph, NodeId v, const std::array<NodeId, 5>& path) {
  std::size_t count = 0;
  for (NodeId w : graph.neighbors(v)) {
    if (std::find(path.begin(), path.end(), w) == path.end()) ++count;
  }
  return count;
}

// Visits simple 5-node paths in lexicographic order until `accept` returns true.
template <typename Accept>
std::optional<std::array<NodeId, 5>> search_five_paths(const Graph& graph, Accept&& accept) {
  std::array<NodeId, 5> path{};
  std::vector<char> on_path(graph.node_count(), 0);
  std::optional<std::array<NodeId, 5>> found;
  auto extend = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == 5) {
      if (accept(path)) {
        found = path;
        return true;
      }
      return false;
    }
    for (NodeId w : graph.neighbors(path[depth - 1])) {
      if (on_path[w]) continue;
      path[depth] = w;
      on_path[w] = 1;
      bool done = self(self, depth + 1);
      on_path[w] = 0;
      if (done) return true;
    }
    return false;
  };
  for (NodeId s = 0; s < graph.node_count(); ++s) {
    path[0] = s;
    on_path[s] = 1;
    bool done = extend(extend, 1);
    on_path[s] = 0;
    if (done) break;
  }
  return found;
}

}  // namespace detail

// Lexicographically smallest simple 5-node path whose first node has no more
// neighbors off the path than its last node.
inline std::optional<std::array<NodeId, 5>> find_five_path(const Graph& graph) {
  return detail::search_five_paths(graph, [&](const std::array<NodeId, 5>& p) {
    return detail::neighbors_outside(graph, p[0], p) <= detail::neighbors_outside(graph, p[4], p);
  });
}

}  // namespace schelling
