#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schelling {

using NodeId = std::uint32_t;
using AgentId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xFFFFFFFFu;

using Edge = std::pair<NodeId, NodeId>;

// Row-major pixel layout of a toroidal grid; node id = y * width + x.
struct GridLayout {
  std::size_t width = 0;
  std::size_t height = 0;
};

// Undirected, simple, connected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t node_count, const std::vector<Edge>& edges,
        std::optional<GridLayout> grid = std::nullopt)
      : adjacency_(node_count), grid_(grid) {
    if (node_count == 0) throw std::invalid_argument("graph needs at least one node");
    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                    " out of range for " + std::to_string(node_count) + " nodes");
      }
      if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
      if (u > v) std::swap(u, v);
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw std::invalid_argument("duplicate edge");
    }
    for (auto [u, v] : edges_) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
    if (!connected()) throw std::invalid_argument("graph is not connected");
    if (grid_ && grid_->width * grid_->height != node_count) {
      throw std::invalid_argument("grid layout does not match node count");
    }
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  std::size_t min_degree() const {
    std::size_t d = adjacency_[0].size();
    for (const auto& list : adjacency_) d = std::min(d, list.size());
    return d;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& list : adjacency_) d = std::max(d, list.size());
    return d;
  }

  bool is_regular() const { return min_degree() == max_degree(); }

  // Every degree lies in {delta, delta + 1} for delta = min_degree().
  bool is_almost_regular() const { return max_degree() <= min_degree() + 1; }

  const std::optional<GridLayout>& grid() const { return grid_; }

 private:
  bool connected() const {
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == adjacency_.size();
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::optional<GridLayout> grid_;
};

// Nodes in breadth-first order from `root`, children visited by ascending index.
// parent[root] == kNone.
struct BfsOrder {
  std::vector<NodeId> order;
  std::vector<NodeId> parent;
  std::vector<std::uint32_t> level;
};

inline BfsOrder bfs_order(const Graph& graph, NodeId root) {
  BfsOrder out;
  const std::size_t n = graph.node_count();
  out.parent.assign(n, kNone);
  out.level.assign(n, kNone);
  out.order.reserve(n);
  std::queue<NodeId> queue;
  queue.push(root);
  out.level[root] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop();
    out.order.push_back(v);
    for (NodeId w : graph.neighbors(v)) {
      if (out.level[w] == kNone) {
        out.level[w] = out.level[v] + 1;
        out.parent[w] = v;
        queue.push(w);
      }
    }
  }
  return out;
}

}  // namespace schelling
