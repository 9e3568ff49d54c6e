#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/game.hpp"
#include "schelling/graph.hpp"
#include "schelling/graph_gen.hpp"

namespace schelling {

namespace detail {

// Places the given agents on the given free nodes, both ascending, and returns
// the finished placement. `node_of` entries already set are kept.
inline Placement fill_ascending(std::size_t node_count, std::vector<NodeId> node_of,
                                const std::vector<char>& node_reserved) {
  std::vector<char> used = node_reserved;
  for (NodeId v : node_of)
    if (v != kNone) used[v] = 1;
  NodeId next = 0;
  for (auto& slot : node_of) {
    if (slot != kNone) continue;
    while (next < node_count && used[next]) ++next;
    if (next == node_count) throw std::logic_error("not enough free nodes");
    slot = next;
    used[next] = 1;
  }
  return Placement(node_count, std::move(node_of));
}

// Improving jumps under J-HIS-MDG until none is left. The lexicographic
// cost potential makes this terminate.
inline Placement settle_jumps(const Graph& graph, const TypeProfile& types, Placement placement) {
  const GameSpec spec = GameSpec::mdg(Deviation::kJump, Isolation::kHappy);
  for (bool moved = true; moved;) {
    moved = false;
    for (AgentId i = 0; i < placement.agent_count() && !moved; ++i) {
      for (NodeId v : placement.empty_nodes()) {
        const Move m = Move::jump(i, v);
        if (is_profitable(graph, types, placement, spec, m)) {
          placement.apply(m);
          moved = true;
          break;
        }
      }
    }
  }
  return placement;
}

}  // namespace detail

// Swap equilibrium for the S-MDG on any connected graph: agents in type order
// on the nodes of a BFS tree numbered level by level, children by ascending index.
inline Placement se_mdg_bfs(const Graph& graph, const TypeProfile& types, NodeId root = 0) {
  if (types.size() != graph.node_count()) {
    throw std::invalid_argument("se_mdg_bfs needs one agent per node");
  }
  const BfsOrder bfs = bfs_order(graph, root);
  return Placement(graph.node_count(), bfs.order);
}

// Nodes of a path graph from its lower-indexed end to the other end.
inline std::vector<NodeId> path_order(const Graph& graph) {
  const std::size_t n = graph.node_count();
  if (graph.edge_count() != n - 1 || graph.max_degree() > 2) throw std::invalid_argument("graph is not a path");
  std::vector<NodeId> order;
  order.reserve(n);
  NodeId start = 0;
  if (n > 1) {
    while (graph.degree(start) != 1) ++start;
  }
  NodeId prev = kNone, cur = start;
  for (std::size_t k = 0; k < n; ++k) {
    order.push_back(cur);
    NodeId next = kNone;
    for (NodeId w : graph.neighbors(cur))
      if (w != prev) next = w;
    prev = cur;
    cur = next;
  }
  return order;
}

// Agent i on the i-th node of the path.
inline Placement sorted_path_placement(const Graph& graph, const TypeProfile& types) {
  if (types.size() != graph.node_count()) throw std::invalid_argument("sorted_path_placement needs full occupancy");
  return Placement(graph.node_count(), path_order(graph));
}

// Jump equilibrium for J-HIS-MDG (also J-HIS-ADG, J-HIS-CG) on a path of
// `node_count` nodes: agents in type order with one empty node inserted into
// each of the e largest consecutive-type gaps. With e >= n-1 every agent is isolated.
inline Placement je_his_path(const TypeProfile& types, std::size_t node_count) {
  const std::size_t n = types.size();
  if (node_count < n) throw std::invalid_argument("je_his_path: more agents than nodes");
  const std::size_t e = node_count - n;
  std::vector<NodeId> node_of(n);
  if (n >= 1 && e >= n - 1) {
    for (AgentId i = 0; i < n; ++i) node_of[i] = 2 * i;
    return Placement(node_count, std::move(node_of));
  }
  // Gap g sits between agents g and g+1; largest first, ties to the smaller g.
  std::vector<std::size_t> gaps(n - 1);
  std::iota(gaps.begin(), gaps.end(), std::size_t{0});
  std::stable_sort(gaps.begin(), gaps.end(), [&](std::size_t a, std::size_t b) {
    return types[a + 1] - types[a] > types[b + 1] - types[b];
  });
  std::vector<char> split(n, 0);
  for (std::size_t k = 0; k < e; ++k) split[gaps[k]] = 1;
  NodeId next = 0;
  for (AgentId i = 0; i < n; ++i) {
    node_of[i] = next++;
    if (i + 1 < n && split[i]) ++next;
  }
  return Placement(node_count, std::move(node_of));
}

// Jump equilibrium for J-HIS-MDG when the graph contains K_{2,e}: the two
// extreme agents on u and v, the e shared neighbors left empty, the rest
// ascending on ascending free nodes.
inline std::optional<Placement> je_his_k2e(const Graph& graph, const TypeProfile& types) {
  const std::size_t n = types.size();
  if (n >= graph.node_count()) throw std::invalid_argument("je_his_k2e needs at least one empty node");
  const std::size_t e = graph.node_count() - n;
  if (n == 1) return Placement(graph.node_count(), {0});
  auto k2e = find_k2e(graph, e);
  if (!k2e) return std::nullopt;
  std::vector<NodeId> node_of(n, kNone);
  node_of[0] = k2e->u;
  node_of[n - 1] = k2e->v;
  std::vector<char> reserved(graph.node_count(), 0);
  for (NodeId s : k2e->shared) reserved[s] = 1;
  return detail::fill_ascending(graph.node_count(), std::move(node_of), reserved);
}

namespace detail {

// Five-path placement: extreme agent on p[0], opposite extreme on p[2], the
// agent next to the first extreme on p[4], p[1] and p[3] empty, every other
// neighbor of p[0] taken by an agent on the same side of the type midpoint.
// `upper` picks the side (agent n on p[0]) or its mirror (agent 1 on p[0]).
inline std::optional<Placement> five_path_placement(const Graph& graph, const TypeProfile& types,
                                                    const std::array<NodeId, 5>& p, bool upper) {
  const std::size_t n = types.size();
  if (n < 3) return std::nullopt;
  const double mid = (types.min() + types.max()) / 2.0;
  auto same_side = [&](AgentId i) { return upper ? types[i] >= mid : types[i] <= mid; };
  const AgentId top = upper ? static_cast<AgentId>(n - 1) : 0;
  const AgentId bottom = upper ? 0 : static_cast<AgentId>(n - 1);
  const AgentId runner_up = upper ? static_cast<AgentId>(n - 2) : 1;

  std::vector<NodeId> node_of(n, kNone);
  node_of[top] = p[0];
  node_of[bottom] = p[2];
  node_of[runner_up] = p[4];

  // Candidates for p[0]'s neighbors, nearest to `top` first.
  std::vector<AgentId> pool;
  for (AgentId k = 0; k < n; ++k) {
    AgentId i = upper ? static_cast<AgentId>(n - 1 - k) : k;
    if (node_of[i] == kNone && same_side(i)) pool.push_back(i);
  }
  std::size_t next = 0;
  for (NodeId w : graph.neighbors(p[0])) {
    if (w == p[1] || w == p[3]) continue;
    if (w == p[2] || w == p[4]) {
      if (!same_side(w == p[2] ? bottom : runner_up)) return std::nullopt;
      continue;
    }
    if (next == pool.size()) return std::nullopt;
    node_of[pool[next++]] = w;
  }
  std::vector<char> reserved(graph.node_count(), 0);
  reserved[p[1]] = reserved[p[3]] = 1;
  return fill_ascending(graph.node_count(), std::move(node_of), reserved);
}

// Two nodes touching every edge, if any.
inline std::optional<std::pair<NodeId, NodeId>> two_node_vertex_cover(const Graph& graph) {
  const auto n = static_cast<NodeId>(graph.node_count());
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      bool covers = true;
      for (auto [u, v] : graph.edges()) {
        if (u != a && u != b && v != a && v != b) {
          covers = false;
          break;
        }
      }
      if (covers) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Jump equilibrium for J-HIS-MDG with exactly two empty nodes:
//  1. the graph has a 4-cycle            -> je_his_k2e;
//  2. the graph has a five-node path     -> five-path placement;
//  3. otherwise (star, double star, star with one triangle) two nodes cover
//     every edge; leaving them empty isolates every agent;
//  4. if the five-path placement is blocked (u1 adjacent to u3 or u5 with the
//     wrong side there), improving jumps are run from it until none is left.
inline Placement je_his_two_empty(const Graph& graph, const TypeProfile& types) {
  const std::size_t n = types.size();
  if (graph.node_count() != n + 2) throw std::invalid_argument("je_his_two_empty needs exactly two empty nodes");
  if (auto k2e = je_his_k2e(graph, types)) return *k2e;

  const double mid = (types.min() + types.max()) / 2.0;
  std::size_t upper = 0, lower = 0;
  for (AgentId i = 0; i < n; ++i) {
    if (types[i] >= mid) ++upper;
    if (types[i] <= mid) ++lower;
  }
  const bool prefer_upper = upper >= lower;
  std::optional<Placement> found;
  detail::search_five_paths(graph, [&](const std::array<NodeId, 5>& p) {
    found = detail::five_path_placement(graph, types, p, prefer_upper);
    if (!found) found = detail::five_path_placement(graph, types, p, !prefer_upper);
    return found.has_value();
  });
  if (found) return *found;

  if (auto cover = detail::two_node_vertex_cover(graph)) {
    std::vector<char> reserved(graph.node_count(), 0);
    reserved[cover->first] = reserved[cover->second] = 1;
    return detail::fill_ascending(graph.node_count(), std::vector<NodeId>(n, kNone), reserved);
  }
  std::optional<std::array<NodeId, 5>> first_path;
  detail::search_five_paths(graph, [&](const std::array<NodeId, 5>& p) {
    first_path = p;
    return true;
  });
  if (!first_path) {
    throw std::runtime_error(
        "je_his_two_empty: graph has no 4-cycle, no five-node path and no two-node vertex cover");
  }
  std::vector<char> reserved(graph.node_count(), 0);
  reserved[(*first_path)[1]] = reserved[(*first_path)[3]] = 1;
  return detail::settle_jumps(graph, types,
                              detail::fill_ascending(graph.node_count(), std::vector<NodeId>(n, kNone), reserved));
}

}  // namespace schelling
