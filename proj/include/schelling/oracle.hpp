#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/game.hpp"
#include "schelling/graph.hpp"

namespace schelling {

// Outcome of an exhaustive equilibrium check.
struct Verdict {
  bool holds = true;
  std::optional<Move> witness;  // a profitable deviation when !holds
};

// Scans every swap (i < j) or every (agent, empty node) jump in ascending order.
inline Verdict is_equilibrium(const Graph& graph, const TypeProfile& types, const Placement& placement,
                              const GameSpec& spec) {
  validate_instance(graph, types, placement);
  const auto n = static_cast<AgentId>(types.size());
  if (spec.is_swap()) {
    for (AgentId i = 0; i < n; ++i)
      for (AgentId j = i + 1; j < n; ++j)
        if (is_profitable(graph, types, placement, spec, Move::swap(i, j))) return {false, Move::swap(i, j)};
  } else {
    const auto empties = placement.empty_nodes();
    for (AgentId i = 0; i < n; ++i)
      for (NodeId v : empties)
        if (is_profitable(graph, types, placement, spec, Move::jump(i, v))) return {false, Move::jump(i, v)};
  }
  return {true, std::nullopt};
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

struct EnumerationStats {
  std::uint64_t space = 0;       // distinct placements up to permuting equal-type agents
  std::uint64_t evaluated = 0;   // complete placements actually evaluated
};

namespace detail {

// Number of ways to label the nodes with agent classes (equal type-values) and
// "empty": node_count! / (e! * prod class_size!). Saturates at UINT64_MAX.
inline std::uint64_t placement_space(std::size_t node_count, const std::vector<std::size_t>& class_sizes) {
  long double total = 1.0L;
  std::size_t remaining = node_count;
  auto choose = [&](std::size_t k) {
    for (std::size_t r = 1; r <= k; ++r) total = total * static_cast<long double>(remaining - k + r) / r;
    remaining -= k;
  };
  std::size_t agents = 0;
  for (std::size_t c : class_sizes) agents += c;
  choose(node_count - agents);
  for (std::size_t c : class_sizes) choose(c);
  if (total >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(std::llround(total));
}

// Depth-first enumeration of placements node by node. Each node receives an
// empty slot or the next unused agent of some type class, so placements that
// differ only by permuting equal-type agents are visited once (the visited
// representative has the lexicographically smallest node_of_agent).
class PlacementEnumerator {
 public:
  PlacementEnumerator(const Graph& graph, const TypeProfile& types, std::uint64_t budget)
      : graph_(graph), types_(types) {
    if (types.size() > graph.node_count()) throw std::invalid_argument("more agents than nodes");
    for (AgentId i = 0; i < types.size(); ++i) {
      if (i == 0 || types[i] != types[i - 1]) classes_.emplace_back();
      classes_.back().push_back(i);
    }
    std::vector<std::size_t> sizes;
    for (const auto& c : classes_) sizes.push_back(c.size());
    stats_.space = placement_space(graph.node_count(), sizes);
    if (stats_.space > budget) {
      throw BudgetExceeded("enumeration space " + std::to_string(stats_.space) + " exceeds budget " +
                           std::to_string(budget));
    }
    used_.assign(classes_.size(), 0);
    node_of_.assign(types.size(), kNone);
    agent_at_.assign(graph.node_count(), kNone);
    last_neighbor_.resize(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      NodeId last = v;
      for (NodeId w : graph.neighbors(v)) last = std::max(last, w);
      last_neighbor_[v] = last;
    }
    finalized_at_.resize(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) finalized_at_[last_neighbor_[v]].push_back(v);
  }

  // `step(node)` is called after node `node` got its occupant and returns
  // false to prune; `leaf()` sees each complete assignment.
  void run(const std::function<bool(NodeId)>& step, const std::function<void()>& leaf) {
    step_ = &step;
    leaf_ = &leaf;
    recurse(0, graph_.node_count() - types_.size());
  }

  const std::vector<NodeId>& node_of() const { return node_of_; }
  const std::vector<AgentId>& agent_at() const { return agent_at_; }
  const std::vector<NodeId>& finalized_at(NodeId v) const { return finalized_at_[v]; }
  const EnumerationStats& stats() const { return stats_; }

 private:
  void recurse(NodeId v, std::size_t empties_left) {
    if (v == graph_.node_count()) {
      ++stats_.evaluated;
      (*leaf_)();
      return;
    }
    if (empties_left > 0) {
      agent_at_[v] = kNone;
      if ((*step_)(v)) recurse(v + 1, empties_left - 1);
    }
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (used_[c] == classes_[c].size()) continue;
      const AgentId a = classes_[c][used_[c]++];
      agent_at_[v] = a;
      node_of_[a] = v;
      if ((*step_)(v)) recurse(v + 1, empties_left);
      node_of_[a] = kNone;
      --used_[c];
    }
    agent_at_[v] = kNone;
  }

  const Graph& graph_;
  const TypeProfile& types_;
  std::vector<std::vector<AgentId>> classes_;
  std::vector<std::size_t> used_;
  std::vector<NodeId> node_of_;
  std::vector<AgentId> agent_at_;
  std::vector<NodeId> last_neighbor_;
  std::vector<std::vector<NodeId>> finalized_at_;
  const std::function<bool(NodeId)>* step_ = nullptr;
  const std::function<void()>* leaf_ = nullptr;
  EnumerationStats stats_;
};

// Cost of the occupant of `v` from a raw node->agent table.
inline double occupant_cost(const Graph& graph, const TypeProfile& types, const GameSpec& spec,
                            const std::vector<AgentId>& agent_at, NodeId v) {
  const AgentId a = agent_at[v];
  CostAccumulator acc(spec.model(), spec.lambda());
  for (NodeId w : graph.neighbors(v)) {
    if (agent_at[w] != kNone) acc.add(types.distance(a, agent_at[w]));
  }
  return acc.value(spec.isolated_cost());
}

inline bool lex_smaller(std::span<const NodeId> a, std::span<const NodeId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

struct OptimumResult {
  Placement placement;
  double cost = 0.0;
  EnumerationStats stats;
};

// Exact social optimum. Branches are pruned once the summed cost of agents
// whose neighborhoods are complete exceeds the incumbent. Ties go to the
// lexicographically smallest node_of_agent.
inline OptimumResult brute_force_optimum(const Graph& graph, const TypeProfile& types, const GameSpec& spec,
                                         std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::PlacementEnumerator en(graph, types, budget);
  std::vector<double> partial(graph.node_count() + 1, 0.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> best_nodes;
  // Pruning slack absorbs summation-order rounding; the final comparison is exact.
  constexpr double kSlack = 1e-9;

  auto step = [&](NodeId v) {
    double sum = partial[v];
    for (NodeId u : en.finalized_at(v)) {
      if (en.agent_at()[u] != kNone) sum += detail::occupant_cost(graph, types, spec, en.agent_at(), u);
    }
    partial[v + 1] = sum;
    return sum <= best + kSlack;
  };
  auto leaf = [&]() {
    Placement p(graph.node_count(), en.node_of());
    const double c = social_cost(graph, types, p, spec);
    if (c < best || (c == best && detail::lex_smaller(en.node_of(), best_nodes))) {
      best = c;
      best_nodes = en.node_of();
    }
  };
  en.run(step, leaf);
  return {Placement(graph.node_count(), best_nodes), best, en.stats()};
}

struct ExistenceResult {
  std::optional<Placement> equilibrium;
  EnumerationStats stats;
};

// First equilibrium in enumeration order, or certified absence.
inline ExistenceResult equilibrium_exists(const Graph& graph, const TypeProfile& types, const GameSpec& spec,
                                          std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::PlacementEnumerator en(graph, types, budget);
  ExistenceResult out;
  auto step = [&](NodeId) { return !out.equilibrium.has_value(); };
  auto leaf = [&]() {
    if (out.equilibrium) return;
    Placement p(graph.node_count(), en.node_of());
    if (is_equilibrium(graph, types, p, spec).holds) out.equilibrium = std::move(p);
  };
  en.run(step, leaf);
  out.stats = en.stats();
  return out;
}

struct MaxEdgeResult {
  Placement placement;
  double value = 1.0;
  EnumerationStats stats;
};

// Exact minimizer of max_edge_cost (bandwidth-style), pruning on the largest
// distance over edges whose endpoints are both decided.
inline MaxEdgeResult min_maxedge(const Graph& graph, const TypeProfile& types,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::PlacementEnumerator en(graph, types, budget);
  std::vector<double> partial(graph.node_count() + 1, 0.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> best_nodes;
  auto step = [&](NodeId v) {
    double worst = partial[v];
    const AgentId a = en.agent_at()[v];
    if (a != kNone) {
      for (NodeId w : graph.neighbors(v)) {
        if (w < v && en.agent_at()[w] != kNone) worst = std::max(worst, types.distance(a, en.agent_at()[w]));
      }
    }
    partial[v + 1] = worst;
    return worst <= best;
  };
  auto leaf = [&]() {
    Placement p(graph.node_count(), en.node_of());
    const double c = max_edge_cost(graph, types, p);
    if (c < best || (c == best && detail::lex_smaller(en.node_of(), best_nodes))) {
      best = c;
      best_nodes = en.node_of();
    }
  };
  en.run(step, leaf);
  return {Placement(graph.node_count(), best_nodes), best, en.stats()};
}

// Optimum and the cheapest / most expensive equilibria of one game.
struct EquilibriumCostRange {
  double optimum = 0.0;
  Placement optimum_placement;
  std::uint64_t equilibria = 0;
  std::optional<double> best_equilibrium;
  std::optional<double> worst_equilibrium;
  std::optional<Placement> best_equilibrium_placement;
  std::optional<Placement> worst_equilibrium_placement;
  EnumerationStats stats;

  // Ratios are infinite when the optimum is 0 and some equilibrium costs more.
  std::optional<double> price_of_anarchy() const { return ratio(worst_equilibrium); }
  std::optional<double> price_of_stability() const { return ratio(best_equilibrium); }

 private:
  std::optional<double> ratio(const std::optional<double>& eq) const {
    if (!eq) return std::nullopt;
    if (optimum == 0.0) return *eq == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return *eq / optimum;
  }
};

inline EquilibriumCostRange equilibrium_cost_range(const Graph& graph, const TypeProfile& types,
                                                   const GameSpec& spec,
                                                   std::uint64_t budget = kDefaultEnumerationBudget) {
  detail::PlacementEnumerator en(graph, types, budget);
  EquilibriumCostRange out;
  out.optimum = std::numeric_limits<double>::infinity();
  auto step = [](NodeId) { return true; };
  auto leaf = [&]() {
    Placement p(graph.node_count(), en.node_of());
    const double c = social_cost(graph, types, p, spec);
    if (c < out.optimum) {
      out.optimum = c;
      out.optimum_placement = p;
    }
    if (!is_equilibrium(graph, types, p, spec).holds) return;
    ++out.equilibria;
    if (!out.best_equilibrium || c < *out.best_equilibrium) {
      out.best_equilibrium = c;
      out.best_equilibrium_placement = p;
    }
    if (!out.worst_equilibrium || c > *out.worst_equilibrium) {
      out.worst_equilibrium = c;
      out.worst_equilibrium_placement = p;
    }
  };
  en.run(step, leaf);
  out.stats = en.stats();
  return out;
}

}  // namespace schelling
