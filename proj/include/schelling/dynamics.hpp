#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "schelling/game.hpp"
#include "schelling/graph.hpp"

namespace schelling {

// Placement plus cached per-agent costs and CG friend counts. Holds the graph
// and the type profile by reference; both must outlive the state.
class GameState {
 public:
  GameState(const Graph& graph, const TypeProfile& types, Placement placement, GameSpec spec)
      : graph_(&graph), types_(&types), placement_(std::move(placement)), spec_(spec) {
    validate_instance(graph, types, placement_);
    const std::size_t n = graph.node_count();
    offset_.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) offset_[v + 1] = offset_[v] + static_cast<std::uint32_t>(graph.degree(v));
    nbr_id_.resize(offset_[n]);
    nbr_type_.assign(offset_[n], kEmptyType);
    rev_.resize(offset_[n]);
    for (NodeId v = 0; v < n; ++v) {
      auto list = graph.neighbors(v);
      for (std::size_t k = 0; k < list.size(); ++k) {
        const NodeId w = list[k];
        nbr_id_[offset_[v] + k] = w;
        auto other = graph.neighbors(w);
        rev_[offset_[v] + k] = offset_[w] + static_cast<std::uint32_t>(
                                                std::lower_bound(other.begin(), other.end(), v) - other.begin());
      }
    }
    node_type_.assign(n, kEmptyType);
    for (AgentId i = 0; i < types.size(); ++i) set_node_type(placement_.node_of(i), types[i]);
    cost_.resize(types.size());
    friends_.resize(types.size());
    summary_.resize(graph.node_count());
    occ_lo_.resize(types.size());
    occ_hi_.resize(types.size());
    occ_mean_.resize(types.size());
    for (NodeId v = 0; v < graph.node_count(); ++v) refresh_summary(v);
    for (AgentId i = 0; i < types.size(); ++i) refresh(i);
  }

  const Graph& graph() const { return *graph_; }
  const TypeProfile& types() const { return *types_; }
  const Placement& placement() const { return placement_; }
  const GameSpec& spec() const { return spec_; }
  std::size_t agent_count() const { return types_->size(); }

  double cost(AgentId i) const { return cost_[i]; }
  std::span<const double> costs() const { return cost_; }
  // Neighbors within the cutoff (d <= lambda); only maintained for CG.
  std::uint32_t friend_count(AgentId i) const { return friends_[i]; }

  double social_cost() const {
    double total = 0.0;
    for (double c : cost_) total += c;
    return total;
  }

  // Cost of agent i on node `at` when node `override_node` holds type
  // `override_type` (kEmptyType = empty). Same arithmetic as game-core.
  double cost_at(AgentId i, NodeId at, NodeId override_node, double override_type) const {
    CostAccumulator acc(spec_.model(), spec_.lambda());
    const double t = (*types_)[i];
    for (std::uint32_t k = offset_[at]; k < offset_[at + 1]; ++k) {
      const double tw = (nbr_id_[k] == override_node) ? override_type : nbr_type_[k];
      if (tw == kEmptyType) continue;
      acc.add(std::fabs(t - tw));
    }
    return acc.value(spec_.isolated_cost());
  }

  bool swap_profitable(AgentId a, AgentId b) const {
    const double ca = cost_[a], cb = cost_[b];
    if (ca <= 0.0 || cb <= 0.0) return false;
    const double ta = (*types_)[a], tb = (*types_)[b];
    if (ta == tb) return false;
    const NodeId pa = placement_.node_of(a), pb = placement_.node_of(b);
    return cost_below(a, pb, pa, tb, ca) && cost_below(b, pa, pb, ta, cb);
  }

  bool jump_profitable(AgentId a, NodeId target) const {
    const double ca = cost_[a];
    if (ca <= 0.0) return false;
    return cost_below(a, target, placement_.node_of(a), kEmptyType, ca);
  }

  // Exact tests for pairs whose nodes are not adjacent, so the moving agent
  // sees the target's current neighborhood unchanged.
  bool swap_profitable_apart(AgentId a, AgentId b) const {
    const double ca = cost_[a], cb = cost_[b];
    if (ca <= 0.0 || cb <= 0.0) return false;
    const double ta = (*types_)[a], tb = (*types_)[b];
    if (ta == tb) return false;
    return below_at(ta, placement_.node_of(b), ca) && below_at(tb, placement_.node_of(a), cb);
  }

  bool jump_profitable_apart(AgentId a, NodeId target) const {
    const double ca = cost_[a];
    return ca > 0.0 && below_at((*types_)[a], target, ca);
  }

  // Cheap necessary conditions for swap_profitable(a, b) and
  // jump_profitable(a, target). Only valid when the two nodes involved are
  // not adjacent; adjacent pairs must go straight to the exact test.
  bool swap_may_profit(AgentId a, AgentId b) const {
    switch (spec_.model()) {
      case CostModel::kMax: return swap_may_profit<CostModel::kMax>(a, b);
      case CostModel::kAverage: return swap_may_profit<CostModel::kAverage>(a, b);
      case CostModel::kCutoff: return swap_may_profit<CostModel::kCutoff>(a, b);
    }
    return true;
  }

  template <CostModel M>
  bool swap_may_profit(AgentId a, AgentId b) const {
    const double ca = cost_[a], cb = cost_[b];
    if (!(ca > 0.0 && cb > 0.0)) return false;
    const double ta = (*types_)[a], tb = (*types_)[b];
    return ta != tb && admits_agent<M>(ta, b, ca) && admits_agent<M>(tb, a, cb);
  }

  bool jump_may_profit(AgentId a, NodeId target) const {
    const double ca = cost_[a];
    return ca > 0.0 && admits((*types_)[a], summary_[target], ca);
  }

  bool profitable(const Move& m) const {
    placement_.check_move(m);
    return m.is_swap() ? swap_profitable(m.agent, m.target) : jump_profitable(m.agent, m.target);
  }

  // Summed cost decrease of the moving agents.
  double improvement(const Move& m) const {
    const AgentId a = m.agent;
    const NodeId pa = placement_.node_of(a);
    if (!m.is_swap()) return cost_[a] - cost_at(a, m.target, pa, kEmptyType);
    const AgentId b = m.target;
    const NodeId pb = placement_.node_of(b);
    return (cost_[a] - cost_at(a, pb, pa, (*types_)[b])) + (cost_[b] - cost_at(b, pa, pb, (*types_)[a]));
  }

  // Applies the move and refreshes caches of every agent whose neighborhood
  // changed. Returns the nodes whose occupant or neighborhood changed
  // (closed neighborhoods of the two affected nodes).
  std::vector<NodeId> apply(const Move& m) {
    placement_.check_move(m);
    const NodeId u = placement_.node_of(m.agent);
    const NodeId v = m.is_swap() ? placement_.node_of(m.target) : m.target;
    placement_.apply(m);
    set_node_type(u, placement_.is_empty(u) ? kEmptyType : (*types_)[placement_.agent_at(u)]);
    set_node_type(v, (*types_)[placement_.agent_at(v)]);

    std::vector<NodeId> touched;
    touched.reserve(graph_->degree(u) + graph_->degree(v) + 2);
    touched.push_back(u);
    touched.push_back(v);
    for (NodeId w : graph_->neighbors(u)) touched.push_back(w);
    for (NodeId w : graph_->neighbors(v)) touched.push_back(w);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (NodeId w : touched) refresh_summary(w);
    for (NodeId w : touched) {
      if (AgentId k = placement_.agent_at(w); k != kNone) refresh(k);
    }
    return touched;
  }

  // True when every cached value equals a from-scratch recomputation.
  bool caches_consistent() const {
    for (AgentId i = 0; i < agent_count(); ++i) {
      double fresh = hypothetical_cost(*graph_, *types_, placement_, spec_, i, placement_.node_of(i));
      if (fresh != cost_[i]) return false;
      if (spec_.model() == CostModel::kCutoff && count_friends(i) != friends_[i]) return false;
    }
    for (NodeId v = 0; v < graph_->node_count(); ++v) {
      const double expected = placement_.is_empty(v) ? kEmptyType : (*types_)[placement_.agent_at(v)];
      if (node_type_[v] != expected) return false;
      for (std::uint32_t k = offset_[v]; k < offset_[v + 1]; ++k)
        if (nbr_type_[k] != node_type_[nbr_id_[k]]) return false;
    }
    return true;
  }

  static constexpr double kEmptyType = -1.0;

 private:
  // Occupied-neighbor statistics of a node.
  struct NodeSummary {
    double min = 0.0, max = 0.0, sum = 0.0;
    std::uint32_t count = 0;
  };

  void set_node_type(NodeId v, double t) {
    node_type_[v] = t;
    for (std::uint32_t k = offset_[v]; k < offset_[v + 1]; ++k) nbr_type_[rev_[k]] = t;
  }

  // Cost of a type-t agent at node `at` (as currently occupied) < threshold.
  // Accumulates in the same order as cost_at, so results agree bit for bit.
  bool below_at(double t, NodeId at, double threshold) const {
    const double* x = nbr_type_.data() + offset_[at];
    const std::uint32_t deg = offset_[at + 1] - offset_[at];
    std::uint32_t count = 0;
    switch (spec_.model()) {
      case CostModel::kMax:
        for (std::uint32_t k = 0; k < deg; ++k) {
          if (x[k] == kEmptyType) continue;
          if (std::fabs(t - x[k]) >= threshold) return false;
          ++count;
        }
        return count > 0 || spec_.isolated_cost() < threshold;
      case CostModel::kAverage: {
        CostAccumulator acc(CostModel::kAverage, 0.0);
        for (std::uint32_t k = 0; k < deg; ++k) {
          if (x[k] != kEmptyType) acc.add(std::fabs(t - x[k]));
        }
        return acc.value(spec_.isolated_cost()) < threshold;
      }
      case CostModel::kCutoff: {
        const double lambda = spec_.lambda();
        std::uint32_t enemies = 0;
        for (std::uint32_t k = 0; k < deg; ++k) {
          const bool occupied = x[k] != kEmptyType;
          count += occupied;
          enemies += occupied & (std::fabs(t - x[k]) > lambda);
        }
        if (count == 0) return spec_.isolated_cost() < threshold;
        return static_cast<double>(enemies) / static_cast<double>(count) < threshold;
      }
    }
    return false;
  }

  void refresh_summary(NodeId v) {
    NodeSummary s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (std::uint32_t k = offset_[v]; k < offset_[v + 1]; ++k) {
      const double tw = nbr_type_[k];
      if (tw == kEmptyType) continue;
      s.min = std::min(s.min, tw);
      s.max = std::max(s.max, tw);
      s.sum += tw;
      ++s.count;
    }
    summary_[v] = s;
    if (AgentId k = placement_.agent_at(v); k != kNone) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      occ_lo_[k] = s.count ? s.min : nan;
      occ_hi_[k] = s.count ? s.max : nan;
      occ_mean_[k] = s.count ? s.sum / s.count : nan;
    }
  }

  // admits() against the node of agent k, from the flat per-agent copies.
  // NaN entries (no occupied neighbor) make every comparison pass.
  template <CostModel M>
  bool admits_agent(double t, AgentId k, double threshold) const {
    if constexpr (M == CostModel::kMax) {
      return !(std::fabs(t - occ_lo_[k]) >= threshold || std::fabs(t - occ_hi_[k]) >= threshold);
    } else if constexpr (M == CostModel::kAverage) {
      return !(std::fabs(t - occ_mean_[k]) >= threshold + 1e-9);
    } else {
      const double lambda = spec_.lambda();
      return !(occ_lo_[k] > t + lambda || occ_hi_[k] < t - lambda);
    }
  }

  // Necessary condition for an agent of type t to pay less than `threshold`
  // among the neighbors summarized by `s`.
  bool admits(double t, const NodeSummary& s, double threshold) const {
    if (s.count == 0) return spec_.isolated_cost() < threshold;
    switch (spec_.model()) {
      case CostModel::kMax:
        return std::max(std::fabs(t - s.min), std::fabs(t - s.max)) < threshold;
      case CostModel::kAverage:
        // mean |t - x| >= |t - mean x|; the margin absorbs rounding.
        return std::fabs(t - s.sum / s.count) < threshold + 1e-9;
      case CostModel::kCutoff:
        // All neighbors enemies means cost 1, which never improves.
        return !(s.min > t + spec_.lambda() || s.max < t - spec_.lambda());
    }
    return true;
  }

  // cost_at(...) < threshold, stopping early for MDG once a neighbor reaches it.
  bool cost_below(AgentId i, NodeId at, NodeId override_node, double override_type, double threshold) const {
    if (spec_.model() != CostModel::kMax) return cost_at(i, at, override_node, override_type) < threshold;
    const double t = (*types_)[i];
    bool any = false;
    for (std::uint32_t k = offset_[at]; k < offset_[at + 1]; ++k) {
      const double tw = (nbr_id_[k] == override_node) ? override_type : nbr_type_[k];
      if (tw == kEmptyType) continue;
      if (std::fabs(t - tw) >= threshold) return false;
      any = true;
    }
    return any || spec_.isolated_cost() < threshold;
  }

  std::uint32_t count_friends(AgentId i) const {
    std::uint32_t n = 0;
    const double t = (*types_)[i];
    for (NodeId w : graph_->neighbors(placement_.node_of(i))) {
      if (node_type_[w] != kEmptyType && std::fabs(t - node_type_[w]) <= spec_.lambda()) ++n;
    }
    return n;
  }

  void refresh(AgentId i) {
    cost_[i] = cost_at(i, placement_.node_of(i), kNone, kEmptyType);
    if (spec_.model() == CostModel::kCutoff) friends_[i] = count_friends(i);
  }

  const Graph* graph_;
  const TypeProfile* types_;
  Placement placement_;
  GameSpec spec_;
  std::vector<double> node_type_;
  // Adjacency in CSR form with the occupant type of every neighbor slot;
  // rev_[k] is the slot of the reverse edge.
  std::vector<std::uint32_t> offset_;
  std::vector<NodeId> nbr_id_;
  std::vector<double> nbr_type_;
  std::vector<std::uint32_t> rev_;
  std::vector<double> cost_;
  std::vector<std::uint32_t> friends_;
  std::vector<NodeSummary> summary_;
  // summary_ of each agent's node, indexed by agent.
  std::vector<double> occ_lo_, occ_hi_, occ_mean_;
};

// Every profitable move by exhaustive scan through game-core's is_profitable.
// Swaps come as (i, j) with i < j; jumps as (agent, empty node), both ascending.
inline std::vector<Move> profitable_moves(const GameState& state) {
  const Graph& g = state.graph();
  const TypeProfile& t = state.types();
  const Placement& p = state.placement();
  std::vector<Move> out;
  if (state.spec().is_swap()) {
    for (AgentId i = 0; i < t.size(); ++i)
      for (AgentId j = i + 1; j < t.size(); ++j)
        if (is_profitable(g, t, p, state.spec(), Move::swap(i, j))) out.push_back(Move::swap(i, j));
  } else {
    const auto empties = p.empty_nodes();
    for (AgentId i = 0; i < t.size(); ++i)
      for (NodeId v : empties)
        if (is_profitable(g, t, p, state.spec(), Move::jump(i, v))) out.push_back(Move::jump(i, v));
  }
  return out;
}

enum class MovePolicy : std::uint8_t { kUniformRandom, kFirstFound, kBestImprovement };

inline MovePolicy parse_policy(const std::string& text) {
  if (text == "random") return MovePolicy::kUniformRandom;
  if (text == "first") return MovePolicy::kFirstFound;
  if (text == "best") return MovePolicy::kBestImprovement;
  throw std::invalid_argument("unknown policy '" + text + "' (expected random, first or best)");
}

inline const char* policy_name(MovePolicy p) {
  switch (p) {
    case MovePolicy::kUniformRandom: return "random";
    case MovePolicy::kFirstFound: return "first";
    case MovePolicy::kBestImprovement: return "best";
  }
  return "?";
}

// The exact set of currently profitable moves, maintained across applied moves
// by rescanning only moves that involve a touched agent or empty node.
class ImprovingMoveSet {
 public:
  explicit ImprovingMoveSet(const GameState& state)
      : swap_(state.spec().is_swap()),
        agents_(state.agent_count()),
        nodes_(state.graph().node_count()),
        dirty_(agents_ + nodes_, 0),
        by_participant_(agents_ + nodes_) {
    rebuild(state);
  }

  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  Move at(std::size_t k) const { return decode(keys_[k]); }
  bool contains(const Move& m) const { return index_.count(encode(m)) != 0; }

  std::vector<Move> moves() const {
    std::vector<std::uint64_t> sorted = keys_;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Move> out;
    out.reserve(sorted.size());
    for (auto k : sorted) out.push_back(decode(k));
    return out;
  }

  Move smallest() const { return decode(*std::min_element(keys_.begin(), keys_.end())); }

  void rebuild(const GameState& state) {
    keys_.clear();
    index_.clear();
    for (auto& list : by_participant_) list.clear();
    if (swap_) {
      for (AgentId a = 0; a < agents_; ++a) scan_swaps(state, a, [a](AgentId b) { return b <= a; });
    } else {
      for (NodeId w : state.placement().empty_nodes()) scan_jumps_to(state, w, [](AgentId) { return false; });
    }
  }

  // `touched` is what GameState::apply returned for the move just applied.
  void update(const GameState& state, std::span<const NodeId> touched) {
    const Placement& p = state.placement();
    std::vector<AgentId> dirty_agents;
    std::vector<NodeId> dirty_empties;
    for (NodeId w : touched) {
      if (AgentId k = p.agent_at(w); k != kNone) {
        dirty_agents.push_back(k);
        dirty_[k] = 1;
      } else {
        dirty_empties.push_back(w);
      }
      if (!swap_) erase_participant(agents_ + w);
    }
    for (AgentId k : dirty_agents) erase_participant(k);

    if (swap_) {
      for (AgentId a : dirty_agents) {
        scan_swaps(state, a, [&](AgentId b) { return b == a || (dirty_[b] && b < a); });
      }
    } else {
      const auto empties = p.empty_nodes();
      for (AgentId a : dirty_agents)
        for (NodeId w : empties)
          if (state.jump_profitable(a, w)) insert(Move::jump(a, w));
      for (NodeId w : dirty_empties) scan_jumps_to(state, w, [&](AgentId b) { return dirty_[b] != 0; });
    }
    for (AgentId k : dirty_agents) dirty_[k] = 0;
  }

 private:
  // Profitable swaps between `a` and every partner not skipped. Non-adjacent
  // partners are screened by the cheap filter first.
  template <typename Skip>
  void scan_swaps(const GameState& state, AgentId a, Skip&& skip) {
    switch (state.spec().model()) {
      case CostModel::kMax: return scan_swaps_as<CostModel::kMax>(state, a, skip);
      case CostModel::kAverage: return scan_swaps_as<CostModel::kAverage>(state, a, skip);
      case CostModel::kCutoff: return scan_swaps_as<CostModel::kCutoff>(state, a, skip);
    }
  }

  template <CostModel M, typename Skip>
  void scan_swaps_as(const GameState& state, AgentId a, Skip&& skip) {
    if (state.cost(a) <= 0.0) return;
    const Placement& p = state.placement();
    const NodeId pa = p.node_of(a);
    for (AgentId b = 0; b < agents_; ++b) {
      if (!state.template swap_may_profit<M>(a, b) || skip(b)) continue;
      if (state.graph().has_edge(pa, p.node_of(b))) continue;
      if (state.swap_profitable_apart(a, b)) insert(Move::swap(std::min(a, b), std::max(a, b)));
    }
    for (NodeId w : state.graph().neighbors(pa)) {
      const AgentId b = p.agent_at(w);
      if (b == kNone || skip(b)) continue;
      if (state.swap_profitable(a, b)) insert(Move::swap(std::min(a, b), std::max(a, b)));
    }
  }

  // Profitable jumps of every agent not skipped into empty node `w`.
  template <typename Skip>
  void scan_jumps_to(const GameState& state, NodeId w, Skip&& skip) {
    const Placement& p = state.placement();
    for (AgentId b = 0; b < agents_; ++b) {
      if (!state.jump_may_profit(b, w) || skip(b)) continue;
      if (state.graph().has_edge(w, p.node_of(b))) continue;
      if (state.jump_profitable_apart(b, w)) insert(Move::jump(b, w));
    }
    for (NodeId v : state.graph().neighbors(w)) {
      const AgentId b = p.agent_at(v);
      if (b == kNone || skip(b)) continue;
      if (state.jump_profitable(b, w)) insert(Move::jump(b, w));
    }
  }

  std::uint64_t encode(const Move& m) const {
    const std::uint64_t width = swap_ ? agents_ : nodes_;
    return static_cast<std::uint64_t>(m.agent) * width + m.target;
  }

  Move decode(std::uint64_t key) const {
    const std::uint64_t width = swap_ ? agents_ : nodes_;
    const auto a = static_cast<AgentId>(key / width);
    const auto b = static_cast<std::uint32_t>(key % width);
    return swap_ ? Move::swap(a, b) : Move::jump(a, b);
  }

  void insert(const Move& m) {
    const std::uint64_t key = encode(m);
    if (!index_.emplace(key, keys_.size()).second) return;
    keys_.push_back(key);
    by_participant_[m.agent].push_back(key);
    by_participant_[swap_ ? m.target : agents_ + m.target].push_back(key);
  }

  void erase_key(std::uint64_t key) {
    auto it = index_.find(key);
    if (it == index_.end()) return;
    const std::size_t slot = it->second;
    index_.erase(it);
    if (slot + 1 != keys_.size()) {
      keys_[slot] = keys_.back();
      index_[keys_[slot]] = slot;
    }
    keys_.pop_back();
  }

  // Entries in the other participant's list may go stale; erase_key ignores them.
  void erase_participant(std::size_t id) {
    for (std::uint64_t key : by_participant_[id]) erase_key(key);
    by_participant_[id].clear();
  }

  bool swap_;
  std::size_t agents_;
  std::size_t nodes_;
  std::vector<char> dirty_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::vector<std::uint64_t>> by_participant_;
};

// Sum of type-distances over edges joining two agents.
// Accumulated in extended precision: single improving swaps can lower the
// total by one ulp of a distance, which a double total would not register.
inline long double potential_edge_sum(const GameState& state) {
  const Placement& p = state.placement();
  long double total = 0.0L;
  for (auto [u, v] : state.graph().edges()) {
    AgentId a = p.agent_at(u), b = p.agent_at(v);
    if (a != kNone && b != kNone) total += state.types().distance(a, b);
  }
  return total;
}

// Number of edges joining two agents that are friends (d <= lambda).
inline std::uint64_t potential_monochromatic(const GameState& state) {
  const Placement& p = state.placement();
  const double lambda = state.spec().lambda();
  std::uint64_t count = 0;
  for (auto [u, v] : state.graph().edges()) {
    AgentId a = p.agent_at(u), b = p.agent_at(v);
    if (a != kNone && b != kNone && state.types().distance(a, b) <= lambda) ++count;
  }
  return count;
}

// Agent costs in nonincreasing order.
inline std::vector<double> sorted_cost_vector(const GameState& state) {
  std::vector<double> out(state.costs().begin(), state.costs().end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline bool lexicographically_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Scalar summary used for potential traces: edge-sum (ADG), monochromatic
// edge count (CG), largest agent cost (MDG, the leading sorted-vector entry).
inline double scalar_potential(const GameState& state) {
  switch (state.spec().model()) {
    case CostModel::kAverage: return static_cast<double>(potential_edge_sum(state));
    case CostModel::kCutoff: return static_cast<double>(potential_monochromatic(state));
    case CostModel::kMax: {
      auto c = state.costs();
      return c.empty() ? 0.0 : *std::max_element(c.begin(), c.end());
    }
  }
  return 0.0;
}

struct DynamicsOptions {
  MovePolicy policy = MovePolicy::kUniformRandom;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10'000'000;
  std::ostream* trace = nullptr;  // one "SWAP i j" / "JUMP i v" line per applied move
  bool record_potential = false;
  // Called after each applied move.
  std::function<void(const Move&, const GameState&)> observer;
};

struct DynamicsResult {
  Placement final_placement;
  std::uint64_t steps = 0;
  bool converged = false;
  std::vector<double> potential_trace;  // initial value first, then one per step
  std::uint64_t seed = 0;
  static constexpr const char* kRngName = "mt19937_64";
};

// Improving-response dynamics: apply profitable moves chosen by the policy
// until none is left or max_steps moves were made. Mutates `state`.
inline DynamicsResult run_dynamics(GameState& state, const DynamicsOptions& options) {
  DynamicsResult result;
  result.seed = options.seed;
  std::mt19937_64 rng(options.seed);
  ImprovingMoveSet moves(state);
  if (options.record_potential) result.potential_trace.push_back(scalar_potential(state));

  auto choose = [&]() -> Move {
    switch (options.policy) {
      case MovePolicy::kUniformRandom: {
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        return moves.at(pick(rng));
      }
      case MovePolicy::kFirstFound: return moves.smallest();
      case MovePolicy::kBestImprovement: {
        auto all = moves.moves();
        Move best = all.front();
        double best_gain = state.improvement(best);
        for (std::size_t k = 1; k < all.size(); ++k) {
          double gain = state.improvement(all[k]);
          if (gain > best_gain) {
            best_gain = gain;
            best = all[k];
          }
        }
        return best;
      }
    }
    return moves.at(0);
  };

  while (result.steps < options.max_steps) {
    if (moves.empty()) {
      // Certify with a full rescan before declaring convergence.
      moves.rebuild(state);
      if (moves.empty()) break;
    }
    const Move m = choose();
    const auto touched = state.apply(m);
    moves.update(state, touched);
    ++result.steps;
    if (options.trace) *options.trace << m.to_string() << '\n';
    if (options.record_potential) result.potential_trace.push_back(scalar_potential(state));
    if (options.observer) options.observer(m, state);
  }
  if (result.steps >= options.max_steps && !moves.empty()) {
    result.converged = false;
  } else {
    moves.rebuild(state);
    result.converged = moves.empty();
  }
  result.final_placement = state.placement();
  return result;
}

inline DynamicsResult run_dynamics(GameState& state, MovePolicy policy, std::uint64_t seed,
                                   std::uint64_t max_steps) {
  DynamicsOptions options;
  options.policy = policy;
  options.seed = seed;
  options.max_steps = max_steps;
  return run_dynamics(state, options);
}

}  // namespace schelling
