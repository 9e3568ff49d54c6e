#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/graph.hpp"

namespace schelling {

// Agent type-values in [0,1], kept nondecreasing. Agent i is the i-th smallest
// value; `original_index(i)` recovers the position it had in the input.
class TypeProfile {
 public:
  TypeProfile() = default;

  explicit TypeProfile(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("type profile needs at least one agent");
    for (double t : values) {
      if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("type-value " + std::to_string(t) + " outside [0,1]");
      }
    }
    input_index_.resize(values.size());
    std::iota(input_index_.begin(), input_index_.end(), std::size_t{0});
    std::stable_sort(input_index_.begin(), input_index_.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    values_.reserve(values.size());
    for (std::size_t k : input_index_) values_.push_back(values[k]);
    was_sorted_ = std::is_sorted(values.begin(), values.end());
  }

  std::size_t size() const { return values_.size(); }
  double operator[](AgentId i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  double distance(AgentId i, AgentId j) const { return std::fabs(values_[i] - values_[j]); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  bool was_sorted() const { return was_sorted_; }
  std::size_t original_index(AgentId i) const { return input_index_[i]; }

 private:
  std::vector<double> values_;
  std::vector<std::size_t> input_index_;
  bool was_sorted_ = true;
};

// A swap of two agents, or a jump of one agent to an empty node.
struct Move {
  enum class Kind : std::uint8_t { kSwap, kJump };

  Kind kind = Kind::kSwap;
  AgentId agent = 0;
  std::uint32_t target = 0;  // partner agent (swap) or destination node (jump)

  static Move swap(AgentId i, AgentId j) { return {Kind::kSwap, i, j}; }
  static Move jump(AgentId i, NodeId v) { return {Kind::kJump, i, v}; }

  bool is_swap() const { return kind == Kind::kSwap; }

  std::string to_string() const {
    return (is_swap() ? "SWAP " : "JUMP ") + std::to_string(agent) + " " + std::to_string(target);
  }

  friend bool operator==(const Move&, const Move&) = default;
};

// Injective assignment of agents to nodes.
class Placement {
 public:
  Placement() = default;

  Placement(std::size_t node_count, std::vector<NodeId> node_of_agent)
      : node_of_agent_(std::move(node_of_agent)), agent_of_node_(node_count, kNone) {
    if (node_of_agent_.size() > node_count) {
      throw std::invalid_argument("more agents than nodes");
    }
    for (AgentId i = 0; i < node_of_agent_.size(); ++i) {
      NodeId v = node_of_agent_[i];
      if (v >= node_count) throw std::invalid_argument("node index " + std::to_string(v) + " out of range");
      if (agent_of_node_[v] != kNone) {
        throw std::invalid_argument("node " + std::to_string(v) + " assigned twice");
      }
      agent_of_node_[v] = i;
    }
  }

  // Agent i on node i.
  static Placement identity(std::size_t agent_count, std::size_t node_count) {
    std::vector<NodeId> nodes(agent_count);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    return Placement(node_count, std::move(nodes));
  }

  std::size_t agent_count() const { return node_of_agent_.size(); }
  std::size_t node_count() const { return agent_of_node_.size(); }
  std::size_t empty_count() const { return node_count() - agent_count(); }

  NodeId node_of(AgentId i) const { return node_of_agent_[i]; }
  AgentId agent_at(NodeId v) const { return agent_of_node_[v]; }
  bool is_empty(NodeId v) const { return agent_of_node_[v] == kNone; }

  std::span<const NodeId> node_of_agent() const { return node_of_agent_; }
  std::span<const AgentId> agent_of_node() const { return agent_of_node_; }

  std::vector<NodeId> empty_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < agent_of_node_.size(); ++v) {
      if (agent_of_node_[v] == kNone) out.push_back(v);
    }
    return out;
  }

  void check_move(const Move& move) const {
    if (move.agent >= agent_count()) throw std::invalid_argument("move agent out of range");
    if (move.is_swap()) {
      if (move.target >= agent_count()) throw std::invalid_argument("swap partner out of range");
      if (move.target == move.agent) throw std::invalid_argument("swap needs two distinct agents");
    } else {
      if (move.target >= node_count()) throw std::invalid_argument("jump target out of range");
      if (!is_empty(move.target)) throw std::invalid_argument("jump target is occupied");
    }
  }

  void apply(const Move& move) {
    check_move(move);
    if (move.is_swap()) {
      NodeId a = node_of_agent_[move.agent];
      NodeId b = node_of_agent_[move.target];
      node_of_agent_[move.agent] = b;
      node_of_agent_[move.target] = a;
      agent_of_node_[a] = move.target;
      agent_of_node_[b] = move.agent;
    } else {
      agent_of_node_[node_of_agent_[move.agent]] = kNone;
      node_of_agent_[move.agent] = move.target;
      agent_of_node_[move.target] = move.agent;
    }
  }

  friend bool operator==(const Placement& a, const Placement& b) {
    return a.node_of_agent_ == b.node_of_agent_ && a.agent_of_node_.size() == b.agent_of_node_.size();
  }

 private:
  std::vector<NodeId> node_of_agent_;
  std::vector<AgentId> agent_of_node_;
};

inline Placement apply_move(Placement placement, const Move& move) {
  placement.apply(move);
  return placement;
}

enum class CostModel : std::uint8_t { kMax, kAverage, kCutoff };
enum class Deviation : std::uint8_t { kSwap, kJump };
enum class Isolation : std::uint8_t { kUnhappy, kHappy };

// Cost model, deviation rule and isolation cost. The isolation variant is kept
// for swap games too but only matters once an agent has no occupied neighbor.
class GameSpec {
 public:
  GameSpec() = default;

  GameSpec(CostModel model, Deviation deviation, Isolation isolation = Isolation::kUnhappy,
           std::optional<double> lambda = std::nullopt)
      : model_(model), deviation_(deviation), isolation_(isolation), lambda_(lambda) {
    if ((model == CostModel::kCutoff) != lambda.has_value()) {
      throw std::invalid_argument("cutoff lambda is required for CG and only for CG");
    }
    if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) {
      throw std::invalid_argument("lambda outside [0,1]");
    }
  }

  static GameSpec mdg(Deviation d, Isolation iso = Isolation::kUnhappy) { return {CostModel::kMax, d, iso}; }
  static GameSpec adg(Deviation d, Isolation iso = Isolation::kUnhappy) { return {CostModel::kAverage, d, iso}; }
  static GameSpec cg(double lambda, Deviation d, Isolation iso = Isolation::kUnhappy) {
    return {CostModel::kCutoff, d, iso, lambda};
  }

  CostModel model() const { return model_; }
  Deviation deviation() const { return deviation_; }
  Isolation isolation() const { return isolation_; }
  double lambda() const { return lambda_.value_or(1.0); }
  bool is_swap() const { return deviation_ == Deviation::kSwap; }

  GameSpec with_model(CostModel model, std::optional<double> lambda = std::nullopt) const {
    return GameSpec(model, deviation_, isolation_, lambda);
  }

  double isolated_cost() const { return isolation_ == Isolation::kUnhappy ? 1.0 : 0.0; }

  // "S-MDG", "J-UIS-CG(0.1)", ...
  std::string label() const {
    std::string out = is_swap() ? "S-" : (isolation_ == Isolation::kUnhappy ? "J-UIS-" : "J-HIS-");
    switch (model_) {
      case CostModel::kMax: out += "MDG"; break;
      case CostModel::kAverage: out += "ADG"; break;
      case CostModel::kCutoff: {
        std::ostringstream s;
        s << "CG(" << *lambda_ << ")";
        out += s.str();
        break;
      }
    }
    return out;
  }

  friend bool operator==(const GameSpec&, const GameSpec&) = default;

 private:
  CostModel model_ = CostModel::kMax;
  Deviation deviation_ = Deviation::kSwap;
  Isolation isolation_ = Isolation::kUnhappy;
  std::optional<double> lambda_;
};

// Correctly rounded sum (Shewchuk's exact partials, as in Python's fsum).
// Equal exact sums give equal results, whatever the order or grouping.
inline double exact_sum(std::span<const double> values) {
  // Non-overlapping partials of finite doubles never exceed about 40.
  std::array<double, 64> partials{};
  std::size_t used = 0;
  for (double x : values) {
    std::size_t kept = 0;
    for (std::size_t k = 0; k < used; ++k) {
      double y = partials[k];
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[kept++] = lo;
      x = hi;
    }
    partials[kept] = x;
    used = kept + 1;
  }
  // Add partials from the top, then fix the half-way rounding case.
  if (used == 0) return 0.0;
  std::size_t k = used - 1;
  double hi = partials[k];
  double lo = 0.0;
  while (k > 0) {
    const double x = hi;
    const double y = partials[--k];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (k > 0 && ((lo < 0.0 && partials[k - 1] < 0.0) || (lo > 0.0 && partials[k - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

// Folds neighbor type-distances into one agent cost.
class CostAccumulator {
 public:
  CostAccumulator(CostModel model, double lambda) : model_(model), lambda_(lambda) {}

  void add(double d) {
    switch (model_) {
      case CostModel::kMax: acc_ = std::max(acc_, d); break;
      case CostModel::kAverage:
        if (count_ < kInline) {
          inline_[count_] = d;
        } else {
          if (spill_.empty()) spill_.assign(inline_.begin(), inline_.end());
          spill_.push_back(d);
        }
        break;
      case CostModel::kCutoff: if (d > lambda_) acc_ += 1.0; break;
    }
    ++count_;
  }

  std::size_t count() const { return count_; }

  double value(double isolated_cost) const {
    if (count_ == 0) return isolated_cost;
    if (model_ == CostModel::kMax) return acc_;
    if (model_ == CostModel::kAverage) {
      const std::span<double> d = count_ <= kInline ? std::span<double>(inline_.data(), count_)
                                                    : std::span<double>(spill_);
      return exact_sum(d) / static_cast<double>(count_);
    }
    return acc_ / static_cast<double>(count_);
  }

 private:
  static constexpr std::size_t kInline = 16;
  CostModel model_;
  double lambda_;
  double acc_ = 0.0;
  std::size_t count_ = 0;
  mutable std::array<double, kInline> inline_{};
  mutable std::vector<double> spill_;
};

inline void validate_instance(const Graph& graph, const TypeProfile& types, const Placement& placement) {
  if (placement.node_count() != graph.node_count()) {
    throw std::invalid_argument("placement covers " + std::to_string(placement.node_count()) +
                                " nodes, graph has " + std::to_string(graph.node_count()));
  }
  if (placement.agent_count() != types.size()) {
    throw std::invalid_argument("placement has " + std::to_string(placement.agent_count()) +
                                " agents, type profile has " + std::to_string(types.size()));
  }
}

// Cost `agent` would pay on node `at`, reading occupants from `placement`
// except that node `override_node` is treated as holding `override_agent`
// (kNone = empty). Passing override_node = kNone evaluates the placement as is.
inline double hypothetical_cost(const Graph& graph, const TypeProfile& types, const Placement& placement,
                                const GameSpec& spec, AgentId agent, NodeId at,
                                NodeId override_node = kNone, AgentId override_agent = kNone) {
  CostAccumulator acc(spec.model(), spec.lambda());
  const double t = types[agent];
  for (NodeId w : graph.neighbors(at)) {
    AgentId k = (w == override_node) ? override_agent : placement.agent_at(w);
    if (k == kNone || k == agent) continue;
    acc.add(std::fabs(t - types[k]));
  }
  return acc.value(spec.isolated_cost());
}

inline double agent_cost(const Graph& graph, const TypeProfile& types, const Placement& placement,
                         const GameSpec& spec, AgentId agent) {
  validate_instance(graph, types, placement);
  if (agent >= types.size()) throw std::invalid_argument("agent index out of range");
  return hypothetical_cost(graph, types, placement, spec, agent, placement.node_of(agent));
}

inline double social_cost(const Graph& graph, const TypeProfile& types, const Placement& placement,
                          const GameSpec& spec) {
  validate_instance(graph, types, placement);
  double total = 0.0;
  for (AgentId i = 0; i < types.size(); ++i) {
    total += hypothetical_cost(graph, types, placement, spec, i, placement.node_of(i));
  }
  return total;
}

inline std::vector<double> agent_costs(const Graph& graph, const TypeProfile& types, const Placement& placement,
                                       const GameSpec& spec) {
  validate_instance(graph, types, placement);
  std::vector<double> out(types.size());
  for (AgentId i = 0; i < types.size(); ++i) {
    out[i] = hypothetical_cost(graph, types, placement, spec, i, placement.node_of(i));
  }
  return out;
}

// Largest type-distance over edges joining two agents; 1 if no two agents are adjacent.
inline double max_edge_cost(const Graph& graph, const TypeProfile& types, const Placement& placement) {
  validate_instance(graph, types, placement);
  double best = -1.0;
  for (auto [u, v] : graph.edges()) {
    AgentId a = placement.agent_at(u), b = placement.agent_at(v);
    if (a != kNone && b != kNone) best = std::max(best, types.distance(a, b));
  }
  return best < 0.0 ? 1.0 : best;
}

// Costs of the moving agents after `move`, in move order (one entry for a jump).
struct MoveCosts {
  double agent_before = 0.0, agent_after = 0.0;
  double partner_before = 0.0, partner_after = 0.0;
};

inline MoveCosts move_costs(const Graph& graph, const TypeProfile& types, const Placement& placement,
                            const GameSpec& spec, const Move& move) {
  validate_instance(graph, types, placement);
  placement.check_move(move);
  MoveCosts c;
  const AgentId i = move.agent;
  const NodeId from = placement.node_of(i);
  c.agent_before = hypothetical_cost(graph, types, placement, spec, i, from);
  if (move.is_swap()) {
    const AgentId j = move.target;
    const NodeId other = placement.node_of(j);
    c.agent_after = hypothetical_cost(graph, types, placement, spec, i, other, from, j);
    c.partner_before = hypothetical_cost(graph, types, placement, spec, j, other);
    c.partner_after = hypothetical_cost(graph, types, placement, spec, j, from, other, i);
  } else {
    c.agent_after = hypothetical_cost(graph, types, placement, spec, i, move.target, from, kNone);
  }
  return c;
}

// Strict improvement for every moving agent; exact double comparison.
inline bool is_profitable(const Graph& graph, const TypeProfile& types, const Placement& placement,
                          const GameSpec& spec, const Move& move) {
  MoveCosts c = move_costs(graph, types, placement, spec, move);
  if (!(c.agent_after < c.agent_before)) return false;
  return !move.is_swap() || c.partner_after < c.partner_before;
}

// Agents on nodes adjacent to `agent`'s node.
inline std::vector<AgentId> neighborhood(const Graph& graph, const Placement& placement, AgentId agent) {
  std::vector<AgentId> out;
  for (NodeId w : graph.neighbors(placement.node_of(agent))) {
    if (AgentId k = placement.agent_at(w); k != kNone) out.push_back(k);
  }
  return out;
}

// Parses "mdg", "adg" or "cg:LAMBDA".
inline std::pair<CostModel, std::optional<double>> parse_cost_model(const std::string& text) {
  if (text == "mdg" || text == "MDG") return {CostModel::kMax, std::nullopt};
  if (text == "adg" || text == "ADG") return {CostModel::kAverage, std::nullopt};
  if (text.rfind("cg:", 0) == 0 || text.rfind("CG:", 0) == 0) {
    std::size_t used = 0;
    double lambda = 0.0;
    try {
      lambda = std::stod(text.substr(3), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 3) throw std::invalid_argument("bad cutoff in '" + text + "'");
    return {CostModel::kCutoff, lambda};
  }
  throw std::invalid_argument("unknown cost model '" + text + "' (expected mdg, adg or cg:LAMBDA)");
}

}  // namespace schelling
