#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schelling/game.hpp"
#include "schelling/graph.hpp"
#include "schelling/graph_gen.hpp"

namespace schelling {

// What a fixture asserts about its instance. Every present field is checked
// by the oracle in the test suite.
struct FixtureClaim {
  std::string statement;
  bool no_equilibrium = false;
  // A specific profile: an equilibrium when placement_is_equilibrium,
  // otherwise a reference profile that `witness` improves on.
  std::optional<Placement> placement;
  bool placement_is_equilibrium = true;
  std::optional<double> placement_cost;
  std::optional<Move> witness;
  std::optional<double> optimum_cost;
  // Every equilibrium costs at least this much.
  std::optional<double> equilibrium_floor;
  // Small enough for exhaustive enumeration.
  bool enumerable = true;
};

struct InstanceFixture {
  std::string name;
  Graph graph;
  TypeProfile types;
  GameSpec spec;
  FixtureClaim claim;
};

inline constexpr double kFixtureEpsilon = 1e-3;

// Placement of a path read left to right: entry k is the agent (1-based, in
// sorted type order) on node k, or 0 for an empty node.
inline Placement placement_from_sequence(const std::vector<int>& sequence) {
  std::size_t agents = 0;
  for (int a : sequence)
    if (a > 0) ++agents;
  std::vector<NodeId> node_of(agents, kNone);
  for (NodeId v = 0; v < sequence.size(); ++v) {
    const int a = sequence[v];
    if (a == 0) continue;
    if (a < 0 || static_cast<std::size_t>(a) > agents || node_of[a - 1] != kNone) {
      throw std::invalid_argument("bad agent sequence");
    }
    node_of[a - 1] = v;
  }
  return Placement(sequence.size(), std::move(node_of));
}

// 5-ring, types (0, 1/3, 1), two empty nodes: no jump equilibrium.
inline InstanceFixture fixture_ring5(CostModel model) {
  InstanceFixture f;
  f.name = model == CostModel::kMax ? "ring5-no-je-mdg" : "ring5-no-je-adg";
  f.graph = make_ring(5);
  f.types = TypeProfile({0.0, 1.0 / 3.0, 1.0});
  f.spec = GameSpec(model, Deviation::kJump, Isolation::kUnhappy);
  f.claim.statement = "no jump equilibrium exists";
  f.claim.no_equilibrium = true;
  return f;
}

// Even path, half type 0 and half type 1, pattern 0011 0011 ...: a swap
// equilibrium of cost n-2 against an optimum of 2.
inline InstanceFixture fixture_mdg_poa_path(std::size_t n = 8) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("mdg-poa-path needs an even n >= 4");
  InstanceFixture f;
  f.name = "mdg-poa-path";
  f.graph = make_path(n);
  std::vector<double> t(n, 0.0);
  for (std::size_t i = n / 2; i < n; ++i) t[i] = 1.0;
  f.types = TypeProfile(t);
  f.spec = GameSpec::mdg(Deviation::kSwap);
  // Type-0 agents are 0..n/2-1, type-1 agents n/2..n-1; hand them out in pairs.
  std::vector<NodeId> node_of(n);
  AgentId zero = 0, one = static_cast<AgentId>(n / 2);
  for (NodeId v = 0; v < n; ++v) node_of[(v / 2) % 2 == 0 ? zero++ : one++] = v;
  f.claim.statement = "pattern 0011... is a swap equilibrium of cost n-2; optimum 2";
  f.claim.placement = Placement(n, node_of);
  f.claim.placement_cost = static_cast<double>(n - 2);
  f.claim.optimum_cost = 2.0;
  f.claim.enumerable = n <= 12;
  return f;
}

// 6-path, t(i) = (i-1)/5, lambda = 2/5: sequence (1,3,4,5,6,2) is a swap
// equilibrium of cost 3/2, the sorted order costs 0.
inline InstanceFixture fixture_cg_poa_path() {
  InstanceFixture f;
  f.name = "cg-poa-path";
  f.graph = make_path(6);
  f.types = TypeProfile({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
  f.spec = GameSpec::cg(0.4, Deviation::kSwap);
  f.claim.statement = "(1,3,4,5,6,2) is a swap equilibrium of cost 3/2; optimum 0";
  f.claim.placement = placement_from_sequence({1, 3, 4, 5, 6, 2});
  f.claim.placement_cost = 1.5;
  f.claim.optimum_cost = 0.0;
  return f;
}

// 7-path jump versions. UIS: the swap instance with an empty node after agent 2.
// HIS: t(4) lowered to 3/5 - eps, sequence (1,3,5,4,6,empty,2).
inline InstanceFixture fixture_cg_poa_jump(Isolation isolation) {
  InstanceFixture f;
  f.graph = make_path(7);
  f.spec = GameSpec::cg(0.4, Deviation::kJump, isolation);
  f.claim.placement_cost = 1.5;
  f.claim.optimum_cost = 0.0;
  if (isolation == Isolation::kUnhappy) {
    f.name = "cg-poa-jump-uis";
    f.types = TypeProfile({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    f.claim.placement = placement_from_sequence({1, 3, 4, 5, 6, 2, 0});
    f.claim.statement = "(1,3,4,5,6,2,empty) is a jump equilibrium of cost 3/2; optimum 0";
  } else {
    f.name = "cg-poa-jump-his";
    f.types = TypeProfile({0.0, 0.2, 0.4, 0.6 - kFixtureEpsilon, 0.8, 1.0});
    f.claim.placement = placement_from_sequence({1, 3, 5, 4, 6, 0, 2});
    f.claim.statement = "(1,3,5,4,6,empty,2) is a jump equilibrium of cost 3/2; optimum 0";
  }
  return f;
}

// 7-path, four type-0 and two type-1 agents: (3,4,5,6,empty,1,2) is a jump
// equilibrium of cost 1 under either isolation variant; optimum 0.
inline InstanceFixture fixture_adg_jump_poa(Isolation isolation) {
  InstanceFixture f;
  f.name = isolation == Isolation::kUnhappy ? "adg-jump-poa-uis" : "adg-jump-poa-his";
  f.graph = make_path(7);
  f.types = TypeProfile({0.0, 0.0, 0.0, 0.0, 1.0, 1.0});
  f.spec = GameSpec::adg(Deviation::kJump, isolation);
  f.claim.statement = "(3,4,5,6,empty,1,2) is a jump equilibrium of cost 1; optimum 0";
  f.claim.placement = placement_from_sequence({3, 4, 5, 6, 0, 1, 2});
  f.claim.placement_cost = 1.0;
  f.claim.optimum_cost = 0.0;
  return f;
}

// K4 on {0,1,2,3} with a tail 0-4-5. Three type-0 agents on 0, 4, 5 and the
// two type-1 agents inside the clique: jump equilibrium of cost 3; optimum 0.
inline InstanceFixture fixture_his_mdg_poa() {
  InstanceFixture f;
  f.name = "his-mdg-poa";
  f.graph = Graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {4, 5}});
  f.types = TypeProfile({0.0, 0.0, 0.0, 1.0, 1.0});
  f.spec = GameSpec::mdg(Deviation::kJump, Isolation::kHappy);
  f.claim.statement = "type-0 agents on the tail are a jump equilibrium of cost 3; optimum 0";
  f.claim.placement = Placement(6, {0, 4, 5, 1, 2});
  f.claim.placement_cost = 3.0;
  f.claim.optimum_cost = 0.0;
  return f;
}

// Three m-cliques G1, G2, G3 plus a universal node u (node 0); m agents of
// type 0, m of type 1 and one of type 1-eps under J-UIS-MDG.
inline InstanceFixture fixture_uis_mdg_pos(std::size_t m = 3) {
  if (m < 3) throw std::invalid_argument("uis-mdg-pos needs m >= 3");
  InstanceFixture f;
  f.name = "uis-mdg-pos";
  const std::size_t nodes = 3 * m + 1;
  std::vector<Edge> edges;
  for (NodeId v = 1; v < nodes; ++v) edges.emplace_back(0, v);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto base = static_cast<NodeId>(1 + c * m);
    for (NodeId a = 0; a < m; ++a)
      for (NodeId b = a + 1; b < m; ++b) edges.emplace_back(base + a, base + b);
  }
  f.graph = Graph(nodes, edges);
  std::vector<double> t(m, 0.0);
  t.push_back(1.0 - kFixtureEpsilon);
  t.insert(t.end(), m, 1.0);
  f.types = TypeProfile(t);
  f.spec = GameSpec::mdg(Deviation::kJump, Isolation::kUnhappy);

  // Agents: 0..m-1 type 0, m type 1-eps, m+1..2m type 1.
  std::vector<NodeId> node_of(2 * m + 1);
  for (AgentId i = 0; i < m; ++i) node_of[i] = 1 + i;
  node_of[m] = 0;
  for (AgentId i = 0; i < m; ++i) node_of[m + 1 + i] = static_cast<NodeId>(1 + m + i);
  const double eps = kFixtureEpsilon;
  const double md = static_cast<double>(m);
  f.claim.statement = "G1 type 0, G2 type 1, u holding 1-eps is a jump equilibrium; optimum 2 eps";
  f.claim.placement = Placement(nodes, node_of);
  f.claim.placement_cost = md * (1.0 - eps) + md * eps + (1.0 - eps);
  f.claim.optimum_cost = 2.0 * eps;
  // No cheaper equilibrium exists (checked exhaustively at m = 3).
  f.claim.equilibrium_floor = *f.claim.placement_cost;
  f.claim.enumerable = m <= 3;
  return f;
}

// Cliques K1..K4 of sizes m+1..m+4 joined by the path u1-u2-u3-u4 (the first
// node of each clique), clique types 1/2, 1, eps, 2/3 under S-MDG. The
// clique-pure profile is not an equilibrium, and every equilibrium costs at least (m+1)/6.
inline InstanceFixture fixture_mdg_pos_cliques(std::size_t m = 4) {
  if (m < 1) throw std::invalid_argument("mdg-pos-cliques needs m >= 1");
  InstanceFixture f;
  f.name = "mdg-pos-cliques";
  const double eps = kFixtureEpsilon;
  const double clique_type[4] = {0.5, 1.0, eps, 2.0 / 3.0};
  std::vector<Edge> edges;
  std::vector<NodeId> first(4);
  std::vector<double> t;
  NodeId base = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    const std::size_t size = m + c + 1;
    first[c] = base;
    for (NodeId a = 0; a < size; ++a)
      for (NodeId b = a + 1; b < size; ++b) edges.emplace_back(base + a, base + b);
    t.insert(t.end(), size, clique_type[c]);
    base += static_cast<NodeId>(size);
  }
  for (std::size_t c = 0; c + 1 < 4; ++c) edges.emplace_back(first[c], first[c + 1]);
  f.graph = Graph(base, edges);
  f.types = TypeProfile(t);
  f.spec = GameSpec::mdg(Deviation::kSwap);

  // Sorted agents: eps block, 1/2 block, 2/3 block, 1 block.
  const std::size_t size[4] = {m + 1, m + 2, m + 3, m + 4};
  const std::size_t sorted_start[4] = {size[2], size[2] + size[0] + size[3], 0, size[2] + size[0]};
  std::vector<NodeId> node_of(base);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t k = 0; k < size[c]; ++k) node_of[sorted_start[c] + k] = first[c] + static_cast<NodeId>(k);
  }
  f.claim.statement = "clique-pure profile costs 19/6 - 3 eps but u1/u4 swap improves it; equilibria cost >= (m+1)/6";
  f.claim.placement = Placement(base, node_of);
  f.claim.placement_is_equilibrium = false;
  f.claim.placement_cost = 19.0 / 6.0 - 3.0 * eps;
  f.claim.witness = Move::swap(static_cast<AgentId>(sorted_start[0]), static_cast<AgentId>(sorted_start[3]));
  f.claim.equilibrium_floor = static_cast<double>(m + 1) / 6.0;
  f.claim.enumerable = false;
  return f;
}

inline std::vector<InstanceFixture> fixtures() {
  return {fixture_ring5(CostModel::kMax),
          fixture_ring5(CostModel::kAverage),
          fixture_mdg_poa_path(8),
          fixture_cg_poa_path(),
          fixture_cg_poa_jump(Isolation::kUnhappy),
          fixture_cg_poa_jump(Isolation::kHappy),
          fixture_adg_jump_poa(Isolation::kUnhappy),
          fixture_adg_jump_poa(Isolation::kHappy),
          fixture_his_mdg_poa(),
          fixture_uis_mdg_pos(3),
          fixture_mdg_pos_cliques(4)};
}

inline std::optional<InstanceFixture> find_fixture(const std::string& name) {
  for (auto& f : fixtures())
    if (f.name == name) return f;
  return std::nullopt;
}

}  // namespace schelling
