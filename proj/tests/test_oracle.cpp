#include <gtest/gtest.h>

#include <random>

#include "schelling/constructors.hpp"
#include "schelling/fixtures.hpp"
#include "schelling/oracle.hpp"
#include "support/reference.hpp"

using namespace schelling;

TEST(IsEquilibrium, Examples) {
  auto b = fixture_mdg_poa_path(8);
  EXPECT_TRUE(is_equilibrium(b.graph, b.types, *b.claim.placement, b.spec).holds);

  const Graph p5 = make_path(5);
  const TypeProfile t({0.0, 0.2, 0.5, 0.6, 1.0});
  EXPECT_TRUE(is_equilibrium(p5, t, Placement::identity(5, 5), GameSpec::mdg(Deviation::kSwap)).holds);

  const Graph p4 = make_path(4);
  const TypeProfile alt({0.0, 0.0, 1.0, 1.0});
  Verdict v = is_equilibrium(p4, alt, Placement(4, {0, 2, 1, 3}), GameSpec::mdg(Deviation::kSwap));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->is_swap());
  // Only the two end agents gain by swapping.
  EXPECT_TRUE(is_profitable(p4, alt, Placement(4, {0, 2, 1, 3}), GameSpec::mdg(Deviation::kSwap), *v.witness));
  EXPECT_EQ(*v.witness, Move::swap(0, 3));
}

TEST(BruteForceOptimum, Examples) {
  for (const auto& f : {fixture_cg_poa_path(), fixture_his_mdg_poa()}) {
    OptimumResult r = brute_force_optimum(f.graph, f.types, f.spec);
    EXPECT_EQ(r.cost, 0.0) << f.name;
    EXPECT_EQ(social_cost(f.graph, f.types, r.placement, f.spec), 0.0);
  }
  OptimumResult r = brute_force_optimum(make_path(3), TypeProfile({0.0, 0.5, 1.0}), GameSpec::adg(Deviation::kSwap));
  EXPECT_EQ(r.cost, 1.5);
  EXPECT_EQ(r.stats.space, 6u);
}

TEST(BruteForceOptimum, BudgetIsEnforced) {
  const Graph g = make_torus(4, 4, 1);
  std::vector<double> t(16);
  for (int i = 0; i < 16; ++i) t[i] = i / 15.0;
  EXPECT_THROW(brute_force_optimum(g, TypeProfile(t), GameSpec::mdg(Deviation::kSwap)), BudgetExceeded);
  EXPECT_THROW(equilibrium_exists(make_path(5), TypeProfile({0.0, 0.1, 0.2, 0.3, 0.4}), GameSpec::mdg(Deviation::kSwap), 100),
               BudgetExceeded);
}

TEST(EquilibriumExists, RingHasNoJumpEquilibrium) {
  for (CostModel m : {CostModel::kMax, CostModel::kAverage}) {
    auto f = fixture_ring5(m);
    ExistenceResult r = equilibrium_exists(f.graph, f.types, f.spec);
    EXPECT_FALSE(r.equilibrium.has_value());
    EXPECT_EQ(r.stats.space, 60u);
    EXPECT_EQ(r.stats.evaluated, 60u);
  }
}

TEST(EquilibriumExists, SwapMdgAlwaysHasOne) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const Graph g = random_connected_graph(n, 0.3, rng);
    const TypeProfile t(ref::random_types(n, rng, trial % 2 == 0));
    ExistenceResult r = equilibrium_exists(g, t, GameSpec::mdg(Deviation::kSwap));
    ASSERT_TRUE(r.equilibrium);
    EXPECT_TRUE(ref::is_equilibrium(ref::make_game(g, t, GameSpec::mdg(Deviation::kSwap)), ref::nodes_of(*r.equilibrium)));
  }
}

TEST(MinMaxEdge, Examples) {
  EXPECT_EQ(min_maxedge(make_path(3), TypeProfile({0.0, 0.5, 1.0})).value, 0.5);
  EXPECT_EQ(min_maxedge(make_star(4), TypeProfile({0.3, 0.3, 0.3, 0.3})).value, 0.0);
  const TypeProfile quarter({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
  const Graph ring = make_ring(4);
  EXPECT_EQ(max_edge_cost(ring, quarter, Placement::identity(4, 4)), 1.0);
  MaxEdgeResult r = min_maxedge(ring, quarter);
  EXPECT_EQ(r.value, ref::enumerate(ref::make_game(ring, quarter, GameSpec::mdg(Deviation::kSwap))).min_maxedge);
  EXPECT_DOUBLE_EQ(r.value, 2.0 / 3.0);
}

TEST(Oracle, AgreesWithLabeledEnumeration) {
  std::mt19937_64 rng(61);
  const std::vector<GameSpec> specs{GameSpec::mdg(Deviation::kSwap), GameSpec::adg(Deviation::kSwap),
                                    GameSpec::cg(0.25, Deviation::kSwap),
                                    GameSpec::mdg(Deviation::kJump, Isolation::kHappy),
                                    GameSpec::adg(Deviation::kJump, Isolation::kUnhappy),
                                    GameSpec::cg(0.4, Deviation::kJump, Isolation::kHappy)};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const Graph g = random_connected_graph(n, 0.35, rng);
    for (const auto& spec : specs) {
      const std::size_t agents = spec.is_swap() ? n : 1 + rng() % (n - 1);
      const TypeProfile t(ref::random_types(agents, rng, trial % 2 == 0));
      const ref::Summary want = ref::enumerate(ref::make_game(g, t, spec));

      OptimumResult opt = brute_force_optimum(g, t, spec);
      EXPECT_NEAR(opt.cost, want.optimum, 1e-12) << spec.label();
      EXPECT_EQ(social_cost(g, t, opt.placement, spec), opt.cost);
      EXPECT_EQ(min_maxedge(g, t).value, want.min_maxedge);

      ExistenceResult ex = equilibrium_exists(g, t, spec);
      EXPECT_EQ(ex.equilibrium.has_value(), want.equilibria > 0) << spec.label();

      EquilibriumCostRange range = equilibrium_cost_range(g, t, spec);
      EXPECT_NEAR(range.optimum, want.optimum, 1e-12);
      EXPECT_EQ(range.equilibria > 0, want.equilibria > 0);
      EXPECT_LE(range.equilibria, want.equilibria);
      EXPECT_LE(range.stats.space, want.labeled);
      if (want.best_eq) {
        EXPECT_NEAR(*range.best_equilibrium, *want.best_eq, 1e-12);
        EXPECT_NEAR(*range.worst_equilibrium, *want.worst_eq, 1e-12);
      }
    }
  }
}

TEST(Oracle, OptimumNeverExceedsConstructedEquilibria) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const Graph g = random_connected_graph(n, 0.3, rng);
    const TypeProfile t(ref::random_types(n, rng));
    const auto spec = GameSpec::mdg(Deviation::kSwap);
    EXPECT_LE(brute_force_optimum(g, t, spec).cost, social_cost(g, t, se_mdg_bfs(g, t), spec));
  }
}

TEST(Oracle, PlacementSpaceCountsTypeClasses) {
  // 5 nodes, 3 agents of which two share a type: 5! / (2! * 2!) = 30.
  ExistenceResult r = equilibrium_exists(make_path(5), TypeProfile({0.2, 0.2, 0.9}), GameSpec::mdg(Deviation::kJump));
  EXPECT_EQ(r.stats.space, 30u);
}

TEST(EquilibriumCostRange, Ratios) {
  EquilibriumCostRange r;
  r.optimum = 2.0;
  r.best_equilibrium = 3.0;
  r.worst_equilibrium = 6.0;
  EXPECT_DOUBLE_EQ(*r.price_of_stability(), 1.5);
  EXPECT_DOUBLE_EQ(*r.price_of_anarchy(), 3.0);
  r.optimum = 0.0;
  EXPECT_TRUE(std::isinf(*r.price_of_anarchy()));
  r.best_equilibrium = 0.0;
  EXPECT_EQ(*r.price_of_stability(), 1.0);
  EquilibriumCostRange none;
  EXPECT_FALSE(none.price_of_anarchy().has_value());
}
