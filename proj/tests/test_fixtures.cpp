#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "schelling/dynamics.hpp"
#include "schelling/fixtures.hpp"
#include "schelling/instance_io.hpp"
#include "schelling/oracle.hpp"
#include "support/reference.hpp"

using namespace schelling;

TEST(Fixtures, NamesAreUniqueAndFindable) {
  auto all = fixtures();
  EXPECT_EQ(all.size(), 11u);
  std::set<std::string> names;
  for (const auto& f : all) {
    EXPECT_TRUE(names.insert(f.name).second) << f.name;
    EXPECT_EQ(find_fixture(f.name)->name, f.name);
  }
  EXPECT_FALSE(find_fixture("nope").has_value());
}

TEST(Fixtures, PlacementFromSequence) {
  Placement p = placement_from_sequence({2, 0, 1});
  EXPECT_EQ(p.node_of(0), 2u);
  EXPECT_EQ(p.node_of(1), 0u);
  EXPECT_TRUE(p.is_empty(1));
  EXPECT_THROW(placement_from_sequence({1, 1}), std::invalid_argument);
  EXPECT_THROW(placement_from_sequence({3, 1}), std::invalid_argument);
}

class FixtureClaims : public ::testing::TestWithParam<std::string> {};

TEST_P(FixtureClaims, OracleConfirmsClaim) {
  const InstanceFixture f = *find_fixture(GetParam());
  const FixtureClaim& c = f.claim;
  if (c.placement) {
    const Verdict v = is_equilibrium(f.graph, f.types, *c.placement, f.spec);
    EXPECT_EQ(v.holds, c.placement_is_equilibrium);
    EXPECT_EQ(ref::is_equilibrium(ref::make_game(f.graph, f.types, f.spec), ref::nodes_of(*c.placement)),
              c.placement_is_equilibrium);
  }
  if (c.placement_cost) {
    EXPECT_NEAR(social_cost(f.graph, f.types, *c.placement, f.spec), *c.placement_cost, 1e-12);
  }
  if (c.witness) {
    EXPECT_TRUE(is_profitable(f.graph, f.types, *c.placement, f.spec, *c.witness));
  }
  if (!c.enumerable) return;
  const EquilibriumCostRange range = equilibrium_cost_range(f.graph, f.types, f.spec);
  if (c.no_equilibrium) { EXPECT_EQ(range.equilibria, 0u); }
  if (c.optimum_cost) { EXPECT_NEAR(range.optimum, *c.optimum_cost, 1e-12); }
  if (c.equilibrium_floor) {
    ASSERT_TRUE(range.best_equilibrium);
    EXPECT_GE(*range.best_equilibrium + 1e-12, *c.equilibrium_floor);
  }
  if (c.placement && c.placement_is_equilibrium) {
    ASSERT_TRUE(range.worst_equilibrium);
    EXPECT_GE(*range.worst_equilibrium + 1e-12, *c.placement_cost);
  }
}

INSTANTIATE_TEST_SUITE_P(All, FixtureClaims,
                         ::testing::Values("ring5-no-je-mdg", "ring5-no-je-adg", "mdg-poa-path", "cg-poa-path",
                                           "cg-poa-jump-uis", "cg-poa-jump-his", "adg-jump-poa-uis",
                                           "adg-jump-poa-his", "his-mdg-poa", "uis-mdg-pos", "mdg-pos-cliques"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(Fixtures, MdgPathPoaRatio) {
  auto f = fixture_mdg_poa_path(8);
  EquilibriumCostRange r = equilibrium_cost_range(f.graph, f.types, f.spec);
  EXPECT_EQ(r.optimum, 2.0);
  EXPECT_GE(*r.price_of_anarchy(), 3.0);  // (n - 2) / 2
  EXPECT_EQ(social_cost(f.graph, f.types, *f.claim.placement, f.spec) / r.optimum, 3.0);
}

TEST(Fixtures, UnboundedRatiosHaveZeroOptimum) {
  for (const char* name : {"cg-poa-path", "cg-poa-jump-uis", "cg-poa-jump-his", "adg-jump-poa-uis", "his-mdg-poa"}) {
    auto f = *find_fixture(name);
    EquilibriumCostRange r = equilibrium_cost_range(f.graph, f.types, f.spec);
    EXPECT_EQ(r.optimum, 0.0) << name;
    EXPECT_TRUE(std::isinf(*r.price_of_anarchy())) << name;
  }
}

TEST(Fixtures, UisMdgStabilityGap) {
  auto f = fixture_uis_mdg_pos(3);
  EquilibriumCostRange r = equilibrium_cost_range(f.graph, f.types, f.spec);
  EXPECT_NEAR(r.optimum, 2 * kFixtureEpsilon, 1e-12);
  EXPECT_GT(*r.price_of_stability(), 1000.0);
}

TEST(Fixtures, CliqueChainEquilibriaReachedByDynamicsRespectFloor) {
  auto f = fixture_mdg_pos_cliques(4);
  std::mt19937_64 rng(83);
  const std::size_t n = f.graph.node_count();
  for (int trial = 0; trial < 30; ++trial) {
    GameState s(f.graph, f.types, ref::random_placement(n, n, rng), f.spec);
    DynamicsResult r = run_dynamics(s, MovePolicy::kUniformRandom, trial, 1'000'000);
    ASSERT_TRUE(r.converged);
    EXPECT_GE(s.social_cost() + 1e-12, *f.claim.equilibrium_floor);
  }
}

TEST(Fixtures, ExportRoundTrip) {
  for (const auto& f : fixtures()) {
    std::stringstream s;
    write_instance(s, f.graph, f.types, f.claim.placement ? &*f.claim.placement : nullptr);
    Instance back = read_instance(s);
    EXPECT_EQ(back.graph.edges(), f.graph.edges());
    if (f.claim.placement) { EXPECT_EQ(*back.placement, *f.claim.placement); }
    EXPECT_EQ(back.types.size(), f.types.size());
  }
}
