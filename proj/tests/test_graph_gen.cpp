#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "schelling/graph_gen.hpp"
#include "support/reference.hpp"

using namespace schelling;

TEST(Generators, SmallFamilies) {
  Graph p = make_path(3);
  EXPECT_EQ(p.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  Graph r = make_ring(5);
  EXPECT_EQ(r.edge_count(), 5u);
  EXPECT_TRUE(r.is_regular());
  EXPECT_EQ(r.min_degree(), 2u);
  EXPECT_EQ(make_clique(4).edge_count(), 6u);
  Graph s = make_star(6);
  EXPECT_EQ(s.node_count(), 7u);
  EXPECT_EQ(s.degree(0), 6u);
  EXPECT_EQ(make_path(1).edge_count(), 0u);
}

TEST(Generators, RejectInvalidSizes) {
  EXPECT_THROW(make_path(0), std::invalid_argument);
  EXPECT_THROW(make_ring(2), std::invalid_argument);
  EXPECT_THROW(make_torus(2, 5, 1), std::invalid_argument);
  EXPECT_THROW(make_torus(5, 5, 0), std::invalid_argument);
  EXPECT_THROW(make_torus(4, 4, 2), std::invalid_argument);
}

TEST(Torus, ExperimentGrids) {
  Graph t1 = make_torus(50, 50, 1);
  EXPECT_EQ(t1.node_count(), 2500u);
  EXPECT_EQ(t1.edge_count(), 10000u);
  EXPECT_TRUE(t1.is_regular());
  EXPECT_EQ(t1.min_degree(), 8u);
  EXPECT_EQ(make_torus(50, 50, 2).min_degree(), 24u);
  EXPECT_EQ(make_torus(50, 50, 3).max_degree(), 48u);
  Graph vn = make_von_neumann_torus(50, 50);
  EXPECT_TRUE(vn.is_regular());
  EXPECT_EQ(vn.min_degree(), 4u);
  ASSERT_TRUE(t1.grid().has_value());
  EXPECT_EQ(t1.grid()->width, 50u);
}

TEST(Torus, ThreeByThreeIsComplete) {
  Graph t = make_torus(3, 3, 1);
  EXPECT_EQ(t.edge_count(), 36u);
  for (NodeId u = 0; u < 9; ++u)
    for (NodeId v = 0; v < 9; ++v)
      if (u != v) { EXPECT_TRUE(t.has_edge(u, v)); }
}

TEST(Torus, NeighborsMatchWrappedChebyshevDistance) {
  const std::size_t w = 7, h = 5;
  Graph t = make_torus(w, h, 1);
  auto wrap = [](long a, long m) { return std::min((a % m + m) % m, (-a % m + m) % m); };
  for (NodeId u = 0; u < w * h; ++u)
    for (NodeId v = 0; v < w * h; ++v) {
      if (u == v) continue;
      const long dx = wrap(static_cast<long>(u % w) - static_cast<long>(v % w), w);
      const long dy = wrap(static_cast<long>(u / w) - static_cast<long>(v / w), h);
      EXPECT_EQ(t.has_edge(u, v), std::max(dx, dy) <= 1) << u << " " << v;
    }
}

TEST(Torus, AllSizesAreRegular) {
  for (std::size_t w = 3; w <= 8; ++w)
    for (std::size_t h = 3; h <= 8; ++h) {
      Graph g = make_torus(w, h, 1);
      EXPECT_TRUE(g.is_regular());
      EXPECT_EQ(g.min_degree(), 8u);
      EXPECT_EQ(make_von_neumann_torus(w, h).min_degree(), 4u);
      EXPECT_TRUE(make_von_neumann_torus(w, h).is_regular());
    }
}

TEST(RandomGraph, ConnectedAndSimple) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    Graph g = random_connected_graph(1 + rng() % 40, 0.1, rng);
    EXPECT_GE(g.edge_count(), g.node_count() - 1);
  }
}

TEST(FindK2e, Examples) {
  auto k = find_k2e(make_clique(4), 2);
  ASSERT_TRUE(k.has_value());
  Graph c4 = make_clique(4);
  for (NodeId s : k->shared) {
    EXPECT_TRUE(c4.has_edge(k->u, s));
    EXPECT_TRUE(c4.has_edge(k->v, s));
  }
  EXPECT_FALSE(find_k2e(make_star(5), 2).has_value());
  EXPECT_TRUE(find_k2e(make_path(3), 1).has_value());
  EXPECT_THROW(find_k2e(make_path(3), 0), std::invalid_argument);
}

TEST(FindK2e, AgreesWithExhaustivePairScan) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 28;
    Graph g = random_connected_graph(n, trial % 3 == 0 ? 0.0 : 0.08, rng);
    for (std::size_t e : {1u, 2u, 3u}) {
      auto found = find_k2e(g, e);
      EXPECT_EQ(found.has_value(), ref::has_k2e(g, e)) << "n=" << n << " e=" << e;
      if (!found) continue;
      EXPECT_NE(found->u, found->v);
      ASSERT_EQ(found->shared.size(), e);
      for (NodeId s : found->shared) {
        EXPECT_NE(s, found->u);
        EXPECT_NE(s, found->v);
        EXPECT_TRUE(g.has_edge(found->u, s) && g.has_edge(found->v, s));
      }
    }
  }
}

TEST(FindFivePath, Examples) {
  auto p = find_five_path(make_path(5));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, (std::array<NodeId, 5>{0, 1, 2, 3, 4}));
  EXPECT_FALSE(find_five_path(make_star(6)).has_value());
  // Triangle 0-1-2 with pendant chain 2-3-4.
  Graph tri(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  EXPECT_TRUE(find_five_path(tri).has_value());
  EXPECT_TRUE(ref::has_five_path(tri));
}

TEST(FindFivePath, AgreesWithExhaustiveSearchAndNormalizes) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    Graph g = random_connected_graph(n, trial % 2 ? 0.0 : 0.15, rng);
    auto p = find_five_path(g);
    EXPECT_EQ(p.has_value(), ref::has_five_path(g));
    if (!p) continue;
    std::set<NodeId> distinct(p->begin(), p->end());
    EXPECT_EQ(distinct.size(), 5u);
    for (int k = 0; k < 4; ++k) EXPECT_TRUE(g.has_edge((*p)[k], (*p)[k + 1]));
    auto outside = [&](NodeId v) {
      std::size_t c = 0;
      for (NodeId w : g.neighbors(v))
        if (!distinct.count(w)) ++c;
      return c;
    };
    EXPECT_LE(outside((*p)[0]), outside((*p)[4]));
    // Reversing a path swaps its end counts, so a qualifying path always exists
    // and the returned one must be the lexicographically smallest.
    std::array<NodeId, 5> q{};
    std::function<bool(int)> smaller = [&](int k) -> bool {
      if (k == 5) {
        std::set<NodeId> s(q.begin(), q.end());
        auto out = [&](NodeId v) {
          std::size_t c = 0;
          for (NodeId w : g.neighbors(v))
            if (!s.count(w)) ++c;
          return c;
        };
        return out(q[0]) <= out(q[4]) && q < *p;
      }
      for (NodeId v = 0; v < n; ++v) {
        if (std::find(q.begin(), q.begin() + k, v) != q.begin() + k) continue;
        if (k > 0 && !g.has_edge(q[k - 1], v)) continue;
        q[k] = v;
        if (smaller(k + 1)) return true;
      }
      return false;
    };
    EXPECT_FALSE(smaller(0));
  }
}
