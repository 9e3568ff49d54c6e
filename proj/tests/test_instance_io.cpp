#include <gtest/gtest.h>

#include <sstream>

#include "schelling/instance_io.hpp"

using namespace schelling;

TEST(InstanceIo, ReadsGraphTypesAndPlacement) {
  std::istringstream in("# a path\n3 2 2\n0 1\n1 2\n0.25 0.75\n2 0\n");
  Instance inst = read_instance(in);
  EXPECT_EQ(inst.graph.node_count(), 3u);
  EXPECT_EQ(inst.types.size(), 2u);
  ASSERT_TRUE(inst.placement);
  EXPECT_EQ(inst.placement->node_of(0), 2u);
  EXPECT_EQ(inst.placement->node_of(1), 0u);
  EXPECT_TRUE(inst.warnings.empty());
}

TEST(InstanceIo, UnsortedTypesAreRenumberedWithWarning) {
  std::istringstream in("3 2 3\n0 1\n1 2\n0.9 0.1 0.5\n0 1 2\n");
  Instance inst = read_instance(in);
  ASSERT_EQ(inst.warnings.size(), 1u);
  EXPECT_EQ(inst.types[0], 0.1);
  // Agent with type 0.1 was second in the input and sits on node 1.
  EXPECT_EQ(inst.placement->node_of(0), 1u);
  EXPECT_EQ(inst.placement->node_of(2), 0u);
  EXPECT_EQ(placement_line(inst.types, *inst.placement), "0 1 2");
}

TEST(InstanceIo, RoundTrip) {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  TypeProfile t({0.1, 1.0 / 3.0, 0.8});
  Placement p(4, {3, 0, 2});
  std::stringstream s;
  write_instance(s, g, t, &p);
  Instance back = read_instance(s);
  EXPECT_EQ(back.graph.edges(), g.edges());
  EXPECT_EQ(std::vector<double>(back.types.values().begin(), back.types.values().end()),
            std::vector<double>(t.values().begin(), t.values().end()));
  EXPECT_EQ(*back.placement, p);
}

TEST(InstanceIo, RejectsMalformedInput) {
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_instance(in), std::invalid_argument) << text;
  };
  bad("");
  bad("3 2\n");
  bad("3 2 4\n0 1\n1 2\n0 0 0 0\n");
  bad("3 2 2\n0 1\n");
  bad("3 2 2\n0 1\n1 5\n0 1\n");
  bad("3 2 2\n0 1\n1 2\n0 x\n");
  bad("3 2 2\n0 1\n1 2\n0 1 1\n");
  bad("3 2 2\n0 1\n1 2\n0 1\n0 0\n");
  bad("3 2 2\n0 1\n1 2\n0 1.5\n");
  bad("3 1 2\n0 1\n0 1\n");
}

TEST(InstanceIo, MissingFileFails) { EXPECT_THROW(load_instance("/nonexistent/instance.txt"), std::runtime_error); }
