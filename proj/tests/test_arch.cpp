// Copyright the fidls contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fidls/arch.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace fidls;

TEST(Arch, ThreeNodePath) {
  const ArchGraph g = load_arch("0 1\n1 2\n");
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.dist(0, 2), 2);
  EXPECT_EQ(g.diameter(), 2);
  EXPECT_EQ(g.max_degree(), 2);
}

TEST(Arch, TokyoQuotedFacts) {
  const ArchGraph g = testutil::tokyo();
  EXPECT_EQ(g.num_nodes(), 20);
  EXPECT_EQ(g.dist(2, 10), 2);
  for (const Edge e : {Edge{1, 6}, Edge{6, 10}, Edge{5, 6}, Edge{2, 6},
                       Edge{6, 7}, Edge{6, 11}, Edge{2, 7}}) {
    EXPECT_TRUE(g.has_edge(e.first, e.second))
        << e.first << "-" << e.second << " missing";
  }
}

TEST(Arch, GridShapes) {
  const ArchGraph big = grid_arch(19, 19);
  EXPECT_EQ(big.num_nodes(), 361);
  EXPECT_EQ(big.max_degree(), 4);

  const ArchGraph path = grid_arch(1, 7);
  EXPECT_EQ(path.num_nodes(), 7);
  EXPECT_EQ(path.diameter(), 6);
  EXPECT_EQ(path.max_degree(), 2);

  const ArchGraph g33 = grid_arch(3, 3);
  EXPECT_EQ(g33.edges().size(), 12U);
  EXPECT_EQ(g33.diameter(), 4);
}

TEST(Arch, DistMatchesFloydWarshallOnRandomGraphs) {
  for (unsigned seed = 1; seed <= 8; ++seed) {
    const int n = 10 + static_cast<int>(seed) * 5;
    const auto edges = testutil::random_connected_graph(n, 0.08, seed);
    const ArchGraph g = ArchGraph::from_edges(edges);
    const auto oracle = testutil::floyd_warshall(n, edges);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        ASSERT_EQ(g.dist(u, v), oracle[static_cast<std::size_t>(u)]
                                      [static_cast<std::size_t>(v)])
            << "seed " << seed << " pair " << u << "," << v;
      }
    }
  }
}

TEST(Arch, EdgeDistanceInvariants) {
  const ArchGraph g = testutil::tokyo();
  for (const auto& [u, v] : g.edges()) {
    EXPECT_EQ(g.dist(u, v), 1);
  }
  for (int u = 0; u < g.num_nodes(); ++u) {
    EXPECT_EQ(g.dist(u, u), 0);
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (u != v && !g.has_edge(u, v)) {
        EXPECT_GE(g.dist(u, v), 2);
      }
    }
  }
}

TEST(Arch, RejectsBadGraphs) {
  EXPECT_THROW(load_arch("0 0\n"), GraphError);
  EXPECT_THROW(load_arch("0 1\n2 3\n"), GraphError);
  EXPECT_THROW(load_arch("0\n"), ParseError);
  EXPECT_THROW(load_arch(""), GraphError);
}

TEST(Arch, CommentsAndDuplicatesInEdgeFiles) {
  const ArchGraph g = load_arch("# a path\n0 1\n1 2  # tail\n0 1\n");
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.edges().size(), 2U);
}

TEST(Arch, BundledDeviceFilesLoad) {
  const ArchGraph rochester =
      load_arch_file(testutil::data_path("arch/rochester.edges"));
  EXPECT_EQ(rochester.num_nodes(), 53);
  const ArchGraph sycamore =
      load_arch_file(testutil::data_path("arch/sycamore.edges"));
  EXPECT_EQ(sycamore.num_nodes(), 53);
  EXPECT_LE(sycamore.max_degree(), 4);
}
