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

#include "fidls/verify.hpp"

#include "fidls/isomorph.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace fidls;

namespace {

// Straight-line recomputation of the linear map with plain bool rows.
std::vector<std::vector<bool>> naive_gf2(const Circuit& c, int n) {
  std::vector<std::vector<bool>> m(static_cast<std::size_t>(n),
                                   std::vector<bool>(static_cast<std::size_t>(n),
                                                     false));
  for (int i = 0; i < n; ++i) {
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
  }
  for (const Gate& g : c.gates) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(g.target)][static_cast<std::size_t>(j)] =
          m[static_cast<std::size_t>(g.target)][static_cast<std::size_t>(j)] ^
          m[static_cast<std::size_t>(g.control)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

bool same_matrix(const Gf2Map& a, const std::vector<std::vector<bool>>& b) {
  for (int r = 0; r < a.wires(); ++r) {
    for (int c = 0; c < a.wires(); ++c) {
      if (a.bit(r, c) !=
          b[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
        return false;
      }
    }
  }
  return true;
}

TransformResult routed_example() {
  const ArchGraph ag = testutil::tokyo();
  SearchConfig cfg;
  cfg.q_filter = QFilter::None;
  cfg.d_filter.reset();
  return transform(testutil::fig3_circuit(), ag, testutil::tau1(ag), cfg);
}

}  // namespace

TEST(Gf2, EmptyCircuitIsIdentity) {
  const Gf2Map m = gf2_of_circuit(Circuit{3, {}, 0}, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(m.bit(r, c), r == c);
    }
  }
}

TEST(Gf2, ThreeCnotsMakeATransposition) {
  Circuit c;
  c.num_qubits = 4;
  c.gates = {{1, 3}, {3, 1}, {1, 3}};
  const Gf2Map m = gf2_of_circuit(c, 4);
  // Wires 1 and 3 exchanged, everything else untouched.
  EXPECT_TRUE(m.bit(1, 3));
  EXPECT_TRUE(m.bit(3, 1));
  EXPECT_FALSE(m.bit(1, 1));
  EXPECT_FALSE(m.bit(3, 3));
  EXPECT_TRUE(m.bit(0, 0));
  EXPECT_TRUE(m.bit(2, 2));
}

TEST(Gf2, MatchesStraightLineRecomputation) {
  const Circuit c = testutil::fig3_circuit();
  EXPECT_TRUE(same_matrix(gf2_of_circuit(c, 4), naive_gf2(c, 4)));
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const Circuit r = testutil::random_circuit(9, 80, seed);
    EXPECT_TRUE(same_matrix(gf2_of_circuit(r, 9), naive_gf2(r, 9)))
        << "seed " << seed;
  }
}

TEST(Gf2, CompositionLaw) {
  for (unsigned seed = 11; seed <= 15; ++seed) {
    const Circuit whole = testutil::random_circuit(7, 60, seed);
    std::mt19937 rng(seed);
    const auto cut = rng() % whole.gates.size();
    Circuit first{7, {whole.gates.begin(), whole.gates.begin() + cut}, 0};
    Circuit second{7, {whole.gates.begin() + cut, whole.gates.end()}, 0};
    const auto m1 = naive_gf2(first, 7);
    const auto m2 = naive_gf2(second, 7);
    std::vector<std::vector<bool>> prod(7, std::vector<bool>(7, false));
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) {
        bool v = false;
        for (int k = 0; k < 7; ++k) {
          v = v ^ (m2[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                   m1[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
        }
        prod[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
    }
    EXPECT_TRUE(same_matrix(gf2_of_circuit(whole, 7), prod)) << "seed " << seed;
  }
}

TEST(Connectivity, PassAndFail) {
  const ArchGraph ag = testutil::tokyo();
  const TransformResult res = routed_example();
  EXPECT_TRUE(check_connectivity(res.physical, ag).pass);

  Circuit bad;
  bad.num_qubits = 20;
  bad.gates = {{0, 19}};
  const Verdict v = check_connectivity(bad, ag);
  EXPECT_FALSE(v.pass);
  EXPECT_NE(v.detail.find("gate 0"), std::string::npos);

  EXPECT_TRUE(check_connectivity(Circuit{20, {}, 0}, ag).pass);
}

TEST(Equivalence, ZeroSwapRoutingPasses) {
  const ArchGraph path3 = grid_arch(1, 3);
  Circuit c;
  c.num_qubits = 3;
  c.gates = {{0, 1}, {1, 2}, {1, 0}};
  const TransformResult res =
      transform(c, path3, naive_mapping(c, path3), SearchConfig{});
  EXPECT_EQ(res.added_cnots(), 0);
  EXPECT_TRUE(check_equivalence(c, res, path3).pass);
}

TEST(Equivalence, RoutedExamplePasses) {
  const ArchGraph ag = testutil::tokyo();
  const TransformResult res = routed_example();
  EXPECT_TRUE(check_equivalence(testutil::fig3_circuit(), res, ag).pass);
}

TEST(Equivalence, DeletingASwapInternalCnotFails) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit logical = testutil::fig3_circuit();
  const TransformResult good = routed_example();
  ASSERT_GE(good.swap_count(), 1);
  for (int k = 0; k < 3; ++k) {
    TransformResult broken = good;
    const auto pos = static_cast<std::size_t>(broken.swaps[0].t) +
                     static_cast<std::size_t>(k);
    broken.physical.gates.erase(broken.physical.gates.begin() +
                                static_cast<long>(pos));
    EXPECT_FALSE(check_equivalence(logical, broken, ag).pass)
        << "deleted cnot " << k << " of the first swap";
  }
}

TEST(Equivalence, DuplicatingASwapInternalCnotFails) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit logical = testutil::fig3_circuit();
  TransformResult broken = routed_example();
  const auto pos = static_cast<std::size_t>(broken.swaps[0].t) + 1;
  broken.physical.gates.insert(
      broken.physical.gates.begin() + static_cast<long>(pos),
      broken.physical.gates[pos]);
  EXPECT_FALSE(check_equivalence(logical, broken, ag).pass);
}

TEST(Equivalence, RetargetingAGateTripsACheck) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit logical = testutil::fig3_circuit();
  TransformResult broken = routed_example();
  broken.physical.gates[0] = {0, 19};  // not an architecture edge
  const bool conn = check_connectivity(broken.physical, ag).pass;
  const bool equiv = check_equivalence(logical, broken, ag).pass;
  EXPECT_FALSE(conn && equiv);
  EXPECT_FALSE(conn);
}

TEST(Equivalence, LazyAllocationBackPropagation) {
  // Route from the empty mapping so allocations interleave with swaps.
  const ArchGraph ag = grid_arch(3, 4);
  for (unsigned seed = 21; seed <= 28; ++seed) {
    const Circuit c = testutil::random_circuit(7, 45, seed);
    SearchConfig cfg;
    const TransformResult res = transform(c, ag, empty_mapping(c, ag), cfg);
    EXPECT_TRUE(check_equivalence(c, res, ag).pass) << "seed " << seed;
  }
}

TEST(Metrics, RatioArithmetic) {
  Circuit logical;
  logical.num_qubits = 10;
  for (int i = 0; i < 90; ++i) {
    logical.gates.push_back({0, 1 + i % 9});
  }
  TransformResult res;
  res.physical.num_qubits = 20;
  for (int i = 0; i < 129; ++i) {
    res.physical.gates.push_back({0, 1});
  }
  const auto r = r_cnot(logical, res);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, (Rational{129, 90}));

  // Zero-overhead circuit.
  TransformResult same;
  same.physical.num_qubits = 20;
  same.physical.gates = logical.gates;
  EXPECT_EQ(*r_cnot(logical, same), (Rational{1, 1}));

  // Aggregate is a ratio of totals, not a mean of ratios.
  const auto agg = i_cnot({{10, 10}, {90, 120}});
  ASSERT_TRUE(agg.has_value());
  EXPECT_EQ(*agg, (Rational{130, 100}));

  EXPECT_FALSE(r_cnot(Circuit{2, {}, 0}, res).has_value());
  EXPECT_FALSE(i_cnot({}).has_value());
}
