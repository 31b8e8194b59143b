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

#include "fidls/mapping.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace fidls;

namespace {

void expect_consistent(const QubitMapping& tau) {
  int mapped = 0;
  for (int q = 0; q < tau.num_logical(); ++q) {
    if (tau.is_mapped(q)) {
      ++mapped;
      ASSERT_EQ(tau.log_at(tau.phys_of(q)), q);
    }
  }
  int occupied = 0;
  for (int v = 0; v < tau.num_physical(); ++v) {
    if (tau.occupied(v)) {
      ++occupied;
      ASSERT_EQ(tau.phys_of(tau.log_at(v)), v);
    }
  }
  EXPECT_EQ(mapped, occupied);
  EXPECT_EQ(mapped, tau.mapped_count());
}

}  // namespace

TEST(ApplySwap, WorkedExampleChain) {
  const ArchGraph ag = testutil::tokyo();
  const QubitMapping tau1 = testutil::tau1(ag);

  const QubitMapping tau2 = apply_swap(tau1, {1, 6}, ag);
  EXPECT_EQ(tau2.phys_of(3), 1);  // q3 moved onto the free node
  EXPECT_EQ(tau2.phys_of(0), 2);
  EXPECT_EQ(tau2.phys_of(2), 10);
  EXPECT_FALSE(tau2.occupied(6));

  const QubitMapping tau3 = apply_swap(tau2, {6, 10}, ag);
  EXPECT_EQ(tau3.phys_of(2), 6);
  EXPECT_EQ(tau3.phys_of(3), 1);
  EXPECT_FALSE(tau3.occupied(10));
  expect_consistent(tau3);

  // Input mappings are untouched.
  EXPECT_EQ(tau1.phys_of(3), 6);
}

TEST(ApplySwap, FreeFreeIsIdentity) {
  const ArchGraph ag = testutil::tokyo();
  const QubitMapping tau = testutil::tau1(ag);
  const QubitMapping after = apply_swap(tau, {15, 16}, ag);
  EXPECT_EQ(after, tau);
}

TEST(ApplySwap, OccupiedFreeMoves) {
  const ArchGraph ag = testutil::tokyo();
  const QubitMapping tau = testutil::tau1(ag);
  const QubitMapping after = apply_swap(tau, {2, 3}, ag);
  EXPECT_EQ(after.log_at(3), 0);
  EXPECT_FALSE(after.occupied(2));
  expect_consistent(after);
}

TEST(ApplySwap, NonEdgeIsContractViolation) {
  const ArchGraph ag = testutil::tokyo();
  const QubitMapping tau = testutil::tau1(ag);
  EXPECT_THROW(apply_swap(tau, {0, 19}, ag), ContractViolation);
}

TEST(ApplySwap, InvolutionOnRandomMappings) {
  const ArchGraph ag = grid_arch(4, 5);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    QubitMapping tau(6, ag.num_nodes());
    std::vector<int> hosts(20);
    std::iota(hosts.begin(), hosts.end(), 0);
    std::shuffle(hosts.begin(), hosts.end(), rng);
    for (int q = 0; q < 6; ++q) {
      if (rng() % 3 != 0) {
        tau.assign(q, hosts[static_cast<std::size_t>(q)]);
      }
    }
    const auto& edges = ag.edges();
    const Edge e = edges[rng() % edges.size()];
    const QubitMapping twice = apply_swap(apply_swap(tau, e, ag), e, ag);
    EXPECT_EQ(twice, tau);
    expect_consistent(apply_swap(tau, e, ag));
  }
}

TEST(PhysDist, WorkedExampleBlockedGate) {
  const ArchGraph ag = testutil::tokyo();
  const QubitMapping tau = testutil::tau1(ag);
  const Gate g0{2, 0};
  EXPECT_EQ(phys_dist(tau, g0, ag), 2);
  EXPECT_FALSE(satisfied(tau, g0, ag));
}

TEST(PhysDist, AdjacentImages) {
  const ArchGraph ag = testutil::tokyo();
  QubitMapping tau(2, 20);
  tau.assign(0, 5);
  tau.assign(1, 6);
  EXPECT_EQ(phys_dist(tau, {0, 1}, ag), 1);
  EXPECT_TRUE(satisfied(tau, {0, 1}, ag));
}

TEST(PhysDist, UnmappedEndpointsUseFreeQubits) {
  const ArchGraph path3 = load_arch("0 1\n1 2\n");
  QubitMapping tau(2, 3);
  tau.assign(0, 0);
  // q1 unmapped; free = {1, 2}; nearest free to node 0 is node 1.
  EXPECT_EQ(phys_dist(tau, {0, 1}, path3), 1);

  const QubitMapping empty(2, 3);
  EXPECT_EQ(phys_dist(empty, {0, 1}, path3), 1);
}

TEST(PhysDist, CapacityErrors) {
  const ArchGraph path2 = load_arch("0 1\n");
  QubitMapping one_short(3, 2);
  one_short.assign(0, 0);
  one_short.assign(1, 1);
  EXPECT_THROW(phys_dist(one_short, {0, 2}, path2), CapacityError);
  QubitMapping almost(3, 2);
  almost.assign(0, 0);
  EXPECT_THROW(phys_dist(almost, {1, 2}, path2), CapacityError);
}

TEST(Executable, WorkedExampleCounts) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit c = testutil::fig3_circuit();
  const RemainingCircuit rc(c);
  const QubitMapping tau1 = testutil::tau1(ag);

  EXPECT_EQ(rc.count_executable(tau1, ag), 0);

  QubitMapping tau3(4, 20);
  tau3.assign(0, 2);
  tau3.assign(1, 0);
  tau3.assign(2, 6);
  tau3.assign(3, 1);
  EXPECT_EQ(rc.count_executable(tau3, ag), 7);

  const auto [count, order] = executable_count(tau3, rc, ag);
  EXPECT_EQ(count, 7);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Executable, EmptyCircuit) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit c{4, {}, 0};
  const RemainingCircuit rc(c);
  EXPECT_EQ(rc.count_executable(testutil::tau1(ag), ag), 0);
}

TEST(Executable, MonotoneUnderExtension) {
  const ArchGraph ag = grid_arch(4, 4);
  for (unsigned seed = 3; seed <= 7; ++seed) {
    const Circuit c = testutil::random_circuit(6, 30, seed);
    const RemainingCircuit rc(c);
    std::mt19937 rng(seed);
    QubitMapping tau(6, 16);
    std::vector<int> hosts(16);
    std::iota(hosts.begin(), hosts.end(), 0);
    std::shuffle(hosts.begin(), hosts.end(), rng);
    for (int q = 0; q < 4; ++q) {
      tau.assign(q, hosts[static_cast<std::size_t>(q)]);
    }
    const int before = rc.count_executable(tau, ag);
    QubitMapping extended = tau;
    extended.assign(4, hosts[4]);
    extended.assign(5, hosts[5]);
    EXPECT_GE(rc.count_executable(extended, ag), before) << "seed " << seed;
  }
}

TEST(Extend, ForcedNeighborAllocation) {
  const ArchGraph ag = testutil::tokyo();
  Circuit c;
  c.num_qubits = 2;
  c.gates = {{0, 1}};
  const RemainingCircuit rc(c);
  QubitMapping tau(2, 20);
  tau.assign(0, 0);
  const auto made = extend_for_front(tau, rc, ag);
  ASSERT_EQ(made.size(), 1U);
  EXPECT_EQ(made[0].first, 1);
  EXPECT_EQ(made[0].second, 1);  // smallest-id free neighbor of node 0
  EXPECT_TRUE(satisfied(tau, c.gates[0], ag));
}

TEST(Extend, CompleteMappingUnchanged) {
  const ArchGraph ag = testutil::tokyo();
  const Circuit c = testutil::fig3_circuit();
  const RemainingCircuit rc(c);
  QubitMapping tau = testutil::tau1(ag);
  const QubitMapping before = tau;
  EXPECT_TRUE(extend_for_front(tau, rc, ag).empty());
  EXPECT_EQ(tau, before);
}

TEST(Extend, EmptyMappingPicksClosestFreePair) {
  const ArchGraph path3 = load_arch("0 1\n1 2\n");
  Circuit c;
  c.num_qubits = 2;
  c.gates = {{0, 1}};
  const RemainingCircuit rc(c);
  QubitMapping tau(2, 3);
  extend_for_front(tau, rc, path3);
  EXPECT_EQ(tau.phys_of(0), 0);
  EXPECT_EQ(tau.phys_of(1), 1);
}

TEST(Extend, CapacityError) {
  const ArchGraph path2 = load_arch("0 1\n");
  Circuit c;
  c.num_qubits = 3;
  c.gates = {{0, 1}, {1, 2}};
  const RemainingCircuit rc(c);
  QubitMapping tau(3, 2);
  tau.assign(2, 0);
  tau.assign(1, 1);
  // Front gate <0,1>: q0 has no free qubit left.
  EXPECT_THROW(extend_for_front(tau, rc, path2), CapacityError);
}
