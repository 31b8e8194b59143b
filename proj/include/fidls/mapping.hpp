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

#pragma once

#include "fidls/arch.hpp"
#include "fidls/circuit.hpp"
#include "fidls/errors.hpp"

#include <cassert>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace fidls {

/// Partial injective map from logical to physical qubits, kept consistent
/// with its inverse. Value-semantic; swap application is an involution.
class QubitMapping {
public:
  QubitMapping() = default;

  QubitMapping(int num_logical, int num_physical)
      : forward_(static_cast<std::size_t>(num_logical), -1),
        inverse_(static_cast<std::size_t>(num_physical), -1) {}

  static QubitMapping identity(int num_logical, int num_physical) {
    if (num_logical > num_physical) {
      throw CapacityError("more logical than physical qubits");
    }
    QubitMapping tau(num_logical, num_physical);
    for (int q = 0; q < num_logical; ++q) {
      tau.assign(q, q);
    }
    return tau;
  }

  int num_logical() const { return static_cast<int>(forward_.size()); }
  int num_physical() const { return static_cast<int>(inverse_.size()); }

  bool is_mapped(int q) const {
    return forward_[static_cast<std::size_t>(q)] >= 0;
  }
  /// Physical image of q, or -1.
  int phys_of(int q) const { return forward_[static_cast<std::size_t>(q)]; }
  /// Logical pre-image at v, or -1.
  int log_at(int v) const { return inverse_[static_cast<std::size_t>(v)]; }
  bool occupied(int v) const {
    return inverse_[static_cast<std::size_t>(v)] >= 0;
  }

  int mapped_count() const { return mapped_; }
  int free_count() const { return num_physical() - mapped_; }

  void assign(int q, int v) {
    if (is_mapped(q) || occupied(v)) {
      throw ContractViolation("assign would break injectivity");
    }
    forward_[static_cast<std::size_t>(q)] = v;
    inverse_[static_cast<std::size_t>(v)] = q;
    ++mapped_;
  }

  /// Exchanges the images on the two endpoints of e. Handles all cases:
  /// both occupied, one occupied, none occupied (no-op).
  void apply_swap_inplace(const Edge& e) {
    const int a = inverse_[static_cast<std::size_t>(e.first)];
    const int b = inverse_[static_cast<std::size_t>(e.second)];
    inverse_[static_cast<std::size_t>(e.first)] = b;
    inverse_[static_cast<std::size_t>(e.second)] = a;
    if (a >= 0) {
      forward_[static_cast<std::size_t>(a)] = e.second;
    }
    if (b >= 0) {
      forward_[static_cast<std::size_t>(b)] = e.first;
    }
  }

  bool operator==(const QubitMapping&) const = default;

private:
  std::vector<int> forward_;
  std::vector<int> inverse_;
  int mapped_ = 0;
};

/// Copy of tau with SWAP(e) enforced. e must be an edge of ag.
inline QubitMapping apply_swap(const QubitMapping& tau, const Edge& e,
                               const ArchGraph& ag) {
  if (!ag.has_edge(e.first, e.second)) {
    throw ContractViolation("swap on a non-edge {" + std::to_string(e.first) +
                            "," + std::to_string(e.second) + "}");
  }
  QubitMapping out = tau;
  out.apply_swap_inplace(e);
  return out;
}

/// Physical distance of a gate's qubit pair under tau. Unmapped endpoints
/// are priced optimistically against the free physical qubits.
inline int phys_dist(const QubitMapping& tau, const Gate& g,
                     const ArchGraph& ag) {
  const int pc = tau.phys_of(g.control);
  const int pt = tau.phys_of(g.target);
  if (pc >= 0 && pt >= 0) {
    return ag.dist(pc, pt);
  }
  const int n = ag.num_nodes();
  if (pc >= 0 || pt >= 0) {
    const int anchor = pc >= 0 ? pc : pt;
    int best = std::numeric_limits<int>::max();
    for (int v = 0; v < n; ++v) {
      if (!tau.occupied(v)) {
        best = std::min(best, ag.dist(anchor, v));
      }
    }
    if (best == std::numeric_limits<int>::max()) {
      throw CapacityError("no free physical qubit for unmapped endpoint");
    }
    return best;
  }
  // Neither endpoint mapped: closest pair of distinct free qubits.
  int best = std::numeric_limits<int>::max();
  for (int v = 0; v < n && best > 1; ++v) {
    if (tau.occupied(v)) {
      continue;
    }
    for (int w : ag.neighbors(v)) {
      if (!tau.occupied(w)) {
        return 1;
      }
    }
    for (int w = v + 1; w < n; ++w) {
      if (!tau.occupied(w)) {
        best = std::min(best, ag.dist(v, w));
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) {
    throw CapacityError("fewer than two free physical qubits");
  }
  return best;
}

/// A gate is satisfied when both endpoints are mapped onto an AG edge.
inline bool satisfied(const QubitMapping& tau, const Gate& g,
                      const ArchGraph& ag) {
  const int pc = tau.phys_of(g.control);
  const int pt = tau.phys_of(g.target);
  return pc >= 0 && pt >= 0 && ag.dist(pc, pt) == 1;
}

/// The not-yet-executed part of a circuit: alive gates, live indegrees and
/// the current front layer, maintained incrementally during routing.
class RemainingCircuit {
public:
  explicit RemainingCircuit(const Circuit& c)
      : RemainingCircuit(c, build_dep_graph(c)) {}

  RemainingCircuit(const Circuit& c, DepGraph dep)
      : circ_(&c), dep_(std::move(dep)),
        alive_(c.gates.size(), 1),
        indeg_(dep_.indegree),
        remaining_(static_cast<int>(c.gates.size())),
        sim_indeg_(c.gates.size(), 0),
        sim_stamp_(c.gates.size(), 0) {
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      if (indeg_[i] == 0) {
        front_.push_back(static_cast<int>(i));
      }
    }
  }

  const Circuit& circuit() const { return *circ_; }
  const Gate& gate(int i) const {
    return circ_->gates[static_cast<std::size_t>(i)];
  }
  bool empty() const { return remaining_ == 0; }
  int remaining() const { return remaining_; }

  /// Sorted indices of gates with no unexecuted ancestors.
  const std::vector<int>& front() const { return front_; }

  /// First `upto` layers of the remaining circuit, front layer first.
  std::vector<std::vector<int>> layer_sets(int upto) const {
    std::vector<std::vector<int>> out;
    if (upto < 1 || remaining_ == 0) {
      return out;
    }
    ++sim_epoch_;
    std::vector<int> current = front_;
    while (!current.empty() && static_cast<int>(out.size()) < upto) {
      std::vector<int> next;
      for (int g : current) {
        for (int ch : dep_.children[static_cast<std::size_t>(g)]) {
          if (dec_sim_indeg(ch) == 0) {
            next.push_back(ch);
          }
        }
      }
      std::sort(next.begin(), next.end());
      out.push_back(std::move(current));
      current = std::move(next);
    }
    return out;
  }

  /// Number of gates the cascade "execute satisfied front gates, repeat"
  /// would remove under tau. Does not modify the circuit.
  int count_executable(const QubitMapping& tau, const ArchGraph& ag) const {
    ++sim_epoch_;
    MinHeap heap;
    for (int g : front_) {
      if (satisfied(tau, gate(g), ag)) {
        heap.push(g);
      }
    }
    int count = 0;
    while (!heap.empty()) {
      const int g = heap.top();
      heap.pop();
      ++count;
      for (int ch : dep_.children[static_cast<std::size_t>(g)]) {
        if (dec_sim_indeg(ch) == 0 && satisfied(tau, gate(ch), ag)) {
          heap.push(ch);
        }
      }
    }
    return count;
  }

  /// Commits the cascade: removes each executed gate and reports it to
  /// `sink` in removal order (ascending index among ready gates).
  template <typename F>
  int remove_executable(const QubitMapping& tau, const ArchGraph& ag,
                        F&& sink) {
    MinHeap heap;
    for (int g : front_) {
      if (satisfied(tau, gate(g), ag)) {
        heap.push(g);
      }
    }
    int count = 0;
    std::vector<int> new_front;
    while (!heap.empty()) {
      const int g = heap.top();
      heap.pop();
      alive_[static_cast<std::size_t>(g)] = 0;
      --remaining_;
      ++count;
      sink(g);
      for (int ch : dep_.children[static_cast<std::size_t>(g)]) {
        if (--indeg_[static_cast<std::size_t>(ch)] == 0) {
          if (satisfied(tau, gate(ch), ag)) {
            heap.push(ch);
          } else {
            new_front.push_back(ch);
          }
        }
      }
    }
    if (count > 0) {
      std::vector<int> merged;
      merged.reserve(front_.size() + new_front.size());
      for (int g : front_) {
        if (alive_[static_cast<std::size_t>(g)]) {
          merged.push_back(g);
        }
      }
      merged.insert(merged.end(), new_front.begin(), new_front.end());
      std::sort(merged.begin(), merged.end());
      front_ = std::move(merged);
    }
    return count;
  }

  /// Removes one front-layer gate unconditionally (no mapping involved).
  void remove_gate(int g) {
    assert(alive_[static_cast<std::size_t>(g)] &&
           indeg_[static_cast<std::size_t>(g)] == 0);
    alive_[static_cast<std::size_t>(g)] = 0;
    --remaining_;
    std::vector<int> merged;
    merged.reserve(front_.size() + 2);
    for (int f : front_) {
      if (f != g) {
        merged.push_back(f);
      }
    }
    for (int ch : dep_.children[static_cast<std::size_t>(g)]) {
      if (--indeg_[static_cast<std::size_t>(ch)] == 0) {
        merged.push_back(ch);
      }
    }
    std::sort(merged.begin(), merged.end());
    front_ = std::move(merged);
  }

private:
  using MinHeap =
      std::priority_queue<int, std::vector<int>, std::greater<int>>;

  // Epoch-stamped shadow of indeg_ so simulations never pay a full reset.
  int dec_sim_indeg(int g) const {
    const auto i = static_cast<std::size_t>(g);
    if (sim_stamp_[i] != sim_epoch_) {
      sim_stamp_[i] = sim_epoch_;
      sim_indeg_[i] = indeg_[i];
    }
    return --sim_indeg_[i];
  }

  const Circuit* circ_;
  DepGraph dep_;
  std::vector<char> alive_;
  std::vector<int> indeg_;
  std::vector<int> front_;
  int remaining_ = 0;

  mutable std::vector<int> sim_indeg_;
  mutable std::vector<int> sim_stamp_;
  mutable int sim_epoch_ = 0;
};

/// Simulation-mode executable set: count plus removal-order indices.
inline std::pair<int, std::vector<int>> executable_count(
    const QubitMapping& tau, const RemainingCircuit& rc, const ArchGraph& ag) {
  std::vector<int> order;
  RemainingCircuit copy = rc;
  const int n = copy.remove_executable(tau, ag, [&](int g) {
    order.push_back(g);
  });
  return {n, std::move(order)};
}

/// Allocates physical homes for unmapped qubits of front-layer gates, in
/// layer order. Singly-unmapped partners go to the free qubit closest to
/// the mapped image (ties: smallest id). Doubly-unmapped gates go to the
/// closest free pair, secondarily the pair closest to the occupied region,
/// then lexicographic. Returns the (logical, physical) assignments made.
inline std::vector<std::pair<int, int>> extend_for_front(
    QubitMapping& tau, const RemainingCircuit& rc, const ArchGraph& ag) {
  std::vector<std::pair<int, int>> made;
  const int n = ag.num_nodes();
  for (int gi : rc.front()) {
    const Gate& g = rc.gate(gi);
    const bool cm = tau.is_mapped(g.control);
    const bool tm = tau.is_mapped(g.target);
    if (cm && tm) {
      continue;
    }
    if (cm != tm) {
      const int anchor = cm ? tau.phys_of(g.control) : tau.phys_of(g.target);
      const int loose = cm ? g.target : g.control;
      int best = -1;
      int best_d = std::numeric_limits<int>::max();
      for (int v = 0; v < n; ++v) {
        if (!tau.occupied(v) && ag.dist(anchor, v) < best_d) {
          best_d = ag.dist(anchor, v);
          best = v;
        }
      }
      if (best < 0) {
        throw CapacityError("no free physical qubit to extend the mapping");
      }
      tau.assign(loose, best);
      made.emplace_back(loose, best);
      continue;
    }
    // Both endpoints unmapped: order free nodes once, score ordered pairs.
    std::vector<int> free_nodes;
    std::vector<long long> occ_pull(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      if (!tau.occupied(v)) {
        free_nodes.push_back(v);
      }
    }
    if (free_nodes.size() < 2) {
      throw CapacityError("fewer than two free physical qubits to extend");
    }
    for (int v : free_nodes) {
      long long s = 0;
      for (int w = 0; w < n; ++w) {
        if (tau.occupied(w)) {
          s += ag.dist(v, w);
        }
      }
      occ_pull[static_cast<std::size_t>(v)] = s;
    }
    int best_a = -1;
    int best_b = -1;
    int best_d = std::numeric_limits<int>::max();
    long long best_pull = std::numeric_limits<long long>::max();
    for (int a : free_nodes) {
      for (int b : free_nodes) {
        if (a == b) {
          continue;
        }
        const int d = ag.dist(a, b);
        const long long pull = occ_pull[static_cast<std::size_t>(a)] +
                               occ_pull[static_cast<std::size_t>(b)];
        if (d < best_d || (d == best_d && pull < best_pull)) {
          best_d = d;
          best_pull = pull;
          best_a = a;
          best_b = b;
        }
      }
    }
    tau.assign(g.control, best_a);
    tau.assign(g.target, best_b);
    made.emplace_back(g.control, best_a);
    made.emplace_back(g.target, best_b);
  }
  return made;
}

}  // namespace fidls
