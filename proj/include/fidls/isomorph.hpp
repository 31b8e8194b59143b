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
#include "fidls/mapping.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

namespace fidls {

/// Interaction graph of a circuit: one node per logical qubit, an edge per
/// interacting pair, weighted by the number of gates on that pair.
struct CircuitGraph {
  int num_nodes = 0;
  std::vector<Edge> edges;           // sorted, unique
  std::vector<long long> weights;    // parallel to edges
};

inline CircuitGraph circuit_graph(const Circuit& c) {
  std::map<Edge, long long> acc;
  for (const Gate& g : c.gates) {
    ++acc[make_edge(g.control, g.target)];
  }
  CircuitGraph out;
  out.num_nodes = c.num_qubits;
  out.edges.reserve(acc.size());
  out.weights.reserve(acc.size());
  for (const auto& [e, w] : acc) {
    out.edges.push_back(e);
    out.weights.push_back(w);
  }
  return out;
}

struct EmbedBudget {
  long long max_backtrack_nodes = 10'000'000;
};

/// Result of a subgraph-monomorphism search. `map[p]` is the host image of
/// pattern node p. `inconclusive` marks a budget exhaustion, which callers
/// treat as non-embeddable.
struct EmbedResult {
  std::optional<std::vector<int>> map;
  bool inconclusive = false;

  bool found() const { return map.has_value(); }
};

namespace detail {

class Vf2Search {
public:
  Vf2Search(int pattern_nodes, const std::vector<Edge>& pattern_edges,
            const ArchGraph& host, long long budget)
      : n_(pattern_nodes), host_(host), budget_(budget),
        adj_(static_cast<std::size_t>(pattern_nodes)),
        image_(static_cast<std::size_t>(pattern_nodes), -1),
        used_(static_cast<std::size_t>(host.num_nodes()), 0) {
    for (const auto& [a, b] : pattern_edges) {
      adj_[static_cast<std::size_t>(a)].push_back(b);
      adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    build_order();
  }

  EmbedResult run() {
    if (n_ > host_.num_nodes()) {
      return {};
    }
    EmbedResult res;
    if (place(0)) {
      res.map = image_;
    } else if (exhausted_) {
      res.inconclusive = true;
    }
    return res;
  }

private:
  // Static node order: seed with the highest-degree node, then greedily
  // take the node with the most already-ordered neighbors. Isolated nodes
  // end up last and match any unused host.
  void build_order() {
    const auto n = static_cast<std::size_t>(n_);
    std::vector<char> placed(n, 0);
    std::vector<int> bond(n, 0);  // ordered-neighbor count
    order_.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
      int best = -1;
      for (int p = 0; p < n_; ++p) {
        if (placed[static_cast<std::size_t>(p)]) {
          continue;
        }
        if (best < 0) {
          best = p;
          continue;
        }
        const auto pb = bond[static_cast<std::size_t>(p)];
        const auto bb = bond[static_cast<std::size_t>(best)];
        const auto pd = degree(p);
        const auto bd = degree(best);
        if (pb > bb || (pb == bb && (pd > bd || (pd == bd && p < best)))) {
          best = p;
        }
      }
      placed[static_cast<std::size_t>(best)] = 1;
      order_.push_back(best);
      for (int nb : adj_[static_cast<std::size_t>(best)]) {
        ++bond[static_cast<std::size_t>(nb)];
      }
    }
  }

  int degree(int p) const {
    return static_cast<int>(adj_[static_cast<std::size_t>(p)].size());
  }

  bool feasible(int p, int h) const {
    if (host_.degree(h) < degree(p)) {
      return false;
    }
    for (int nb : adj_[static_cast<std::size_t>(p)]) {
      const int img = image_[static_cast<std::size_t>(nb)];
      if (img >= 0 && !host_.has_edge(h, img)) {
        return false;
      }
    }
    return true;
  }

  bool place(std::size_t depth) {
    if (depth == order_.size()) {
      return true;
    }
    const int p = order_[depth];
    // Candidate hosts: neighbors of an already-placed pattern neighbor's
    // image when one exists, otherwise every unused host.
    const std::vector<int>* pool = nullptr;
    for (int nb : adj_[static_cast<std::size_t>(p)]) {
      const int img = image_[static_cast<std::size_t>(nb)];
      if (img >= 0) {
        const auto& cand = host_.neighbors(img);
        if (pool == nullptr || cand.size() < pool->size()) {
          pool = &cand;
        }
      }
    }
    if (pool != nullptr) {
      for (int h : *pool) {
        if (!try_host(p, h, depth)) {
          if (exhausted_) {
            return false;
          }
          continue;
        }
        return true;
      }
      return false;
    }
    for (int h = 0; h < host_.num_nodes(); ++h) {
      if (try_host(p, h, depth)) {
        return true;
      }
      if (exhausted_) {
        return false;
      }
    }
    return false;
  }

  bool try_host(int p, int h, std::size_t depth) {
    if (used_[static_cast<std::size_t>(h)]) {
      return false;
    }
    if (--budget_ < 0) {
      exhausted_ = true;
      return false;
    }
    if (!feasible(p, h)) {
      return false;
    }
    image_[static_cast<std::size_t>(p)] = h;
    used_[static_cast<std::size_t>(h)] = 1;
    if (place(depth + 1)) {
      return true;
    }
    image_[static_cast<std::size_t>(p)] = -1;
    used_[static_cast<std::size_t>(h)] = 0;
    return false;
  }

  int n_;
  const ArchGraph& host_;
  long long budget_;
  bool exhausted_ = false;
  std::vector<std::vector<int>> adj_;
  std::vector<int> order_;
  std::vector<int> image_;
  std::vector<char> used_;
};

}  // namespace detail

/// Monomorphism search: finds an injective node map sending every pattern
/// edge onto a host edge (host may have extra edges between images).
/// Deterministic for fixed inputs.
inline EmbedResult subgraph_embed(int pattern_nodes,
                                  const std::vector<Edge>& pattern_edges,
                                  const ArchGraph& ag,
                                  const EmbedBudget& budget = {}) {
  if (budget.max_backtrack_nodes <= 0) {
    throw ContractViolation("embed budget must be positive");
  }
  detail::Vf2Search search(pattern_nodes, pattern_edges, ag,
                           budget.max_backtrack_nodes);
  return search.run();
}

inline EmbedResult subgraph_embed(const CircuitGraph& g, const ArchGraph& ag,
                                  const EmbedBudget& budget = {}) {
  return subgraph_embed(g.num_nodes, g.edges, ag, budget);
}

namespace detail {

/// Embeds the subgraph spanned by `edges` (host-labeled by logical qubit
/// ids) and writes the images into a fresh partial mapping. Qubits not
/// incident to any edge stay unmapped.
inline std::optional<QubitMapping> embed_edge_set(
    int num_qubits, const std::vector<Edge>& edges, const ArchGraph& ag,
    const EmbedBudget& budget, std::ostream* warn) {
  std::vector<int> qubits;
  for (const auto& [a, b] : edges) {
    qubits.push_back(a);
    qubits.push_back(b);
  }
  std::sort(qubits.begin(), qubits.end());
  qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
  std::vector<int> compact(static_cast<std::size_t>(num_qubits), -1);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    compact[static_cast<std::size_t>(qubits[i])] = static_cast<int>(i);
  }
  std::vector<Edge> pattern;
  pattern.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    pattern.push_back(make_edge(compact[static_cast<std::size_t>(a)],
                                compact[static_cast<std::size_t>(b)]));
  }
  auto res = subgraph_embed(static_cast<int>(qubits.size()), pattern, ag,
                            budget);
  if (res.inconclusive && warn != nullptr) {
    *warn << "warning: embed budget exhausted; treating pattern as "
             "non-embeddable\n";
  }
  if (!res.found()) {
    return std::nullopt;
  }
  QubitMapping tau(num_qubits, ag.num_nodes());
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    tau.assign(qubits[i], (*res.map)[i]);
  }
  return tau;
}

inline bool edge_set_embeds(const std::vector<Edge>& edges,
                            const ArchGraph& ag, const EmbedBudget& budget) {
  std::vector<int> qubits;
  for (const auto& [a, b] : edges) {
    qubits.push_back(a);
    qubits.push_back(b);
  }
  std::sort(qubits.begin(), qubits.end());
  qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
  if (qubits.empty()) {
    return true;
  }
  std::vector<int> compact(static_cast<std::size_t>(qubits.back() + 1), -1);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    compact[static_cast<std::size_t>(qubits[i])] = static_cast<int>(i);
  }
  std::vector<Edge> pattern;
  pattern.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    pattern.push_back(make_edge(compact[static_cast<std::size_t>(a)],
                                compact[static_cast<std::size_t>(b)]));
  }
  return subgraph_embed(static_cast<int>(qubits.size()), pattern, ag, budget)
      .found();
}

}  // namespace detail

/// Grows a maximal embeddable front section of the circuit: repeatedly
/// scans the front layer of the remainder in gate order and admits the
/// first gate whose interaction edge keeps the section embeddable. The
/// returned mapping embeds the section's interaction graph; qubits outside
/// it stay unmapped.
inline QubitMapping topgraph_mapping(const Circuit& c, const ArchGraph& ag,
                                     const EmbedBudget& budget = {},
                                     std::ostream* warn = nullptr,
                                     std::vector<int>* section_out = nullptr) {
  RemainingCircuit rc(c);
  std::set<Edge> section;
  std::set<Edge> rejected;  // edges known not to fit the current section
  std::vector<Edge> section_vec;
  std::vector<int> taken;
  while (!rc.empty()) {
    int admitted = -1;
    for (int gi : rc.front()) {
      const Gate& g = rc.gate(gi);
      const Edge e = make_edge(g.control, g.target);
      if (section.count(e) != 0) {
        admitted = gi;
        break;
      }
      if (rejected.count(e) != 0) {
        continue;
      }
      std::vector<Edge> trial = section_vec;
      trial.push_back(e);
      if (detail::edge_set_embeds(trial, ag, budget)) {
        section.insert(e);
        section_vec.push_back(e);
        rejected.clear();
        admitted = gi;
        break;
      }
      rejected.insert(e);
    }
    if (admitted < 0) {
      break;
    }
    rc.remove_gate(admitted);
    taken.push_back(admitted);
  }
  if (section_out != nullptr) {
    *section_out = taken;
  }
  if (section_vec.empty()) {
    return QubitMapping(c.num_qubits, ag.num_nodes());
  }
  auto tau = detail::embed_edge_set(c.num_qubits, section_vec, ag, budget,
                                    warn);
  // The section was grown through successful embeds, so this must succeed.
  if (!tau) {
    throw Error("internal: embeddable section failed to re-embed");
  }
  return *tau;
}

/// Greedy heavy-edge subgraph: edges of the interaction graph sorted by
/// weight (ties: lexicographic), each kept iff the accumulated subgraph
/// still embeds. Returns an embedding of the kept subgraph.
inline QubitMapping wgtgraph_mapping(const Circuit& c, const ArchGraph& ag,
                                     const EmbedBudget& budget = {},
                                     std::ostream* warn = nullptr,
                                     std::vector<Edge>* kept_out = nullptr) {
  const CircuitGraph g = circuit_graph(c);
  std::vector<std::size_t> idx(g.edges.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (g.weights[a] != g.weights[b]) {
      return g.weights[a] > g.weights[b];
    }
    return g.edges[a] < g.edges[b];
  });
  std::vector<Edge> kept;
  for (std::size_t i : idx) {
    std::vector<Edge> trial = kept;
    trial.push_back(g.edges[i]);
    if (detail::edge_set_embeds(trial, ag, budget)) {
      kept = std::move(trial);
    }
  }
  if (kept_out != nullptr) {
    *kept_out = kept;
  }
  if (kept.empty()) {
    return QubitMapping(c.num_qubits, ag.num_nodes());
  }
  auto tau = detail::embed_edge_set(c.num_qubits, kept, ag, budget, warn);
  if (!tau) {
    throw Error("internal: kept subgraph failed to re-embed");
  }
  return *tau;
}

/// q_i -> v_i for every logical qubit.
inline QubitMapping naive_mapping(const Circuit& c, const ArchGraph& ag) {
  return QubitMapping::identity(c.num_qubits, ag.num_nodes());
}

inline QubitMapping empty_mapping(const Circuit& c, const ArchGraph& ag) {
  return QubitMapping(c.num_qubits, ag.num_nodes());
}

}  // namespace fidls
