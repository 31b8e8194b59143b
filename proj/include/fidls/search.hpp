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
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fidls {

/// Restriction on which qubits a candidate swap must touch, judged against
/// the mapping as it evolves through the action:
///   Q0   - swap j may touch qubits of layers 0..j-1 (first swap: front only)
///   Q01  - first swap touches layer 0, later swaps layer 1
///   Q01x - first swap touches layer 0, later swaps layer 0 or 1
enum class QFilter { None, Q0, Q01, Q01x };

/// Rejects actions in which some swap strictly increases the discounted
/// layer-distance sum (level count s, discount gamma).
struct DFilter {
  int s = 0;
  double gamma = 0.8;
};

/// Action scoring: G counts gates made executable per inserted CNOT;
/// D scores the discounted distance reduction per inserted CNOT.
struct ValueFn {
  enum class Kind { G, D };
  Kind kind = Kind::G;
  int s = 2;
  double gamma = 0.8;
};

struct SearchConfig {
  int k = 3;
  QFilter q_filter = QFilter::Q01;
  std::optional<DFilter> d_filter = DFilter{0, 0.8};
  ValueFn value = {};
  long long fallback_cap = 0;       // 0 = |V| * diameter * gate count
  double time_limit_seconds = 0.0;  // 0 = no limit; checked between steps
};

struct TimeoutError : Error {
  using Error::Error;
};

/// A sequence of 1..k swaps, each an architecture edge.
struct Action {
  std::vector<Edge> swaps;

  auto operator<=>(const Action&) const = default;

  int len() const { return static_cast<int>(swaps.size()); }
};

/// Exact value of the G scorer: executable gates over inserted CNOTs.
struct Rational {
  long long num = 0;
  long long den = 1;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
};

/// Discounted sum of layer physical distances (levels 0..s).
inline double rhat(const QubitMapping& tau, const RemainingCircuit& rc,
                   const ArchGraph& ag, int s, double gamma) {
  if (s < 0) {
    throw ContractViolation("rhat: s must be >= 0");
  }
  const auto layer_sets = rc.layer_sets(s + 1);
  double total = 0.0;
  double weight = 1.0;
  for (std::size_t ell = 0; ell < layer_sets.size(); ++ell) {
    long long level = 0;
    for (int gi : layer_sets[ell]) {
      level += phys_dist(tau, rc.gate(gi), ag);
    }
    total += weight * static_cast<double>(level);
    weight *= gamma;
  }
  return total;
}

inline QubitMapping apply_action(const QubitMapping& tau, const Action& a) {
  QubitMapping out = tau;
  for (const Edge& e : a.swaps) {
    out.apply_swap_inplace(e);
  }
  return out;
}

/// Executable-gates-per-CNOT value of an action (exact rational).
inline Rational gval(const QubitMapping& tau, const Action& a,
                     const RemainingCircuit& rc, const ArchGraph& ag) {
  if (a.swaps.empty()) {
    throw ContractViolation("gval: action must contain at least one swap");
  }
  const QubitMapping after = apply_action(tau, a);
  return {rc.count_executable(after, ag), 3LL * a.len()};
}

/// Discounted-distance-reduction-per-CNOT value of an action.
inline double dval(const QubitMapping& tau, const Action& a,
                   const RemainingCircuit& rc, const ArchGraph& ag, int s,
                   double gamma) {
  if (a.swaps.empty()) {
    throw ContractViolation("dval: action must contain at least one swap");
  }
  const QubitMapping after = apply_action(tau, a);
  return (rhat(tau, rc, ag, s, gamma) - rhat(after, rc, ag, s, gamma)) /
         (3.0 * a.len());
}

namespace detail {

/// Per-position logical-qubit masks for the configured Q filter, and the
/// shared D-filter parameters. Built once per search step.
struct FilterContext {
  std::vector<std::vector<char>> position_mask;  // [j-1][qubit], j = 1..k
  bool q_active = false;
  std::optional<DFilter> d;

  static FilterContext build(const SearchConfig& cfg,
                             const RemainingCircuit& rc, int num_qubits) {
    FilterContext ctx;
    ctx.d = cfg.d_filter;
    if (cfg.q_filter == QFilter::None) {
      return ctx;
    }
    ctx.q_active = true;
    const int depth = cfg.k;
    const auto layer_sets = rc.layer_sets(depth);
    auto mask_of = [&](std::size_t ell) {
      std::vector<char> m(static_cast<std::size_t>(num_qubits), 0);
      if (ell < layer_sets.size()) {
        for (int gi : layer_sets[ell]) {
          m[static_cast<std::size_t>(rc.gate(gi).control)] = 1;
          m[static_cast<std::size_t>(rc.gate(gi).target)] = 1;
        }
      }
      return m;
    };
    const auto q0 = mask_of(0);
    const auto q1 = mask_of(1);
    auto unite = [](std::vector<char> a, const std::vector<char>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = a[i] != 0 || b[i] != 0 ? 1 : 0;
      }
      return a;
    };
    ctx.position_mask.resize(static_cast<std::size_t>(depth));
    switch (cfg.q_filter) {
      case QFilter::Q0: {
        // Cumulative: swap j may touch layers 0..j-1.
        std::vector<char> acc = q0;
        ctx.position_mask[0] = acc;
        for (int j = 2; j <= depth; ++j) {
          acc = unite(std::move(acc), mask_of(static_cast<std::size_t>(j - 1)));
          ctx.position_mask[static_cast<std::size_t>(j - 1)] = acc;
        }
        break;
      }
      case QFilter::Q01: {
        ctx.position_mask[0] = q0;
        for (int j = 2; j <= depth; ++j) {
          ctx.position_mask[static_cast<std::size_t>(j - 1)] = q1;
        }
        break;
      }
      case QFilter::Q01x: {
        ctx.position_mask[0] = q0;
        const auto q01 = unite(q0, q1);
        for (int j = 2; j <= depth; ++j) {
          ctx.position_mask[static_cast<std::size_t>(j - 1)] = q01;
        }
        break;
      }
      case QFilter::None:
        break;
    }
    return ctx;
  }

  bool edge_ok(const Edge& e, int position, const QubitMapping& tau) const {
    if (!q_active) {
      return true;
    }
    const auto& mask = position_mask[static_cast<std::size_t>(position - 1)];
    for (int v : {e.first, e.second}) {
      const int q = tau.log_at(v);
      if (q >= 0 && mask[static_cast<std::size_t>(q)] != 0) {
        return true;
      }
    }
    return false;
  }
};

constexpr double kRhatSlack = 1e-9;

/// Depth-first generation of every filtered action of length <= k. The
/// visitor sees the action's swaps and the mapping after applying them.
/// Swap application is an involution, so the walk mutates one scratch
/// mapping and undoes each edge on backtrack.
template <typename Visitor>
void walk_actions(const QubitMapping& tau0, const RemainingCircuit& rc,
                  const ArchGraph& ag, const SearchConfig& cfg,
                  Visitor&& visit) {
  const FilterContext ctx =
      FilterContext::build(cfg, rc, tau0.num_logical());
  QubitMapping tau = tau0;
  std::vector<Edge> prefix;
  std::vector<double> rhat_stack;
  if (ctx.d) {
    rhat_stack.push_back(rhat(tau, rc, ag, ctx.d->s, ctx.d->gamma));
  }
  const auto& edges = ag.edges();

  auto rec = [&](auto&& self, int position) -> void {
    for (const Edge& e : edges) {
      if (!tau.occupied(e.first) && !tau.occupied(e.second)) {
        continue;  // no-op swap
      }
      if (!prefix.empty() && prefix.back() == e) {
        continue;  // swap immediately undone
      }
      if (!ctx.edge_ok(e, position, tau)) {
        continue;
      }
      tau.apply_swap_inplace(e);
      if (ctx.d) {
        const double r = rhat(tau, rc, ag, ctx.d->s, ctx.d->gamma);
        if (r > rhat_stack.back() + kRhatSlack) {
          tau.apply_swap_inplace(e);
          continue;  // this swap strictly worsens the discounted distance
        }
        rhat_stack.push_back(r);
      }
      prefix.push_back(e);
      visit(prefix, tau);
      if (position < cfg.k) {
        self(self, position + 1);
      }
      prefix.pop_back();
      if (ctx.d) {
        rhat_stack.pop_back();
      }
      tau.apply_swap_inplace(e);
    }
  };
  rec(rec, 1);
}

}  // namespace detail

/// All filtered actions of length <= k, ordered by length, then
/// lexicographically by edges.
inline std::vector<Action> enumerate_actions(const QubitMapping& tau,
                                             const RemainingCircuit& rc,
                                             const ArchGraph& ag,
                                             const SearchConfig& cfg) {
  if (rc.front().empty()) {
    throw ContractViolation("enumerate_actions: empty front layer");
  }
  std::vector<Action> out;
  detail::walk_actions(tau, rc, ag, cfg,
                       [&](const std::vector<Edge>& swaps, const QubitMapping&) {
                         out.push_back(Action{swaps});
                       });
  std::sort(out.begin(), out.end(), [](const Action& a, const Action& b) {
    if (a.swaps.size() != b.swaps.size()) {
      return a.swaps.size() < b.swaps.size();
    }
    return a.swaps < b.swaps;
  });
  return out;
}

/// Argmax of the configured value function over the filtered actions.
/// Ties go to the shorter action, then to the lexicographically smaller
/// one. Returns nullopt when no action scores positive (G: no gate made
/// executable; D: no discounted improvement), which sends the caller to
/// the fallback.
inline std::optional<Action> select_action(const QubitMapping& tau,
                                           const RemainingCircuit& rc,
                                           const ArchGraph& ag,
                                           const SearchConfig& cfg) {
  if (rc.front().empty()) {
    throw ContractViolation("select_action: empty front layer");
  }
  std::optional<Action> best;

  // Under the tie order a candidate replaces an equal-valued incumbent only
  // when shorter, or equally long and lexicographically smaller.
  auto wins_tie = [&](const std::vector<Edge>& swaps) {
    return swaps.size() < best->swaps.size() ||
           (swaps.size() == best->swaps.size() && swaps < best->swaps);
  };

  if (cfg.value.kind == ValueFn::Kind::G) {
    long long best_num = 0;
    long long best_den = 1;
    detail::walk_actions(
        tau, rc, ag, cfg,
        [&](const std::vector<Edge>& swaps, const QubitMapping& after) {
          const long long num = rc.count_executable(after, ag);
          if (num == 0) {
            return;
          }
          const long long den = 3LL * static_cast<long long>(swaps.size());
          const long long cmp = num * best_den - best_num * den;
          if (!best || cmp > 0) {
            best = Action{swaps};
            best_num = num;
            best_den = den;
          } else if (cmp == 0 && wins_tie(swaps)) {
            best = Action{swaps};
          }
        });
    return best;
  }

  const double r0 = rhat(tau, rc, ag, cfg.value.s, cfg.value.gamma);
  double best_val = 0.0;
  detail::walk_actions(
      tau, rc, ag, cfg,
      [&](const std::vector<Edge>& swaps, const QubitMapping& after) {
        const double r = rhat(after, rc, ag, cfg.value.s, cfg.value.gamma);
        const double val =
            (r0 - r) / (3.0 * static_cast<double>(swaps.size()));
        if (val <= 0.0) {
          return;
        }
        if (!best || val > best_val + detail::kRhatSlack) {
          best = Action{swaps};
          best_val = val;
        } else if (val > best_val - detail::kRhatSlack && wins_tie(swaps)) {
          best = Action{swaps};
        }
      });
  return best;
}

/// Minimum front-layer distance; the quantity the fallback must reduce.
inline int fallback_floor(const QubitMapping& tau, const RemainingCircuit& rc,
                          const ArchGraph& ag) {
  int fb = std::numeric_limits<int>::max();
  for (int gi : rc.front()) {
    const Gate& g = rc.gate(gi);
    fb = std::min(fb, ag.dist(tau.phys_of(g.control), tau.phys_of(g.target)));
  }
  return fb;
}

/// Forced move when no action scores: the lexicographically smallest edge
/// incident to the worst-off front gate's images that lies on a shortest
/// path between them. Applying it reduces that gate's distance by one.
inline Edge fallback_swap(const QubitMapping& tau, const RemainingCircuit& rc,
                          const ArchGraph& ag) {
  if (rc.front().empty()) {
    throw ContractViolation("fallback_swap: empty front layer");
  }
  const int fb = fallback_floor(tau, rc, ag);
  if (fb <= 1) {
    throw ContractViolation("fallback_swap: a front gate is already executable");
  }
  int chosen = -1;
  for (int gi : rc.front()) {
    const Gate& g = rc.gate(gi);
    if (ag.dist(tau.phys_of(g.control), tau.phys_of(g.target)) == fb) {
      chosen = gi;
      break;
    }
  }
  const Gate& g = rc.gate(chosen);
  const int pc = tau.phys_of(g.control);
  const int pt = tau.phys_of(g.target);
  std::optional<Edge> best;
  auto consider = [&](int from, int to, int other) {
    if (ag.dist(to, other) != ag.dist(from, other) - 1) {
      return;  // not on a shortest path
    }
    const Edge e = make_edge(from, to);
    if (!best || e < *best) {
      best = e;
    }
  };
  for (int nb : ag.neighbors(pc)) {
    consider(pc, nb, pt);
  }
  for (int nb : ag.neighbors(pt)) {
    consider(pt, nb, pc);
  }
  return *best;
}

struct AllocEvent {
  long long t;  // physical-gate stream position at allocation time
  int logical;
  int physical;
};

struct SwapEvent {
  long long t;  // stream position of the swap's first CNOT
  Edge e;
};

struct TransformResult {
  Circuit physical;
  QubitMapping initial_map;
  QubitMapping final_map;
  std::vector<AllocEvent> allocations;
  std::vector<SwapEvent> swaps;
  long long fallback_uses = 0;
  double runtime_seconds = 0.0;

  long long swap_count() const { return static_cast<long long>(swaps.size()); }
  long long added_cnots() const { return 3 * swap_count(); }
};

/// Routes the circuit: repeatedly extends the mapping for the front layer,
/// commits every executable gate, and otherwise applies the best action
/// (or the fallback swap). Each swap is emitted as three CNOTs.
inline TransformResult transform(const Circuit& c, const ArchGraph& ag,
                                 const QubitMapping& initial,
                                 const SearchConfig& cfg) {
  if (c.num_qubits > ag.num_nodes()) {
    throw CapacityError("circuit needs more qubits than the device has");
  }
  if (cfg.k < 1) {
    throw ContractViolation("search depth k must be >= 1");
  }
  const auto t_start = std::chrono::steady_clock::now();

  TransformResult res;
  res.initial_map = initial;
  res.physical.num_qubits = ag.num_nodes();

  RemainingCircuit rc(c);
  QubitMapping tau = initial;
  const long long cap =
      cfg.fallback_cap > 0
          ? cfg.fallback_cap
          : static_cast<long long>(ag.num_nodes()) * ag.diameter() *
                std::max<long long>(1, static_cast<long long>(c.gates.size()));
  long long stalled_actions = 0;

  auto stream_pos = [&] {
    return static_cast<long long>(res.physical.gates.size());
  };
  auto emit_swap = [&](const Edge& e) {
    res.swaps.push_back({stream_pos(), e});
    res.physical.gates.push_back({e.first, e.second});
    res.physical.gates.push_back({e.second, e.first});
    res.physical.gates.push_back({e.first, e.second});
    tau.apply_swap_inplace(e);
  };

  while (!rc.empty()) {
    if (cfg.time_limit_seconds > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
                .count() > cfg.time_limit_seconds) {
      throw TimeoutError("routing exceeded the time limit with " +
                         std::to_string(rc.remaining()) + " gates left");
    }
    for (auto [q, v] : extend_for_front(tau, rc, ag)) {
      res.allocations.push_back({stream_pos(), q, v});
    }
    const int executed = rc.remove_executable(tau, ag, [&](int gi) {
      const Gate& g = rc.gate(gi);
      res.physical.gates.push_back({tau.phys_of(g.control),
                                    tau.phys_of(g.target)});
    });
    if (rc.empty()) {
      break;
    }
    if (const auto action = select_action(tau, rc, ag, cfg)) {
      if (executed == 0 && cfg.value.kind == ValueFn::Kind::D) {
        if (++stalled_actions > cap) {
          throw NonTerminationError(
              "distance-mode search exceeded its progress budget (" +
              std::to_string(cap) + " non-executing actions)");
        }
      }
      for (const Edge& e : action->swaps) {
        emit_swap(e);
      }
    } else {
      if (++res.fallback_uses > cap) {
        throw NonTerminationError(
            "fallback budget exhausted after " + std::to_string(cap) +
            " uses; remaining gates: " + std::to_string(rc.remaining()));
      }
      emit_swap(fallback_swap(tau, rc, ag));
    }
  }

  res.final_map = tau;
  res.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

}  // namespace fidls
