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
#include "fidls/search.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fidls {

/// Linear-reversible semantics of a CNOT circuit over GF(2): an n x n bit
/// matrix M with x_out = M x_in. Rows are bit-packed; a CNOT <c,t> XORs
/// row c into row t.
class Gf2Map {
public:
  explicit Gf2Map(int n)
      : n_(n), words_(static_cast<std::size_t>((n + 63) / 64)),
        rows_(static_cast<std::size_t>(n) * words_, 0) {
    for (int i = 0; i < n; ++i) {
      row(i)[static_cast<std::size_t>(i) / 64] |=
          std::uint64_t{1} << (static_cast<std::size_t>(i) % 64);
    }
  }

  int wires() const { return n_; }

  void apply_cnot(int control, int target) {
    const std::uint64_t* src = row(control);
    std::uint64_t* dst = row(target);
    for (std::size_t w = 0; w < words_; ++w) {
      dst[w] ^= src[w];
    }
  }

  bool bit(int r, int c) const {
    return (row(r)[static_cast<std::size_t>(c) / 64] >>
            (static_cast<std::size_t>(c) % 64)) &
           1U;
  }

  /// Rows r with M[r][c] = 1, ascending.
  std::vector<int> column_support(int c) const {
    std::vector<int> out;
    for (int r = 0; r < n_; ++r) {
      if (bit(r, c)) {
        out.push_back(r);
      }
    }
    return out;
  }

  bool operator==(const Gf2Map&) const = default;

private:
  std::uint64_t* row(int r) {
    return rows_.data() + static_cast<std::size_t>(r) * words_;
  }
  const std::uint64_t* row(int r) const {
    return rows_.data() + static_cast<std::size_t>(r) * words_;
  }

  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

/// Product of the circuit's elementary CNOT matrices, in gate order.
inline Gf2Map gf2_of_circuit(const Circuit& c, int wires) {
  Gf2Map m(wires);
  for (const Gate& g : c.gates) {
    if (g.control >= wires || g.target >= wires) {
      throw ContractViolation("gate qubit out of range for gf2 map");
    }
    m.apply_cnot(g.control, g.target);
  }
  return m;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  static Verdict ok() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }

  explicit operator bool() const { return pass; }
};

/// PASS iff every gate of the physical circuit acts along an AG edge.
inline Verdict check_connectivity(const Circuit& physical,
                                  const ArchGraph& ag) {
  for (std::size_t i = 0; i < physical.gates.size(); ++i) {
    const Gate& g = physical.gates[i];
    if (g.control >= ag.num_nodes() || g.target >= ag.num_nodes() ||
        !ag.has_edge(g.control, g.target)) {
      return Verdict::fail("gate " + std::to_string(i) + " <" +
                           std::to_string(g.control) + "," +
                           std::to_string(g.target) +
                           "> is not on an architecture edge");
    }
  }
  return Verdict::ok();
}

/// Independent functional check of a routing result against its input.
///
/// Every logical qubit is traced to its effective time-0 wire by taking its
/// allocation wire and undoing the transpositions of all swaps emitted
/// before the allocation (legal because unoccupied wires are touched only
/// by complete three-CNOT swap triples). The output matrix must then carry
/// each such wire exactly onto the final images of the input map's column
/// support, and every other wire must pass through untouched (unit column).
inline Verdict check_equivalence(const Circuit& logical,
                                 const TransformResult& result,
                                 const ArchGraph& ag) {
  const int nq = logical.num_qubits;
  const int nv = ag.num_nodes();
  const Gf2Map a = gf2_of_circuit(logical, nq);
  const Gf2Map b = gf2_of_circuit(result.physical, nv);

  std::vector<long long> alloc_time(static_cast<std::size_t>(nq), -1);
  std::vector<int> alloc_wire(static_cast<std::size_t>(nq), -1);
  for (int q = 0; q < nq; ++q) {
    if (result.initial_map.is_mapped(q)) {
      alloc_time[static_cast<std::size_t>(q)] = 0;
      alloc_wire[static_cast<std::size_t>(q)] = result.initial_map.phys_of(q);
    }
  }
  for (const AllocEvent& ev : result.allocations) {
    alloc_time[static_cast<std::size_t>(ev.logical)] = ev.t;
    alloc_wire[static_cast<std::size_t>(ev.logical)] = ev.physical;
  }

  std::vector<int> pi0(static_cast<std::size_t>(nq), -1);
  std::vector<int> wire_owner(static_cast<std::size_t>(nv), -1);
  for (int q = 0; q < nq; ++q) {
    if (alloc_wire[static_cast<std::size_t>(q)] < 0) {
      if (!result.final_map.is_mapped(q)) {
        continue;  // never used, never placed
      }
      return Verdict::fail("qubit " + std::to_string(q) +
                           " is placed in the final map but has no "
                           "allocation record");
    }
    int w = alloc_wire[static_cast<std::size_t>(q)];
    const long long t = alloc_time[static_cast<std::size_t>(q)];
    for (auto it = result.swaps.rbegin(); it != result.swaps.rend(); ++it) {
      if (it->t >= t) {
        continue;
      }
      if (w == it->e.first) {
        w = it->e.second;
      } else if (w == it->e.second) {
        w = it->e.first;
      }
    }
    if (wire_owner[static_cast<std::size_t>(w)] >= 0) {
      return Verdict::fail(
          "time-0 wire " + std::to_string(w) + " claimed by both qubit " +
          std::to_string(wire_owner[static_cast<std::size_t>(w)]) +
          " and qubit " + std::to_string(q));
    }
    wire_owner[static_cast<std::size_t>(w)] = q;
    pi0[static_cast<std::size_t>(q)] = w;
  }

  for (int q = 0; q < nq; ++q) {
    const int w0 = pi0[static_cast<std::size_t>(q)];
    if (w0 < 0) {
      continue;
    }
    std::vector<int> expected;
    for (int qp = 0; qp < nq; ++qp) {
      if (!a.bit(qp, q)) {
        continue;
      }
      if (!result.final_map.is_mapped(qp)) {
        return Verdict::fail("qubit " + std::to_string(qp) +
                             " carries output but is unmapped at the end");
      }
      expected.push_back(result.final_map.phys_of(qp));
    }
    std::sort(expected.begin(), expected.end());
    const std::vector<int> actual = b.column_support(w0);
    if (actual != expected) {
      return Verdict::fail("qubit " + std::to_string(q) + ": column of wire " +
                           std::to_string(w0) +
                           " does not match the expected image set");
    }
  }
  for (int w = 0; w < nv; ++w) {
    if (wire_owner[static_cast<std::size_t>(w)] >= 0) {
      continue;
    }
    if (b.column_support(w).size() != 1) {
      return Verdict::fail("ancilla wire " + std::to_string(w) +
                           " does not pass through as a unit column");
    }
  }
  return Verdict::ok();
}

/// Per-circuit output-to-input CNOT ratio; empty inputs are undefined.
inline std::optional<Rational> r_cnot(const Circuit& logical,
                                      const TransformResult& result) {
  if (logical.gates.empty()) {
    return std::nullopt;
  }
  return Rational{static_cast<long long>(result.physical.gates.size()),
                  static_cast<long long>(logical.gates.size())};
}

/// Corpus aggregate: total output CNOTs over total input CNOTs (a ratio of
/// totals, not a mean of ratios).
inline std::optional<Rational> i_cnot(
    const std::vector<std::pair<long long, long long>>& in_out_counts) {
  long long in_total = 0;
  long long out_total = 0;
  for (const auto& [in, out] : in_out_counts) {
    in_total += in;
    out_total += out;
  }
  if (in_total == 0) {
    return std::nullopt;
  }
  return Rational{out_total, in_total};
}

}  // namespace fidls
