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

#include "fidls/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fidls {

/// A CNOT gate over logical qubit ids.
struct Gate {
  int control;
  int target;

  bool operator==(const Gate&) const = default;

  bool acts_on(int q) const { return control == q || target == q; }
};

/// Ordered CNOT-only circuit. Single-qubit gates seen by the parser are
/// counted, not kept.
struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  int stripped_1q_count = 0;
};

/// Direct-dependency DAG over gate indices: i -> j iff i < j, the gates
/// share a qubit, and no gate between them touches that qubit.
struct DepGraph {
  std::vector<std::vector<int>> parents;
  std::vector<std::vector<int>> children;
  std::vector<int> indegree;

  std::size_t size() const { return parents.size(); }
};

namespace detail {

inline std::string strip_line_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
      }
      if (i < text.size()) {
        out.push_back('\n');
      }
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

struct Operand {
  std::string reg;
  int index;
};

// "q[3]" -> {q, 3}
inline Operand parse_operand(std::string_view tok, int line_no) {
  auto lb = tok.find('[');
  auto rb = tok.find(']');
  if (lb == std::string_view::npos || rb == std::string_view::npos ||
      rb < lb + 2 || rb + 1 != tok.size()) {
    throw ParseError("malformed operand '" + std::string(tok) + "'", line_no);
  }
  const std::string reg(tok.substr(0, lb));
  int idx = 0;
  auto digits = tok.substr(lb + 1, rb - lb - 1);
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ParseError("malformed operand index in '" + std::string(tok) + "'",
                       line_no);
    }
    idx = idx * 10 + (ch - '0');
  }
  return {reg, idx};
}

}  // namespace detail

/// Parses an OpenQASM-2.0 subset. Keeps `cx` gates in program order;
/// counts and drops single-qubit gates; ignores headers, creg, barrier
/// and measure statements. Qubit names resolve to dense ids, registers
/// concatenated in declaration order.
inline Circuit parse_circuit(const std::string& text) {
  const std::string clean = detail::strip_line_comments(text);
  Circuit circ;
  std::map<std::string, int> reg_base;  // register name -> id offset
  std::map<std::string, int> reg_size;

  std::size_t pos = 0;
  int line_no = 1;
  while (pos < clean.size()) {
    auto stmt_end = clean.find(';', pos);
    std::string stmt = stmt_end == std::string::npos
                           ? clean.substr(pos)
                           : clean.substr(pos, stmt_end - pos);
    const int stmt_line =
        line_no + static_cast<int>(std::count(
                      stmt.begin(), stmt.end(),
                      '\n'));  // report errors at the statement's last line
    line_no = stmt_line;
    pos = stmt_end == std::string::npos ? clean.size() : stmt_end + 1;

    for (char& ch : stmt) {
      if (ch == '\n' || ch == '\t' || ch == '\r') {
        ch = ' ';
      }
    }
    std::istringstream fields(stmt);
    std::string head;
    if (!(fields >> head)) {
      continue;  // empty statement
    }

    if (head == "OPENQASM" || head == "include" || head == "barrier" ||
        head == "creg") {
      continue;
    }
    if (head == "measure") {
      continue;
    }
    if (head == "qreg") {
      std::string decl;
      if (!(fields >> decl)) {
        throw ParseError("qreg needs a declaration", stmt_line);
      }
      auto op = detail::parse_operand(decl, stmt_line);
      if (reg_base.count(op.reg) != 0) {
        throw ParseError("duplicate qreg '" + op.reg + "'", stmt_line);
      }
      reg_base[op.reg] = circ.num_qubits;
      reg_size[op.reg] = op.index;
      circ.num_qubits += op.index;
      continue;
    }

    // Gate statement: name[(params)] operand[, operand ...]
    std::string name = head;
    std::string rest;
    std::getline(fields, rest);
    if (auto paren = name.find('('); paren != std::string::npos) {
      // parameter list may continue into rest; drop through to ')'
      auto close = name.find(')');
      if (close == std::string::npos) {
        auto rclose = rest.find(')');
        if (rclose == std::string::npos) {
          throw ParseError("unterminated parameter list", stmt_line);
        }
        rest = rest.substr(rclose + 1);
      }
      name = name.substr(0, paren);
    } else if (auto rparen = rest.find('('); rparen != std::string::npos) {
      auto rclose = rest.find(')');
      if (rclose == std::string::npos || rclose < rparen) {
        throw ParseError("unterminated parameter list", stmt_line);
      }
      rest = rest.substr(rclose + 1);
    }

    std::vector<detail::Operand> operands;
    std::istringstream ops(rest);
    std::string tok;
    while (std::getline(ops, tok, ',')) {
      tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
      if (tok.empty()) {
        throw ParseError("empty operand", stmt_line);
      }
      operands.push_back(detail::parse_operand(tok, stmt_line));
    }
    if (operands.empty()) {
      throw ParseError("gate '" + name + "' has no operands", stmt_line);
    }
    auto resolve = [&](const detail::Operand& op) {
      auto it = reg_base.find(op.reg);
      if (it == reg_base.end()) {
        throw ParseError("unknown register '" + op.reg + "'", stmt_line);
      }
      if (op.index >= reg_size[op.reg]) {
        throw ParseError("index out of range for register '" + op.reg + "'",
                         stmt_line);
      }
      return it->second + op.index;
    };

    if (name == "cx" || name == "CX") {
      if (operands.size() != 2) {
        throw ParseError("cx needs exactly two operands", stmt_line);
      }
      const int c = resolve(operands[0]);
      const int t = resolve(operands[1]);
      if (c == t) {
        throw ValidationError("cx with identical control and target (line " +
                              std::to_string(stmt_line) + ")");
      }
      circ.gates.push_back({c, t});
    } else if (operands.size() == 1) {
      resolve(operands[0]);  // still validate the reference
      ++circ.stripped_1q_count;
    } else {
      throw UnsupportedGateError("unsupported multi-qubit gate '" + name +
                                 "' (line " + std::to_string(stmt_line) + ")");
    }
  }
  return circ;
}

inline Circuit parse_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open circuit file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

/// Links, per qubit, each gate to the previous gate on that qubit.
/// Runs in time linear in the gate count.
inline DepGraph build_dep_graph(const Circuit& c) {
  DepGraph d;
  const auto m = c.gates.size();
  d.parents.assign(m, {});
  d.children.assign(m, {});
  d.indegree.assign(m, 0);
  std::vector<int> last(static_cast<std::size_t>(c.num_qubits), -1);
  for (std::size_t i = 0; i < m; ++i) {
    const Gate& g = c.gates[i];
    for (int q : {g.control, g.target}) {
      const int p = last[static_cast<std::size_t>(q)];
      if (p < 0 || (!d.parents[i].empty() && d.parents[i].back() == p)) {
        continue;  // no earlier gate, or both qubits share the same parent
      }
      d.parents[i].push_back(p);
      d.children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
      ++d.indegree[i];
    }
    last[static_cast<std::size_t>(g.control)] = static_cast<int>(i);
    last[static_cast<std::size_t>(g.target)] = static_cast<int>(i);
    std::sort(d.parents[i].begin(), d.parents[i].end());
  }
  return d;
}

/// Layer decomposition by repeated front-layer removal. Returns at most
/// `upto` layers; layer 0 is the front layer.
inline std::vector<std::vector<int>> layers(const DepGraph& d, int upto) {
  if (upto < 1) {
    throw ContractViolation("layers: upto must be >= 1");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> indeg = d.indegree;
  std::vector<int> current;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (indeg[i] == 0) {
      current.push_back(static_cast<int>(i));
    }
  }
  while (!current.empty() && static_cast<int>(out.size()) < upto) {
    std::vector<int> next;
    for (int g : current) {
      for (int ch : d.children[static_cast<std::size_t>(g)]) {
        if (--indeg[static_cast<std::size_t>(ch)] == 0) {
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

}  // namespace fidls
