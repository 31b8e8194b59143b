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
#include <cstdint>
#include <fstream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fidls {

/// Unordered pair of physical qubits, stored normalized (first < second).
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

/// Undirected, connected graph of physical qubits with precomputed
/// all-pairs hop distances. Immutable after construction.
class ArchGraph {
public:
  /// Builds from an explicit edge list. Node ids must be dense: the node
  /// count is max id + 1. Rejects self-loops and disconnected graphs;
  /// duplicate edges collapse.
  static ArchGraph from_edges(const std::vector<Edge>& edges) {
    if (edges.empty()) {
      throw GraphError("architecture graph needs at least one edge");
    }
    int n = 0;
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0) {
        throw GraphError("negative node id in edge list");
      }
      if (u == v) {
        throw GraphError("self-loop on node " + std::to_string(u));
      }
      n = std::max({n, u + 1, v + 1});
    }
    ArchGraph g;
    g.num_nodes_ = n;
    g.edges_.reserve(edges.size());
    for (const auto& [u, v] : edges) {
      g.edges_.push_back(make_edge(u, v));
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()),
                   g.edges_.end());
    g.adj_.assign(static_cast<std::size_t>(n), {});
    for (const auto& [u, v] : g.edges_) {
      g.adj_[static_cast<std::size_t>(u)].push_back(v);
      g.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : g.adj_) {
      std::sort(nb.begin(), nb.end());
    }
    g.compute_distances();
    return g;
  }

  int num_nodes() const { return num_nodes_; }

  /// Sorted edge list; the index of an edge here is its id.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<int>& neighbors(int v) const {
    return adj_[static_cast<std::size_t>(v)];
  }

  int degree(int v) const {
    return static_cast<int>(adj_[static_cast<std::size_t>(v)].size());
  }

  /// Hop distance between two nodes.
  int dist(int u, int v) const {
    return dist_[static_cast<std::size_t>(u) *
                     static_cast<std::size_t>(num_nodes_) +
                 static_cast<std::size_t>(v)];
  }

  bool has_edge(int u, int v) const { return u != v && dist(u, v) == 1; }

  int diameter() const { return diameter_; }

  int max_degree() const { return max_degree_; }

private:
  ArchGraph() = default;

  void compute_distances() {
    const auto n = static_cast<std::size_t>(num_nodes_);
    dist_.assign(n * n, kUnreached);
    std::vector<int> queue;
    queue.reserve(n);
    for (std::size_t src = 0; src < n; ++src) {
      auto* row = &dist_[src * n];
      row[src] = 0;
      queue.clear();
      queue.push_back(static_cast<int>(src));
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        const auto du = row[u];
        for (int w : adj_[static_cast<std::size_t>(u)]) {
          if (row[w] == kUnreached) {
            row[w] = static_cast<std::uint16_t>(du + 1);
            queue.push_back(w);
          }
        }
      }
      if (queue.size() != n) {
        throw GraphError("architecture graph is disconnected");
      }
    }
    diameter_ = 0;
    for (auto d : dist_) {
      diameter_ = std::max(diameter_, static_cast<int>(d));
    }
    max_degree_ = 0;
    for (const auto& nb : adj_) {
      max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    }
  }

  static constexpr std::uint16_t kUnreached = 0xffff;

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::uint16_t> dist_;  // dense row-major |V| x |V|
  int diameter_ = 0;
  int max_degree_ = 0;
};

/// Parses an `.edges` file body: one "u v" pair per line, `#` comments.
inline ArchGraph load_arch(const std::string& text) {
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) {
      line.erase(pos);
    }
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    if (!(fields >> u)) {
      continue;  // blank or comment-only line
    }
    if (!(fields >> v)) {
      throw ParseError("expected two node ids", line_no);
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError("trailing tokens after edge", line_no);
    }
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return ArchGraph::from_edges(edges);
}

inline ArchGraph load_arch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open arch file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_arch(buf.str());
}

/// rows x cols lattice with 4-neighbor connectivity; node id = r*cols + c.
inline ArchGraph grid_arch(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw ContractViolation("grid dimensions must be positive");
  }
  if (rows * cols < 2) {
    throw GraphError("grid must have at least two nodes");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(2 * rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c;
      if (c + 1 < cols) {
        edges.emplace_back(id, id + 1);
      }
      if (r + 1 < rows) {
        edges.emplace_back(id, id + cols);
      }
    }
  }
  return ArchGraph::from_edges(edges);
}

}  // namespace fidls
