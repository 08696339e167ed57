// Copyright 2026 The Bloomier Authors.
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

#ifndef BLOOMIER_GRAPH_FILTER_H_
#define BLOOMIER_GRAPH_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bloomier/hashing.h"
#include "bloomier/key_value.h"
#include "bloomier/packed_vector.h"

namespace bloomier {

struct GraphParams {
  double c = 2.5;        // vertices per key, > 2
  uint64_t m = 65536;    // ring modulus, 2^k <= m <= 2^63
  unsigned k = 8;        // value bits
  unsigned max_tries = 64;
  // Mutable builds only: reject graphs with a component larger than this
  // many vertices. Unset means default_component_cap(n).
  std::optional<uint64_t> component_cap;
};

// Throws InputError when the parameters are inconsistent.
void validate(const GraphParams& params);

// ceil(c * n).
uint64_t vertex_count_for(uint64_t n, double c);

// ceil(24 ln max(n, 2)).
uint64_t default_component_cap(uint64_t n);

struct Edge {
  uint64_t u = 0;
  uint64_t v = 0;
  uint64_t key_id = 0;
};

struct BuildGraph {
  uint64_t vertex_count = 0;
  std::vector<Edge> edges;
};

// No self-loops, no parallel edges, no cycles. Union-find, near linear.
bool is_simple_acyclic(const BuildGraph& graph);

// Size in vertices of the largest connected component (isolated vertices
// count as components of size 1).
uint64_t largest_component(const BuildGraph& graph);

// Solves g[u] + g[v] + h3 = f (mod m) for every edge of an acyclic graph.
// `values` and `h3_values` are indexed by Edge::key_id. Each component is
// rooted at its lowest-numbered vertex with value 0; isolated vertices get 0.
// Throws std::logic_error if an edge closes a cycle with a conflicting value.
std::vector<uint64_t> back_substitute(const BuildGraph& graph,
                                      std::span<const uint64_t> values,
                                      std::span<const uint64_t> h3_values, uint64_t m);

// The acyclic-random-graph filter: g over Z/mZ on ceil(c n) vertices.
// A key x maps to the edge (h1(x), h2(x)); query returns
// (g[h1] + g[h2] + h3(x)) mod m when that lies below 2^k, else nullopt.
class GraphFilter {
 public:
  GraphFilter() = default;

  // Throws InputError for bad params or pairs, BuildFailure if no acceptable
  // graph is found within params.max_tries.
  static GraphFilter build(std::span<const KeyValue> pairs, const GraphParams& params,
                           uint64_t master_seed);

  // Reassembles a filter from its stored fields (used by the codec).
  static GraphFilter from_parts(uint64_t n, uint64_t vertex_count, uint64_t m, unsigned k,
                                uint64_t seed, uint32_t attempt, PackedVector table);

  QueryResult query(std::string_view key) const;

  // Edge endpoints of `key` under the accepted hash pair.
  Edge edge_of(std::string_view key) const;
  uint64_t h3(std::string_view key) const { return h3_(key); }

  uint64_t size() const { return n_; }
  uint64_t vertex_count() const { return vertex_count_; }
  uint64_t modulus() const { return m_; }
  unsigned value_bits() const { return k_; }
  uint64_t seed() const { return seed_; }
  // Zero-based index of the accepted graph; attempts() = attempt() + 1.
  uint32_t attempt() const { return attempt_; }
  uint32_t attempts() const { return attempt_ + 1; }
  const PackedVector& table() const { return table_; }

 private:
  friend class MutableGraphFilter;

  void init_hashes();

  uint64_t n_ = 0;
  uint64_t vertex_count_ = 0;
  uint64_t m_ = 2;
  unsigned k_ = 1;
  uint64_t seed_ = 0;
  uint32_t attempt_ = 0;
  PackedVector table_;
  KeyedHash h1_, h2_, h3_;
};

// GraphFilter plus the retained graph, so function values can be changed
// in time proportional to the size of one connected component.
class MutableGraphFilter {
 public:
  // As GraphFilter::build, additionally rejecting graphs whose largest
  // component exceeds params.component_cap.
  static MutableGraphFilter build(std::span<const KeyValue> pairs, const GraphParams& params,
                                  uint64_t master_seed);

  const GraphFilter& filter() const { return filter_; }
  QueryResult query(std::string_view key) const { return filter_.query(key); }

  // Re-solves the component holding `key`'s edge. Returns the number of
  // vertices touched. Throws UnknownKey if key was not stored, InputError if
  // new_value >= 2^k.
  size_t update_value(std::string_view key, uint64_t new_value);

  uint64_t component_cap() const { return cap_; }
  uint64_t largest_component_size() const;
  const BuildGraph& graph() const { return graph_; }
  uint32_t component_of_vertex(uint64_t v) const { return component_[v]; }

 private:
  size_t solve_component(uint32_t component);

  GraphFilter filter_;
  BuildGraph graph_;
  uint64_t cap_ = 0;
  std::vector<uint64_t> values_;
  std::vector<uint64_t> h3_values_;
  std::unordered_map<std::string, uint32_t> key_index_;
  std::vector<uint32_t> component_;                    // vertex -> component
  std::vector<std::vector<uint64_t>> component_vertices_;  // sorted ascending
  std::vector<uint64_t> adj_offsets_;                  // CSR over edges
  std::vector<uint64_t> adj_edges_;
};

}  // namespace bloomier

#endif  // BLOOMIER_GRAPH_FILTER_H_
