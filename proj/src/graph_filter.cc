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

#include "bloomier/graph_filter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "bloomier/error.h"

namespace bloomier {
namespace {

constexpr uint32_t kH3Index = 0;
constexpr uint64_t kMaxVertices = std::numeric_limits<uint32_t>::max();

class UnionFind {
 public:
  explicit UnionFind(uint64_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), uint32_t{0});
  }

  uint32_t find(uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if a and b were already connected.
  bool unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  uint32_t size_of(uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<uint32_t> parent_;
  std::vector<uint32_t> size_;
};

struct GraphCheck {
  bool acyclic = true;
  uint64_t largest = 0;
};

void check_vertex_count(uint64_t vertex_count) {
  if (vertex_count > kMaxVertices) {
    throw UnsupportedSize("graph filter supports at most 2^32 - 1 vertices");
  }
}

GraphCheck check_graph(const BuildGraph& graph, bool stop_on_cycle) {
  check_vertex_count(graph.vertex_count);
  GraphCheck result;
  UnionFind uf(graph.vertex_count);
  for (const Edge& e : graph.edges) {
    if (e.u == e.v || !uf.unite(static_cast<uint32_t>(e.u), static_cast<uint32_t>(e.v))) {
      result.acyclic = false;
      if (stop_on_cycle) return result;
    }
  }
  result.largest = graph.vertex_count == 0 ? 0 : 1;
  for (uint64_t v = 0; v < graph.vertex_count; ++v) {
    result.largest = std::max<uint64_t>(result.largest, uf.size_of(static_cast<uint32_t>(v)));
  }
  return result;
}

// Residues are below m <= 2^63, so sums of two never overflow.
uint64_t mod_add(uint64_t a, uint64_t b, uint64_t m) {
  const uint64_t s = a + b;
  return s >= m ? s - m : s;
}

uint64_t mod_sub(uint64_t a, uint64_t b, uint64_t m) { return a >= b ? a - b : a + (m - b); }

uint64_t mod_add3(uint64_t a, uint64_t b, uint64_t c, uint64_t m) {
  return mod_add(mod_add(a, b, m), c, m);
}

// (f - a - b) mod m for a, b < m.
uint64_t mod_solve(uint64_t f, uint64_t a, uint64_t b, uint64_t m) {
  return mod_sub(mod_sub(f % m, a, m), b, m);
}

// Incident edge lists in CSR form, each list in edge order.
void build_adjacency(const BuildGraph& graph, std::vector<uint64_t>& offsets,
                     std::vector<uint64_t>& incident) {
  offsets.assign(graph.vertex_count + 1, 0);
  for (const Edge& e : graph.edges) {
    ++offsets[e.u + 1];
    if (e.v != e.u) ++offsets[e.v + 1];
  }
  for (uint64_t v = 0; v < graph.vertex_count; ++v) offsets[v + 1] += offsets[v];
  incident.assign(offsets.back(), 0);
  std::vector<uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (uint64_t i = 0; i < graph.edges.size(); ++i) {
    const Edge& e = graph.edges[i];
    incident[cursor[e.u]++] = i;
    if (e.v != e.u) incident[cursor[e.v]++] = i;
  }
}

uint64_t other_end(const Edge& e, uint64_t x) { return e.u == x ? e.v : e.u; }

struct Assembled {
  GraphFilter filter;
  BuildGraph graph;
  std::vector<uint64_t> values;
  std::vector<uint64_t> h3_values;
};

}  // namespace

namespace {

void validate_ring(uint64_t m, unsigned k) {
  if (m < 2) throw InputError("graph filter requires m >= 2");
  if (m > (uint64_t{1} << 63)) throw InputError("graph filter requires m <= 2^63");
  if (k < 1) throw InputError("graph filter requires k >= 1");
  if (k >= 64 || (uint64_t{1} << k) > m) throw InputError("graph filter requires m >= 2^k");
}

}  // namespace

void validate(const GraphParams& params) {
  if (!(params.c > 2)) throw InputError("graph filter requires c > 2");
  validate_ring(params.m, params.k);
  if (params.max_tries < 1) throw InputError("graph filter requires max_tries >= 1");
  if (params.component_cap && *params.component_cap < 1) {
    throw InputError("component_cap must be >= 1");
  }
}

uint64_t vertex_count_for(uint64_t n, double c) {
  const long double x = static_cast<long double>(n) * c;
  return static_cast<uint64_t>(std::ceil(x - 1e-9L * std::max<long double>(1, x)));
}

uint64_t default_component_cap(uint64_t n) {
  return static_cast<uint64_t>(
      std::ceil(24.0 * std::log(static_cast<double>(std::max<uint64_t>(n, 2)))));
}

bool is_simple_acyclic(const BuildGraph& graph) {
  return check_graph(graph, /*stop_on_cycle=*/true).acyclic;
}

uint64_t largest_component(const BuildGraph& graph) {
  return check_graph(graph, /*stop_on_cycle=*/false).largest;
}

std::vector<uint64_t> back_substitute(const BuildGraph& graph,
                                      std::span<const uint64_t> values,
                                      std::span<const uint64_t> h3_values, uint64_t m) {
  check_vertex_count(graph.vertex_count);
  const auto vertex_count = static_cast<uint32_t>(graph.vertex_count);

  // Each incident entry carries the far endpoint and (f - h3) mod m, so the
  // walk below reads one contiguous run per vertex.
  struct Incident {
    uint32_t other;
    uint64_t rhs;
  };
  std::vector<uint32_t> offsets(vertex_count + 1, 0);
  for (const Edge& e : graph.edges) {
    ++offsets[e.u + 1];
    if (e.v != e.u) ++offsets[e.v + 1];
  }
  for (uint32_t v = 0; v < vertex_count; ++v) offsets[v + 1] += offsets[v];
  std::vector<Incident> incident(offsets.back());
  {
    std::vector<uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : graph.edges) {
      const uint64_t rhs = mod_sub(values[e.key_id] % m, h3_values[e.key_id] % m, m);
      incident[cursor[e.u]++] = {static_cast<uint32_t>(e.v), rhs};
      if (e.v != e.u) incident[cursor[e.v]++] = {static_cast<uint32_t>(e.u), rhs};
    }
  }

  // m <= 2^63, so kUnassigned is never a table value.
  constexpr uint64_t kUnassigned = std::numeric_limits<uint64_t>::max();
  std::vector<uint64_t> g(vertex_count, kUnassigned);
  std::vector<uint32_t> queue;
  queue.reserve(vertex_count);
  for (uint32_t root = 0; root < vertex_count; ++root) {
    if (offsets[root] == offsets[root + 1]) {
      g[root] = 0;
      continue;
    }
    if (g[root] != kUnassigned) continue;
    g[root] = 0;
    queue.clear();
    queue.push_back(root);
    for (size_t head = 0; head < queue.size(); ++head) {
      const uint32_t x = queue[head];
      const uint64_t gx = g[x];
      for (uint32_t i = offsets[x]; i < offsets[x + 1]; ++i) {
        const auto [w, rhs] = incident[i];
        if (g[w] == kUnassigned) {
          g[w] = mod_sub(rhs, gx, m);
          queue.push_back(w);
        } else if (mod_add(gx, g[w], m) != rhs) {
          throw std::logic_error("back_substitute: conflicting assignment, graph has a cycle");
        }
      }
    }
  }
  return g;
}

void GraphFilter::init_hashes() {
  h3_ = KeyedHash(HashSpec{seed_, kH3Index, m_});
  if (vertex_count_ > 0) {
    h1_ = KeyedHash(HashSpec{seed_, 1 + 2 * attempt_, vertex_count_});
    h2_ = KeyedHash(HashSpec{seed_, 2 + 2 * attempt_, vertex_count_ - 1});
  }
}

Edge GraphFilter::edge_of(std::string_view key) const {
  // The second endpoint is drawn uniformly from the other V - 1 vertices.
  const uint64_t u = h1_(key);
  uint64_t v = u + 1 + h2_(key);
  if (v >= vertex_count_) v -= vertex_count_;
  return Edge{u, v, 0};
}

QueryResult GraphFilter::query(std::string_view key) const {
  uint64_t y = h3_(key);
  if (vertex_count_ > 0) {
    const Edge e = edge_of(key);
    y = mod_add3(table_.get(e.u), table_.get(e.v), y, m_);
  }
  if (y < (uint64_t{1} << k_)) return y;
  return std::nullopt;
}

GraphFilter GraphFilter::from_parts(uint64_t n, uint64_t vertex_count, uint64_t m, unsigned k,
                                    uint64_t seed, uint32_t attempt, PackedVector table) {
  validate_ring(m, k);
  if (vertex_count == 1) throw InputError("graph filter needs 0 or >= 2 vertices");
  if ((vertex_count == 0) != (n == 0)) throw InputError("graph filter vertex count mismatch");
  if (attempt >= (std::numeric_limits<uint32_t>::max() - 2) / 2) {
    throw InputError("graph filter attempt index out of range");
  }
  if (table.size() != vertex_count || table.width() != bits_for_modulus(m)) {
    throw InputError("graph filter table shape mismatch");
  }
  for (uint64_t i = 0; i < table.size(); ++i) {
    if (table.get(i) >= m) throw InputError("graph filter table entry out of range");
  }
  GraphFilter f;
  f.n_ = n;
  f.vertex_count_ = vertex_count;
  f.m_ = m;
  f.k_ = k;
  f.seed_ = seed;
  f.attempt_ = attempt;
  f.table_ = std::move(table);
  f.init_hashes();
  return f;
}

namespace {

Assembled assemble(std::span<const KeyValue> pairs, const GraphParams& params,
                   uint64_t master_seed, std::optional<uint64_t> cap) {
  validate(params);
  check_pairs(pairs, params.k);
  const uint64_t n = pairs.size();
  const uint64_t vertex_count = vertex_count_for(n, params.c);
  check_vertex_count(vertex_count);

  Assembled out;
  out.graph.vertex_count = vertex_count;
  out.graph.edges.resize(n);
  uint32_t attempt = 0;
  for (;; ++attempt) {
    if (attempt >= params.max_tries) {
      throw BuildFailure("graph filter: no acceptable graph after " +
                             std::to_string(params.max_tries) + " attempts",
                         params.max_tries);
    }
    out.filter = GraphFilter::from_parts(n, vertex_count, params.m, params.k, master_seed,
                                         attempt,
                                         PackedVector(vertex_count, bits_for_modulus(params.m)));
    for (uint64_t i = 0; i < n; ++i) {
      out.graph.edges[i] = out.filter.edge_of(pairs[i].key);
      out.graph.edges[i].key_id = i;
    }
    const GraphCheck check = check_graph(out.graph, /*stop_on_cycle=*/true);
    if (check.acyclic && (!cap || check.largest <= *cap)) break;
  }

  out.values.resize(n);
  out.h3_values.resize(n);
  for (uint64_t i = 0; i < n; ++i) {
    out.values[i] = pairs[i].value;
    out.h3_values[i] = out.filter.h3(pairs[i].key);
  }
  const auto g = back_substitute(out.graph, out.values, out.h3_values, params.m);
  PackedVector table(vertex_count, bits_for_modulus(params.m));
  for (uint64_t v = 0; v < vertex_count; ++v) table.set(v, g[v]);
  out.filter = GraphFilter::from_parts(n, vertex_count, params.m, params.k, master_seed,
                                       attempt, std::move(table));
  return out;
}

}  // namespace

GraphFilter GraphFilter::build(std::span<const KeyValue> pairs, const GraphParams& params,
                               uint64_t master_seed) {
  return assemble(pairs, params, master_seed, std::nullopt).filter;
}

MutableGraphFilter MutableGraphFilter::build(std::span<const KeyValue> pairs,
                                             const GraphParams& params,
                                             uint64_t master_seed) {
  MutableGraphFilter out;
  out.cap_ = params.component_cap.value_or(default_component_cap(pairs.size()));
  Assembled a = assemble(pairs, params, master_seed, out.cap_);
  out.filter_ = std::move(a.filter);
  out.graph_ = std::move(a.graph);
  out.values_ = std::move(a.values);
  out.h3_values_ = std::move(a.h3_values);
  out.key_index_.reserve(pairs.size());
  for (uint32_t i = 0; i < pairs.size(); ++i) out.key_index_.emplace(pairs[i].key, i);

  build_adjacency(out.graph_, out.adj_offsets_, out.adj_edges_);
  const uint64_t vertex_count = out.graph_.vertex_count;
  constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();
  out.component_.assign(vertex_count, kUnset);
  for (uint64_t root = 0; root < vertex_count; ++root) {
    if (out.component_[root] != kUnset) continue;
    const auto id = static_cast<uint32_t>(out.component_vertices_.size());
    auto& members = out.component_vertices_.emplace_back();
    out.component_[root] = id;
    members.push_back(root);
    for (size_t head = 0; head < members.size(); ++head) {
      const uint64_t x = members[head];
      for (uint64_t i = out.adj_offsets_[x]; i < out.adj_offsets_[x + 1]; ++i) {
        const uint64_t w = other_end(out.graph_.edges[out.adj_edges_[i]], x);
        if (out.component_[w] == kUnset) {
          out.component_[w] = id;
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
  return out;
}

uint64_t MutableGraphFilter::largest_component_size() const {
  uint64_t largest = 0;
  for (const auto& c : component_vertices_) largest = std::max<uint64_t>(largest, c.size());
  return largest;
}

size_t MutableGraphFilter::solve_component(uint32_t component) {
  const auto& members = component_vertices_[component];
  const uint64_t m = filter_.m_;
  PackedVector& table = filter_.table_;
  // The component is a tree: walk it from its lowest vertex, skipping the
  // edge we arrived by.
  struct Item {
    uint64_t vertex;
    uint64_t via;
  };
  constexpr uint64_t kNone = std::numeric_limits<uint64_t>::max();
  std::vector<Item> stack{{members.front(), kNone}};
  table.set(members.front(), 0);
  size_t touched = 1;
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    for (uint64_t i = adj_offsets_[item.vertex]; i < adj_offsets_[item.vertex + 1]; ++i) {
      const uint64_t edge_index = adj_edges_[i];
      if (edge_index == item.via) continue;
      const Edge& e = graph_.edges[edge_index];
      const uint64_t w = other_end(e, item.vertex);
      table.set(w, mod_solve(values_[e.key_id], table.get(item.vertex),
                             h3_values_[e.key_id], m));
      ++touched;
      stack.push_back({w, edge_index});
    }
  }
  return touched;
}

size_t MutableGraphFilter::update_value(std::string_view key, uint64_t new_value) {
  const auto it = key_index_.find(std::string(key));
  if (it == key_index_.end()) throw UnknownKey("update_value: key not stored");
  if (new_value >= (uint64_t{1} << filter_.k_)) {
    throw InputError("update_value: value does not fit in k bits");
  }
  values_[it->second] = new_value;
  return solve_component(component_[graph_.edges[it->second].u]);
}

}  // namespace bloomier
