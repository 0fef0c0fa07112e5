#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symrig/errors.hpp"

namespace symrig {

/// Simple undirected graph on vertices 0..n-1. Edges keep their given order
/// because rigidity-matrix rows are indexed by it.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  int edge_count() const { return static_cast<int>(edges.size()); }

  void validate() const {
    if (n < 1) throw validation_error("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw validation_error("edge endpoint out of range");
      if (u == v) throw validation_error("loops are not allowed");
      auto key = std::minmax(u, v);
      if (!seen.insert({key.first, key.second}).second)
        throw validation_error("duplicate edge");
    }
  }

  /// Edge index lookup keyed on the unordered pair.
  std::map<std::pair<int, int>, int> edge_index() const {
    std::map<std::pair<int, int>, int> idx;
    for (int f = 0; f < edge_count(); ++f) {
      auto key = std::minmax(edges[f].first, edges[f].second);
      idx[{key.first, key.second}] = f;
    }
    return idx;
  }

  bool has_edge(int u, int v) const {
    auto key = std::minmax(u, v);
    for (const auto& [a, b] : edges) {
      auto k = std::minmax(a, b);
      if (k == key) return true;
    }
    return false;
  }

  bool is_complete() const {
    return edge_count() == n * (n - 1) / 2 && [this] {
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (!has_edge(u, v)) return false;
      return true;
    }();
  }
};

/// True if perm is a bijection of 0..n-1.
inline bool is_permutation(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int v : perm) {
    if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

/// Composition a after b: result[v] = a[b[v]].
inline std::vector<int> compose_permutations(const std::vector<int>& a,
                                             const std::vector<int>& b) {
  std::vector<int> out(b.size());
  for (std::size_t v = 0; v < b.size(); ++v)
    out[v] = a[static_cast<std::size_t>(b[v])];
  return out;
}

inline std::vector<int> identity_permutation(int n) {
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) id[static_cast<std::size_t>(v)] = v;
  return id;
}

/// True if perm maps the edge set onto itself.
inline bool is_graph_automorphism(const Graph& g, const std::vector<int>& perm) {
  if (!is_permutation(perm, g.n)) return false;
  std::set<std::pair<int, int>> edge_set;
  for (const auto& [u, v] : g.edges) {
    auto key = std::minmax(u, v);
    edge_set.insert({key.first, key.second});
  }
  for (const auto& [u, v] : g.edges) {
    auto key = std::minmax(perm[static_cast<std::size_t>(u)],
                           perm[static_cast<std::size_t>(v)]);
    if (!edge_set.count({key.first, key.second})) return false;
  }
  return true;
}

/// Index permutation induced on the edge list by a vertex permutation, or an
/// empty vector if some image pair is not an edge.
inline std::vector<int> induced_edge_permutation(const Graph& g,
                                                 const std::vector<int>& perm) {
  auto idx = g.edge_index();
  std::vector<int> out(static_cast<std::size_t>(g.edge_count()));
  for (int f = 0; f < g.edge_count(); ++f) {
    auto key = std::minmax(perm[static_cast<std::size_t>(g.edges[f].first)],
                           perm[static_cast<std::size_t>(g.edges[f].second)]);
    auto it = idx.find({key.first, key.second});
    if (it == idx.end()) return {};
    out[static_cast<std::size_t>(f)] = it->second;
  }
  return out;
}

} // namespace symrig
