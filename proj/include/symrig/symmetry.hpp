#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symrig/errors.hpp"
#include "symrig/framework.hpp"
#include "symrig/graph.hpp"
#include "symrig/linalg.hpp"

namespace symrig {

struct SymmetryOperation {
  std::string label;
  Matrix matrix;
};

enum class BuiltinKind { C1, Cs, Cm, Cmv };

struct BuiltinInfo {
  BuiltinKind kind;
  int m = 1;
};

/// Finite group of orthogonal d x d matrices with a precomputed
/// multiplication table. Element 0 is always the identity; the element order
/// is part of the public contract because characters and type maps are
/// reported against it.
class SymmetryGroup {
public:
  int dim = 0;
  std::vector<SymmetryOperation> ops;
  std::vector<std::vector<int>> cayley;
  std::optional<BuiltinInfo> builtin;

  int order() const { return static_cast<int>(ops.size()); }
  int product(int i, int j) const {
    return cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  int inverse(int i) const {
    for (int j = 0; j < order(); ++j)
      if (product(i, j) == 0) return j;
    throw validation_error("group element has no inverse");
  }
  const Matrix& matrix(int i) const {
    return ops[static_cast<std::size_t>(i)].matrix;
  }
  const std::string& label(int i) const {
    return ops[static_cast<std::size_t>(i)].label;
  }

  int find(const Matrix& m, double tol) const {
    for (int i = 0; i < order(); ++i)
      if ((matrix(i) - m).lpNorm<Eigen::Infinity>() <= tol) return i;
    return -1;
  }

  /// Checks orthogonality of every operation, identity at index 0, closure,
  /// and existence of inverses.
  void validate(double tol = 1e-9) const {
    if (dim < 1 || ops.empty()) throw validation_error("empty group");
    for (const auto& op : ops) {
      if (op.matrix.rows() != dim || op.matrix.cols() != dim)
        throw validation_error("operation has wrong shape");
      const double err = (op.matrix.transpose() * op.matrix -
                          Matrix::Identity(dim, dim))
                             .lpNorm<Eigen::Infinity>();
      if (err > 1e-12)
        throw validation_error("operation '" + op.label +
                               "' is not orthogonal");
    }
    if ((matrix(0) - Matrix::Identity(dim, dim)).lpNorm<Eigen::Infinity>() >
        tol)
      throw validation_error("element 0 is not the identity");
    if (cayley.size() != ops.size())
      throw validation_error("multiplication table has wrong size");
    for (int i = 0; i < order(); ++i) {
      if (cayley[static_cast<std::size_t>(i)].size() != ops.size())
        throw validation_error("multiplication table has wrong size");
      for (int j = 0; j < order(); ++j) {
        const int k = product(i, j);
        if (k < 0 || k >= order())
          throw validation_error("multiplication table entry out of range");
        if ((matrix(i) * matrix(j) - matrix(k)).lpNorm<Eigen::Infinity>() >
            tol)
          throw validation_error("group is not closed under products");
      }
    }
    for (int i = 0; i < order(); ++i) inverse(i);
  }
};

namespace detail {

inline void fill_cayley(SymmetryGroup& g, double tol) {
  const int k = g.order();
  g.cayley.assign(static_cast<std::size_t>(k),
                  std::vector<int>(static_cast<std::size_t>(k), -1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int idx = g.find(g.matrix(i) * g.matrix(j), tol);
      if (idx < 0)
        throw validation_error("group is not closed under products");
      g.cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = idx;
    }
}

} // namespace detail

/// Closure of the generators under multiplication, identity first, in a
/// deterministic breadth-first order. Two matrices within tol (entrywise)
/// count as the same element.
inline SymmetryGroup group_from_generators(int dim,
                                           const std::vector<Matrix>& gens,
                                           double tol = 1e-9,
                                           int max_order = 1000) {
  if (dim < 1) throw validation_error("dimension must be at least 1");
  SymmetryGroup g;
  g.dim = dim;
  g.ops.push_back({"Id", Matrix::Identity(dim, dim)});
  for (const auto& m : gens) {
    if (m.rows() != dim || m.cols() != dim)
      throw validation_error("generator has wrong shape");
    if (g.find(m, tol) < 0)
      g.ops.push_back({"g" + std::to_string(g.order()), m});
  }
  for (std::size_t i = 0; i < g.ops.size(); ++i) {
    for (const auto& m : gens) {
      const Matrix prod = g.ops[i].matrix * m;
      if (g.find(prod, tol) < 0) {
        if (g.order() >= max_order)
          throw validation_error("generator closure exceeds maximum order");
        g.ops.push_back({"g" + std::to_string(g.order()), prod});
      }
    }
  }
  detail::fill_cayley(g, tol);
  g.validate(tol);
  return g;
}

inline Matrix rotation2(double angle) {
  Matrix m(2, 2);
  m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return m;
}

inline Matrix reflection2(double mirror_angle) {
  // Reflection across the line through the origin at this angle.
  Matrix m(2, 2);
  m << std::cos(2 * mirror_angle), std::sin(2 * mirror_angle),
      std::sin(2 * mirror_angle), -std::cos(2 * mirror_angle);
  return m;
}

/// Planar point groups: the trivial group, a single mirror, the cyclic
/// rotation groups and the dihedral groups. Rotations come first (identity,
/// then increasing angle), then mirrors at mirror_angle + k*pi/m. All
/// operations fix the origin.
inline SymmetryGroup builtin_group_2d(BuiltinKind kind, int m = 1,
                                      double mirror_angle = 0.0) {
  SymmetryGroup g;
  g.dim = 2;
  const double pi = std::acos(-1.0);
  auto rotation_label = [](int m_, int k) {
    std::ostringstream s;
    s << "C" << m_;
    if (k > 1) s << "^" << k;
    return s.str();
  };
  switch (kind) {
    case BuiltinKind::C1:
      g.ops.push_back({"Id", Matrix::Identity(2, 2)});
      g.builtin = BuiltinInfo{BuiltinKind::C1, 1};
      break;
    case BuiltinKind::Cs:
      g.ops.push_back({"Id", Matrix::Identity(2, 2)});
      g.ops.push_back({"s", reflection2(mirror_angle)});
      g.builtin = BuiltinInfo{BuiltinKind::Cs, 1};
      break;
    case BuiltinKind::Cm:
      if (m < 2) throw validation_error("rotation order must be at least 2");
      g.ops.push_back({"Id", Matrix::Identity(2, 2)});
      for (int k = 1; k < m; ++k)
        g.ops.push_back(
            {rotation_label(m, k), rotation2(2 * pi * k / m)});
      g.builtin = BuiltinInfo{BuiltinKind::Cm, m};
      break;
    case BuiltinKind::Cmv:
      if (m < 2) throw validation_error("rotation order must be at least 2");
      g.ops.push_back({"Id", Matrix::Identity(2, 2)});
      for (int k = 1; k < m; ++k)
        g.ops.push_back(
            {rotation_label(m, k), rotation2(2 * pi * k / m)});
      for (int k = 0; k < m; ++k)
        g.ops.push_back({"s" + std::to_string(k),
                         reflection2(mirror_angle + pi * k / m)});
      g.builtin = BuiltinInfo{BuiltinKind::Cmv, m};
      break;
  }
  detail::fill_cayley(g, 1e-9);
  g.validate(1e-9);
  return g;
}

/// Assignment of a vertex permutation to every group element: images[x][v]
/// is the vertex that element x sends v to.
struct TypeMap {
  std::vector<std::vector<int>> images;
};

struct TypeMapDiagnostics {
  bool valid = false;
  /// Elements whose assigned permutation is not a graph automorphism.
  std::vector<int> automorphism_failures;
  /// Element index pairs (x, y) where images[x] o images[y] != images[xy].
  std::vector<std::pair<int, int>> homomorphism_failures;
  std::string message;
};

/// Checks that every image is a graph automorphism and that composition
/// follows the group's multiplication table.
inline TypeMapDiagnostics validate_type_map(const Graph& g,
                                            const SymmetryGroup& group,
                                            const TypeMap& map) {
  TypeMapDiagnostics diag;
  if (map.images.size() != static_cast<std::size_t>(group.order())) {
    diag.message = "type map must assign a permutation to every element";
    return diag;
  }
  for (int x = 0; x < group.order(); ++x)
    if (!is_graph_automorphism(g, map.images[static_cast<std::size_t>(x)]))
      diag.automorphism_failures.push_back(x);
  if (diag.automorphism_failures.empty()) {
    for (int x = 0; x < group.order(); ++x)
      for (int y = 0; y < group.order(); ++y) {
        const auto composed =
            compose_permutations(map.images[static_cast<std::size_t>(x)],
                                 map.images[static_cast<std::size_t>(y)]);
        if (composed !=
            map.images[static_cast<std::size_t>(group.product(x, y))])
          diag.homomorphism_failures.push_back({x, y});
      }
  }
  diag.valid = diag.automorphism_failures.empty() &&
               diag.homomorphism_failures.empty();
  if (!diag.valid && diag.message.empty()) {
    std::ostringstream s;
    if (!diag.automorphism_failures.empty())
      s << diag.automorphism_failures.size()
        << " element(s) do not act by graph automorphisms";
    else
      s << diag.homomorphism_failures.size()
        << " product(s) violate the multiplication table";
    diag.message = s.str();
  } else if (diag.valid) {
    diag.message = "ok";
  }
  return diag;
}

/// Geometric compatibility: every operation sends each joint to the position
/// of its image vertex, within tol (scaled by the coordinate magnitude).
inline bool is_compatible(const Framework& fw, const SymmetryGroup& group,
                          const TypeMap& map, double tol = 1e-9) {
  fw.validate();
  if (group.dim != fw.dim())
    throw validation_error("group dimension does not match framework");
  const auto diag = validate_type_map(fw.graph, group, map);
  if (!diag.valid)
    throw validation_error("invalid type map: " + diag.message);
  const double scale =
      std::max(1.0, fw.config.coords.lpNorm<Eigen::Infinity>());
  for (int x = 0; x < group.order(); ++x)
    for (int v = 0; v < fw.joint_count(); ++v) {
      const Vector image = group.matrix(x) * fw.config.point(v);
      const int w = map.images[static_cast<std::size_t>(x)]
                              [static_cast<std::size_t>(v)];
      if ((image - fw.config.point(w)).lpNorm<Eigen::Infinity>() > tol * scale)
        return false;
    }
  return true;
}

namespace detail {

struct TypeMapSearch {
  const Framework& fw;
  const SymmetryGroup& group;
  long long state_cap;
  long long states = 0;
  std::vector<std::vector<std::vector<int>>> candidates; // element, vertex
  std::vector<std::vector<std::vector<int>>> element_perms;

  void bump() {
    if (++states > state_cap)
      throw validation_error("type map search exceeded the state cap");
  }

  void enumerate_vertex(int x, std::vector<int>& perm, std::vector<bool>& used,
                        int v) {
    bump();
    const int n = fw.joint_count();
    if (v == n) {
      if (is_graph_automorphism(fw.graph, perm))
        element_perms[static_cast<std::size_t>(x)].push_back(perm);
      return;
    }
    for (int w : candidates[static_cast<std::size_t>(x)]
                           [static_cast<std::size_t>(v)]) {
      if (used[static_cast<std::size_t>(w)]) continue;
      used[static_cast<std::size_t>(w)] = true;
      perm[static_cast<std::size_t>(v)] = w;
      enumerate_vertex(x, perm, used, v + 1);
      used[static_cast<std::size_t>(w)] = false;
    }
  }

  void combine(int x, std::vector<std::vector<int>>& chosen,
               std::vector<TypeMap>& out) {
    bump();
    const int k = group.order();
    if (x == k) {
      TypeMap map{chosen};
      if (validate_type_map(fw.graph, group, map).valid)
        out.push_back(std::move(map));
      return;
    }
    for (const auto& perm : element_perms[static_cast<std::size_t>(x)]) {
      bool consistent = true;
      for (int y = 0; y < x && consistent; ++y) {
        const int xy = group.product(x, y);
        if (xy < x &&
            compose_permutations(perm, chosen[static_cast<std::size_t>(y)]) !=
                chosen[static_cast<std::size_t>(xy)])
          consistent = false;
        const int yx = group.product(y, x);
        if (consistent && yx < x &&
            compose_permutations(chosen[static_cast<std::size_t>(y)], perm) !=
                chosen[static_cast<std::size_t>(yx)])
          consistent = false;
      }
      if (!consistent) continue;
      chosen[static_cast<std::size_t>(x)] = perm;
      combine(x + 1, chosen, out);
    }
  }
};

} // namespace detail

/// Enumerates every homomorphic vertex assignment compatible with the
/// geometry. With injective coordinates there is at most one; coincident
/// joints can make several valid. The search is bounded by a cap on visited
/// partial states.
inline std::vector<TypeMap> find_type_maps(const Framework& fw,
                                           const SymmetryGroup& group,
                                           double tol = 1e-9,
                                           long long state_cap = 1000000) {
  fw.validate();
  if (group.dim != fw.dim())
    throw validation_error("group dimension does not match framework");
  const int n = fw.joint_count(), k = group.order();
  detail::TypeMapSearch search{fw, group, state_cap, 0, {}, {}};
  search.candidates.assign(
      static_cast<std::size_t>(k),
      std::vector<std::vector<int>>(static_cast<std::size_t>(n)));
  const double scale =
      std::max(1.0, fw.config.coords.lpNorm<Eigen::Infinity>());
  for (int x = 0; x < k; ++x)
    for (int v = 0; v < n; ++v) {
      const Vector image = group.matrix(x) * fw.config.point(v);
      for (int w = 0; w < n; ++w)
        if ((image - fw.config.point(w)).lpNorm<Eigen::Infinity>() <=
            tol * scale)
          search.candidates[static_cast<std::size_t>(x)]
                           [static_cast<std::size_t>(v)]
                               .push_back(w);
    }

  search.element_perms.assign(static_cast<std::size_t>(k), {});
  // The identity must act by the identity permutation in any homomorphic map.
  search.element_perms[0].push_back(identity_permutation(n));
  for (int x = 1; x < k; ++x) {
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    search.enumerate_vertex(x, perm, used, 0);
    if (search.element_perms[static_cast<std::size_t>(x)].empty()) return {};
  }

  std::vector<TypeMap> out;
  std::vector<std::vector<int>> chosen(static_cast<std::size_t>(k));
  search.combine(0, chosen, out);
  return out;
}

/// Per-element counts of fixed vertices and setwise-fixed edges.
struct FixedCounts {
  std::vector<int> joints;
  std::vector<int> bars;
};

inline FixedCounts fixed_counts(const Graph& g, const TypeMap& map) {
  FixedCounts out;
  for (const auto& perm : map.images) {
    if (!is_permutation(perm, g.n))
      throw validation_error("type map entry is not a vertex permutation");
    int j = 0;
    for (int v = 0; v < g.n; ++v)
      if (perm[static_cast<std::size_t>(v)] == v) ++j;
    int b = 0;
    for (const auto& [u, v] : g.edges) {
      const int iu = perm[static_cast<std::size_t>(u)];
      const int iv = perm[static_cast<std::size_t>(v)];
      if ((iu == u && iv == v) || (iu == v && iv == u)) ++b;
    }
    out.joints.push_back(j);
    out.bars.push_back(b);
  }
  return out;
}

/// Copy of the configuration translated so the centroid sits at the origin,
/// where the point-group operations act.
inline Configuration recentered(const Configuration& c) {
  c.validate();
  Configuration out = c;
  const Eigen::RowVectorXd mean = c.coords.colwise().mean();
  out.coords.rowwise() -= mean;
  if (c.exact) {
    const std::size_t n = c.exact->rows(), d = c.exact->cols();
    RationalMatrix shifted(n, d);
    for (std::size_t j = 0; j < d; ++j) {
      Rational m(0);
      for (std::size_t i = 0; i < n; ++i) m += c.exact->at(i, j);
      m /= static_cast<int>(n);
      for (std::size_t i = 0; i < n; ++i)
        shifted.at(i, j) = c.exact->at(i, j) - m;
    }
    out.exact = shifted;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out.coords(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(j)) = to_double(shifted.at(i, j));
  }
  return out;
}

} // namespace symrig
