#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "symrig/errors.hpp"
#include "symrig/graph.hpp"
#include "symrig/linalg.hpp"
#include "symrig/symmetry.hpp"

namespace symrig {

/// One matrix per group element, indexed like the group's operation list.
struct MatrixRep {
  std::vector<Matrix> matrices;

  int degree() const {
    return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows());
  }
};

/// Homomorphism check: H(x) H(y) must match H(xy) through the group's
/// multiplication table, and H(identity) must be the identity.
inline bool is_representation(const SymmetryGroup& group, const MatrixRep& rep,
                              double tol = 1e-9) {
  if (rep.matrices.size() != static_cast<std::size_t>(group.order()))
    return false;
  const int deg = rep.degree();
  for (const auto& m : rep.matrices)
    if (m.rows() != deg || m.cols() != deg) return false;
  if ((rep.matrices[0] - Matrix::Identity(deg, deg)).lpNorm<Eigen::Infinity>() >
      tol)
    return false;
  for (int x = 0; x < group.order(); ++x)
    for (int y = 0; y < group.order(); ++y) {
      const Matrix prod = rep.matrices[static_cast<std::size_t>(x)] *
                          rep.matrices[static_cast<std::size_t>(y)];
      const auto& expect =
          rep.matrices[static_cast<std::size_t>(group.product(x, y))];
      if ((prod - expect).lpNorm<Eigen::Infinity>() > tol) return false;
    }
  return true;
}

/// Action on stacked joint displacements: element x sends joint v's d-block,
/// transformed by M_x, to its image vertex's block. Concretely block position
/// (row Phi(x)(v), column v) holds M_x.
inline MatrixRep external_rep(const Graph& g, const SymmetryGroup& group,
                              const TypeMap& map) {
  const auto diag = validate_type_map(g, group, map);
  if (!diag.valid)
    throw validation_error("invalid type map: " + diag.message);
  const int d = group.dim, n = g.n;
  MatrixRep rep;
  for (int x = 0; x < group.order(); ++x) {
    Matrix h = Matrix::Zero(static_cast<Eigen::Index>(d) * n,
                            static_cast<Eigen::Index>(d) * n);
    for (int v = 0; v < n; ++v) {
      const int w =
          map.images[static_cast<std::size_t>(x)][static_cast<std::size_t>(v)];
      h.block(static_cast<Eigen::Index>(d) * w,
              static_cast<Eigen::Index>(d) * v, d, d) = group.matrix(x);
    }
    rep.matrices.push_back(std::move(h));
  }
  return rep;
}

/// Action on bar stresses: the permutation of the edge list induced by each
/// element, with entry (image edge, edge) set to one.
inline MatrixRep internal_rep(const Graph& g, const SymmetryGroup& group,
                              const TypeMap& map) {
  const auto diag = validate_type_map(g, group, map);
  if (!diag.valid)
    throw validation_error("invalid type map: " + diag.message);
  const int m = g.edge_count();
  MatrixRep rep;
  for (int x = 0; x < group.order(); ++x) {
    const auto edge_perm =
        induced_edge_permutation(g, map.images[static_cast<std::size_t>(x)]);
    Matrix h = Matrix::Zero(m, m);
    for (int f = 0; f < m; ++f)
      h(edge_perm[static_cast<std::size_t>(f)], f) = 1.0;
    rep.matrices.push_back(std::move(h));
  }
  return rep;
}

using Character = std::vector<double>;

inline Character character(const MatrixRep& rep) {
  Character chi;
  for (const auto& m : rep.matrices) chi.push_back(m.trace());
  return chi;
}

struct Irrep {
  std::string name;
  int degree = 1;
  Character values;
};

struct CharacterTable {
  std::vector<Irrep> irreps;

  int count() const { return static_cast<int>(irreps.size()); }
};

inline double character_dot(const Character& a, const Character& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Sanity checks for a table over real irreducible characters: row shape,
/// degree at the identity, row norm |S| (real type) or 2|S| (a merged pair of
/// complex-conjugate constituents), pairwise orthogonality and completeness.
inline void validate_character_table(const CharacterTable& table,
                                     const SymmetryGroup& group,
                                     double tol = 1e-6) {
  if (table.irreps.empty()) throw validation_error("empty character table");
  const double order = group.order();
  double completeness = 0.0;
  for (const auto& irrep : table.irreps) {
    if (irrep.values.size() != static_cast<std::size_t>(group.order()))
      throw validation_error("character row '" + irrep.name +
                             "' has the wrong length");
    if (std::abs(irrep.values[0] - irrep.degree) > tol)
      throw validation_error("character row '" + irrep.name +
                             "' does not start with its degree");
    const double norm2 = character_dot(irrep.values, irrep.values);
    if (std::abs(norm2 - order) > tol && std::abs(norm2 - 2 * order) > tol)
      throw validation_error("character row '" + irrep.name +
                             "' has norm incompatible with irreducibility");
    completeness += irrep.degree * irrep.degree * order / norm2;
  }
  for (int s = 0; s < table.count(); ++s)
    for (int t = s + 1; t < table.count(); ++t) {
      const double dot =
          character_dot(table.irreps[static_cast<std::size_t>(s)].values,
                        table.irreps[static_cast<std::size_t>(t)].values);
      if (std::abs(dot) > tol * order)
        throw validation_error("character rows '" +
                               table.irreps[static_cast<std::size_t>(s)].name +
                               "' and '" +
                               table.irreps[static_cast<std::size_t>(t)].name +
                               "' are not orthogonal");
    }
  if (std::abs(completeness - order) > tol)
    throw validation_error("character table is incomplete for this group");
}

/// Real character tables for the built-in planar groups, rows in a fixed
/// order. Cyclic groups of order three and above carry their conjugate pairs
/// of one-dimensional complex characters merged into degree-2 rows (values
/// 2cos(2 pi j k / m)), which is what the real block-diagonalization uses.
inline CharacterTable character_table(const SymmetryGroup& group) {
  if (!group.builtin)
    throw validation_error(
        "no built-in character table for this group; supply one");
  const double pi = std::acos(-1.0);
  CharacterTable table;
  const int m = group.builtin->m;
  auto pair_name = [](int j, int pairs) {
    return pairs == 1 ? std::string("E") : "E" + std::to_string(j);
  };
  switch (group.builtin->kind) {
    case BuiltinKind::C1:
      table.irreps.push_back({"A", 1, {1.0}});
      break;
    case BuiltinKind::Cs:
      table.irreps.push_back({"A'", 1, {1.0, 1.0}});
      table.irreps.push_back({"A''", 1, {1.0, -1.0}});
      break;
    case BuiltinKind::Cm: {
      Character a(static_cast<std::size_t>(m), 1.0);
      table.irreps.push_back({"A", 1, a});
      if (m % 2 == 0) {
        Character b;
        for (int k = 0; k < m; ++k) b.push_back(k % 2 == 0 ? 1.0 : -1.0);
        table.irreps.push_back({"B", 1, b});
      }
      const int pairs = (m - 1) / 2;
      for (int j = 1; j <= pairs; ++j) {
        Character e;
        for (int k = 0; k < m; ++k)
          e.push_back(2.0 * std::cos(2.0 * pi * j * k / m));
        table.irreps.push_back({pair_name(j, pairs), 2, e});
      }
      break;
    }
    case BuiltinKind::Cmv: {
      // One-dimensional rows: eps^k on the k-th rotation, eps^k * delta on
      // the k-th mirror (the mirrors are rotation^k times the first mirror).
      auto one_dim = [&](double eps, double delta) {
        Character chi;
        for (int k = 0; k < m; ++k) chi.push_back(k % 2 == 0 ? 1.0 : eps);
        for (int k = 0; k < m; ++k)
          chi.push_back((k % 2 == 0 ? 1.0 : eps) * delta);
        return chi;
      };
      table.irreps.push_back({"A1", 1, one_dim(1.0, 1.0)});
      table.irreps.push_back({"A2", 1, one_dim(1.0, -1.0)});
      if (m % 2 == 0) {
        table.irreps.push_back({"B1", 1, one_dim(-1.0, 1.0)});
        table.irreps.push_back({"B2", 1, one_dim(-1.0, -1.0)});
      }
      const int pairs = (m % 2 == 0) ? m / 2 - 1 : (m - 1) / 2;
      for (int j = 1; j <= pairs; ++j) {
        Character e;
        for (int k = 0; k < m; ++k)
          e.push_back(2.0 * std::cos(2.0 * pi * j * k / m));
        for (int k = 0; k < m; ++k) e.push_back(0.0);
        table.irreps.push_back({pair_name(j, pairs), 2, e});
      }
      break;
    }
  }
  validate_character_table(table, group);
  return table;
}

/// Multiplicity of each table row in a representation character, by the
/// orthogonality relations. Non-integral results signal that the character
/// does not come from a representation, or that the table is wrong.
inline std::vector<long long> decompose(const Character& chi,
                                        const CharacterTable& table,
                                        double tol = 1e-6) {
  std::vector<long long> mult;
  for (const auto& irrep : table.irreps) {
    if (irrep.values.size() != chi.size())
      throw validation_error("character length does not match table");
    const double alpha = character_dot(chi, irrep.values) /
                         character_dot(irrep.values, irrep.values);
    const double rounded = std::round(alpha);
    if (std::abs(alpha - rounded) > tol)
      throw numeric_error("multiplicity of '" + irrep.name +
                          "' is not integral");
    mult.push_back(static_cast<long long>(rounded));
  }
  return mult;
}

/// Character of the action on a single displacement vector: the operation
/// traces.
inline Character translation_char(const SymmetryGroup& group) {
  Character chi;
  for (int x = 0; x < group.order(); ++x) chi.push_back(group.matrix(x).trace());
  return chi;
}

/// Character of the action on infinitesimal rotations (the exterior square
/// of the standard action): (tr(M)^2 - tr(M^2)) / 2.
inline Character rotation_char(const SymmetryGroup& group) {
  Character chi;
  for (int x = 0; x < group.order(); ++x) {
    const Matrix& m = group.matrix(x);
    const double tr = m.trace();
    const double tr2 = (m * m).trace();
    chi.push_back((tr * tr - tr2) / 2.0);
  }
  return chi;
}

/// Permutation characters: fixed joints and setwise-fixed bars per element.
inline Character joint_char(const Graph& g, const TypeMap& map) {
  Character chi;
  for (int j : fixed_counts(g, map).joints) chi.push_back(j);
  return chi;
}

inline Character bar_char(const Graph& g, const TypeMap& map) {
  Character chi;
  for (int b : fixed_counts(g, map).bars) chi.push_back(b);
  return chi;
}

} // namespace symrig
