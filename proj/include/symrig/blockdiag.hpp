#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "symrig/errors.hpp"
#include "symrig/framework.hpp"
#include "symrig/linalg.hpp"
#include "symrig/representation.hpp"
#include "symrig/symmetry.hpp"

namespace symrig {

/// Orthonormal change of basis grouping coordinates by irreducible type.
/// Column block t (at offsets[t], width dims[t]) spans the isotypic component
/// of table row t.
struct SymmetryAdaptedBasis {
  Matrix basis;
  std::vector<int> dims;
  std::vector<int> offsets;

  int total_dim() const { return static_cast<int>(basis.cols()); }
};

/// Builds the symmetry-adapted basis from the isotypic projectors
/// P_t = (deg_t / ||chi_t||^2) * sum_x chi_t(x) H(x). Each projector is
/// checked for idempotence, each component dimension against the character
/// decomposition, and the assembled basis for orthogonality. The same
/// normalization works for real-type rows and for merged conjugate pairs
/// because the row norm doubles in the merged case.
inline SymmetryAdaptedBasis isotypic_basis(const MatrixRep& rep,
                                           const CharacterTable& table,
                                           double tol = 1e-9) {
  if (rep.matrices.empty()) throw validation_error("empty representation");
  const int dim = rep.degree();
  for (const auto& irrep : table.irreps)
    if (irrep.values.size() != rep.matrices.size())
      throw validation_error("character table does not match representation");

  const auto mult = decompose(character(rep), table);
  const double check_tol = std::max(tol, 1e-9);

  SymmetryAdaptedBasis out;
  out.basis = Matrix(dim, dim);
  int offset = 0;
  for (int t = 0; t < table.count(); ++t) {
    const auto& irrep = table.irreps[static_cast<std::size_t>(t)];
    Matrix p = Matrix::Zero(dim, dim);
    for (std::size_t x = 0; x < rep.matrices.size(); ++x)
      p += irrep.values[x] * rep.matrices[x];
    p *= irrep.degree / character_dot(irrep.values, irrep.values);

    const double idem = (p * p - p).norm();
    if (idem > check_tol * std::max(1.0, p.norm()))
      throw numeric_error("isotypic projector for '" + irrep.name +
                          "' is not idempotent");

    const Matrix q = orthonormal_column_basis(p);
    const int expected =
        irrep.degree * static_cast<int>(mult[static_cast<std::size_t>(t)]);
    if (q.cols() != expected)
      throw numeric_error("isotypic component of '" + irrep.name +
                          "' has unexpected dimension");
    if (offset + q.cols() > dim)
      throw numeric_error("isotypic components exceed the space dimension");
    out.basis.middleCols(offset, q.cols()) = q;
    out.dims.push_back(static_cast<int>(q.cols()));
    out.offsets.push_back(offset);
    offset += static_cast<int>(q.cols());
  }
  if (offset != dim)
    throw numeric_error("isotypic components do not fill the space");
  const double ortho =
      (out.basis.transpose() * out.basis - Matrix::Identity(dim, dim)).norm();
  if (ortho > check_tol)
    throw numeric_error("symmetry-adapted basis is not orthonormal");
  return out;
}

struct LabeledBlock {
  std::string irrep;
  Matrix data;
};

struct BlockDiagonalForm {
  /// Row side: bar-space basis. Column side: joint-space basis.
  SymmetryAdaptedBasis row_basis;
  SymmetryAdaptedBasis col_basis;
  /// Full transformed matrix, at most one nonzero block per irrep.
  Matrix transformed;
  std::vector<LabeledBlock> blocks;
  /// Frobenius mass of the transformed matrix outside the blocks.
  double off_block_residual = 0.0;
};

struct BlockDiagonalizeOptions {
  bool check_compatibility = true;
  bool enforce_residual = true;
};

/// Transforms the rigidity matrix into the symmetry-adapted bases of the bar
/// and joint actions, where it decays into one block per irreducible type.
/// A residual above tol (relative to the matrix norm) means the supplied map
/// or table does not actually match the framework.
inline BlockDiagonalForm block_diagonalize(const Framework& fw,
                                           const SymmetryGroup& group,
                                           const TypeMap& map,
                                           const CharacterTable& table,
                                           double tol = 1e-9,
                                           BlockDiagonalizeOptions options = {}) {
  if (options.check_compatibility && !is_compatible(fw, group, map, tol))
    throw validation_error("configuration is not compatible with the group");

  const Matrix r = rigidity_matrix(fw);
  BlockDiagonalForm out;
  out.col_basis = isotypic_basis(external_rep(fw.graph, group, map), table, tol);
  out.row_basis = isotypic_basis(internal_rep(fw.graph, group, map), table, tol);
  out.transformed = out.row_basis.basis.transpose() * r * out.col_basis.basis;

  Matrix block_mass = Matrix::Zero(out.transformed.rows(),
                                   out.transformed.cols());
  for (int t = 0; t < table.count(); ++t) {
    const int r0 = out.row_basis.offsets[static_cast<std::size_t>(t)];
    const int rd = out.row_basis.dims[static_cast<std::size_t>(t)];
    const int c0 = out.col_basis.offsets[static_cast<std::size_t>(t)];
    const int cd = out.col_basis.dims[static_cast<std::size_t>(t)];
    out.blocks.push_back({table.irreps[static_cast<std::size_t>(t)].name,
                          out.transformed.block(r0, c0, rd, cd)});
    block_mass.block(r0, c0, rd, cd) = out.transformed.block(r0, c0, rd, cd);
  }
  out.off_block_residual = (out.transformed - block_mass).norm();
  if (options.enforce_residual &&
      out.off_block_residual > std::max(tol, 1e-12) * std::max(1.0, r.norm()))
    throw numeric_error("off-block residual exceeds tolerance");
  return out;
}

/// Multiplicities and dimensions of the irreducible pieces of the joint
/// displacement space, split into rigid-motion and internal parts. The
/// internal part dim_Q is what bars can actually resist.
struct MotionDecomposition {
  std::vector<long long> lambda; // displacement action
  std::vector<long long> mu;     // bar action
  std::vector<long long> theta;  // translations
  std::vector<long long> rho;    // rotations
  std::vector<int> dim_e, dim_i, dim_T, dim_R, dim_Q;
};

inline MotionDecomposition motion_space_decomposition(
    const Framework& fw, const SymmetryGroup& group, const TypeMap& map,
    const CharacterTable& table, double tol = 1e-9) {
  if (!is_compatible(fw, group, map, tol))
    throw validation_error("configuration is not compatible with the group");
  if (affine_span_dim(fw.config) != fw.dim())
    throw validation_error(
        "joints must affinely span the ambient space for this decomposition");

  const Character xt = translation_char(group);
  const Character xr = rotation_char(group);
  const Character xj = joint_char(fw.graph, map);
  const Character xi = bar_char(fw.graph, map);
  Character xe(xt.size());
  for (std::size_t x = 0; x < xt.size(); ++x) xe[x] = xj[x] * xt[x];

  MotionDecomposition out;
  out.lambda = decompose(xe, table);
  out.mu = decompose(xi, table);
  out.theta = decompose(xt, table);
  out.rho = decompose(xr, table);
  for (int t = 0; t < table.count(); ++t) {
    const int deg = table.irreps[static_cast<std::size_t>(t)].degree;
    const int de = static_cast<int>(out.lambda[static_cast<std::size_t>(t)]) * deg;
    const int di = static_cast<int>(out.mu[static_cast<std::size_t>(t)]) * deg;
    const int dt = static_cast<int>(out.theta[static_cast<std::size_t>(t)]) * deg;
    const int dr = static_cast<int>(out.rho[static_cast<std::size_t>(t)]) * deg;
    const int dq = de - dt - dr;
    if (dq < 0)
      throw numeric_error("internal motion space has negative dimension");
    out.dim_e.push_back(de);
    out.dim_i.push_back(di);
    out.dim_T.push_back(dt);
    out.dim_R.push_back(dr);
    out.dim_Q.push_back(dq);
  }
  return out;
}

/// Per-irrep rank picture of the block form: each block's rank, the
/// self-stresses it leaves in the bar space, and the flexes it leaves in the
/// internal motion space (rigid motions sit inside the block kernels and are
/// subtracted off).
struct BlockRankAnalysis {
  std::vector<std::string> irrep;
  std::vector<int> rows, cols, rank, stress_dim, flex_dim;
};

inline BlockRankAnalysis block_rank_analysis(const BlockDiagonalForm& form,
                                             const MotionDecomposition& motion,
                                             double tol = 0.0) {
  if (form.blocks.size() != motion.dim_e.size())
    throw validation_error("block form and decomposition do not match");
  BlockRankAnalysis out;
  for (std::size_t t = 0; t < form.blocks.size(); ++t) {
    const Matrix& b = form.blocks[t].data;
    if (static_cast<int>(b.rows()) != motion.dim_i[t] ||
        static_cast<int>(b.cols()) != motion.dim_e[t])
      throw numeric_error("block shape disagrees with character counts");
    const int r = numeric_rank(b, tol);
    const int stress = motion.dim_i[t] - r;
    const int flex = (motion.dim_e[t] - r) - motion.dim_T[t] - motion.dim_R[t];
    if (stress < 0 || flex < 0)
      throw numeric_error("negative stress or flex dimension in a block");
    out.irrep.push_back(form.blocks[t].irrep);
    out.rows.push_back(static_cast<int>(b.rows()));
    out.cols.push_back(static_cast<int>(b.cols()));
    out.rank.push_back(r);
    out.stress_dim.push_back(stress);
    out.flex_dim.push_back(flex);
  }
  return out;
}

/// Block-diagonal forms of the stiffness-shaped products: R^T R in the joint
/// basis and R R^T in the bar basis. Their blocks are square and share
/// nonzero eigenvalues with the rigidity blocks.
struct StiffnessBlockForms {
  BlockDiagonalForm joint_form; // T_e^T (R^T R) T_e
  BlockDiagonalForm bar_form;   // T_i^T (R R^T) T_i
};

inline StiffnessBlockForms stiffness_blockdiag(const Framework& fw,
                                               const SymmetryGroup& group,
                                               const TypeMap& map,
                                               const CharacterTable& table,
                                               double tol = 1e-9) {
  if (!is_compatible(fw, group, map, tol))
    throw validation_error("configuration is not compatible with the group");
  const Matrix r = rigidity_matrix(fw);
  const auto te = isotypic_basis(external_rep(fw.graph, group, map), table, tol);
  const auto ti = isotypic_basis(internal_rep(fw.graph, group, map), table, tol);

  auto assemble = [&](const SymmetryAdaptedBasis& basis, const Matrix& gram,
                      double scale) {
    BlockDiagonalForm form;
    form.row_basis = basis;
    form.col_basis = basis;
    form.transformed = basis.basis.transpose() * gram * basis.basis;
    Matrix block_mass =
        Matrix::Zero(form.transformed.rows(), form.transformed.cols());
    for (std::size_t t = 0; t < basis.dims.size(); ++t) {
      const int o = basis.offsets[t], w = basis.dims[t];
      form.blocks.push_back({table.irreps[t].name,
                             form.transformed.block(o, o, w, w)});
      block_mass.block(o, o, w, w) = form.transformed.block(o, o, w, w);
    }
    form.off_block_residual = (form.transformed - block_mass).norm();
    if (form.off_block_residual > std::max(tol, 1e-12) * std::max(1.0, scale))
      throw numeric_error("off-block residual exceeds tolerance");
    return form;
  };

  StiffnessBlockForms out{assemble(te, r.transpose() * r, r.squaredNorm()),
                          assemble(ti, r * r.transpose(), r.squaredNorm())};
  return out;
}

} // namespace symrig
