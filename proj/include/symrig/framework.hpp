#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "symrig/errors.hpp"
#include "symrig/exact.hpp"
#include "symrig/graph.hpp"
#include "symrig/linalg.hpp"

namespace symrig {

// Joint displacements and loads are stacked dn-vectors with one d-block per
// joint; stresses assign one scalar per bar, in edge-list order.
using MotionVector = Vector;
using LoadVector = Vector;
using StressVector = Vector;

/// Joint positions in R^d, one row per joint. When every input coordinate was
/// rational the same data is also carried exactly for the oracle path.
struct Configuration {
  int dim = 0;
  Matrix coords;
  std::optional<RationalMatrix> exact;

  int count() const { return static_cast<int>(coords.rows()); }
  Vector point(int v) const { return coords.row(v).transpose(); }

  void validate() const {
    if (dim < 1) throw validation_error("dimension must be at least 1");
    if (coords.cols() != dim)
      throw validation_error("coordinate width does not match dimension");
    if (coords.rows() < 1) throw validation_error("no joints");
    if (exact) {
      if (exact->rows() != static_cast<std::size_t>(coords.rows()) ||
          exact->cols() != static_cast<std::size_t>(dim))
        throw validation_error("exact coordinates have the wrong shape");
    }
  }
};

struct Framework {
  Graph graph;
  Configuration config;

  int dim() const { return config.dim; }
  int joint_count() const { return graph.n; }
  int bar_count() const { return graph.edge_count(); }

  /// Joints joined by a bar must sit at distinct points. Coincident
  /// non-adjacent joints are fine.
  void validate() const {
    graph.validate();
    config.validate();
    if (config.count() != graph.n)
      throw validation_error("joint count does not match coordinate rows");
    for (const auto& [u, v] : graph.edges) {
      bool distinct;
      if (config.exact) {
        distinct = false;
        for (int j = 0; j < config.dim; ++j)
          if (config.exact->at(u, j) != config.exact->at(v, j)) {
            distinct = true;
            break;
          }
      } else {
        distinct = config.coords.row(u) != config.coords.row(v);
      }
      if (!distinct)
        throw validation_error("bar endpoints coincide");
    }
  }
};

/// One row per bar: the row for bar {u, v} carries p_u - p_v in joint u's
/// column block and p_v - p_u in joint v's. This variant accepts coincident
/// bar endpoints (producing a zero row) for callers that want the raw matrix.
inline Matrix rigidity_matrix_raw(const Graph& g, const Configuration& c) {
  g.validate();
  c.validate();
  if (c.count() != g.n)
    throw validation_error("joint count does not match coordinate rows");
  const int d = c.dim;
  Matrix r = Matrix::Zero(g.edge_count(), static_cast<Eigen::Index>(d) * g.n);
  for (int f = 0; f < g.edge_count(); ++f) {
    const auto [u, v] = g.edges[f];
    const Vector diff = c.point(u) - c.point(v);
    r.block(f, d * u, 1, d) = diff.transpose();
    r.block(f, d * v, 1, d) = -diff.transpose();
  }
  return r;
}

inline Matrix rigidity_matrix(const Framework& fw) {
  fw.validate();
  return rigidity_matrix_raw(fw.graph, fw.config);
}

/// Exact-rational build of the same matrix, for the oracle path.
inline RationalMatrix exact_rigidity_matrix(const Framework& fw) {
  fw.validate();
  if (!fw.config.exact)
    throw validation_error("framework has no exact coordinates");
  const RationalMatrix& p = *fw.config.exact;
  const int d = fw.dim();
  RationalMatrix r(static_cast<std::size_t>(fw.bar_count()),
                   static_cast<std::size_t>(d) * fw.joint_count());
  for (int f = 0; f < fw.bar_count(); ++f) {
    const auto [u, v] = fw.graph.edges[f];
    for (int j = 0; j < d; ++j) {
      Rational diff = p.at(u, j) - p.at(v, j);
      r.at(f, static_cast<std::size_t>(d) * u + j) = diff;
      r.at(f, static_cast<std::size_t>(d) * v + j) = -diff;
    }
  }
  return r;
}

/// Dimension of the affine hull of the joints (0 for a single point or all
/// joints coincident).
inline int affine_span_dim(const Configuration& c, double tol = 0.0) {
  c.validate();
  const int n = c.count();
  if (n <= 1) return 0;
  Matrix centered = c.coords.bottomRows(n - 1);
  for (int i = 0; i < n - 1; ++i) centered.row(i) -= c.coords.row(0);
  return numeric_rank(centered, tol);
}

inline int exact_affine_span_dim(const Configuration& c) {
  c.validate();
  if (!c.exact) throw validation_error("configuration has no exact coordinates");
  const int n = c.count();
  if (n <= 1) return 0;
  RationalMatrix centered(static_cast<std::size_t>(n - 1),
                          static_cast<std::size_t>(c.dim));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < c.dim; ++j)
      centered.at(i - 1, j) = c.exact->at(i, j) - c.exact->at(0, j);
  return exact_rank(centered);
}

/// Generators of the rigid-body motions restricted to the joints: d
/// translations followed by the C(d,2) coordinate-plane rotations (j, k) in
/// lexicographic order, where joint v receives (p_v)_j e_k - (p_v)_k e_j.
/// They always lie in the kernel of the rigidity matrix; their span can have
/// dimension below d + C(d,2) for degenerate configurations.
inline std::vector<MotionVector> rigid_motion_basis(const Framework& fw) {
  fw.validate();
  const int d = fw.dim(), n = fw.joint_count();
  std::vector<MotionVector> gens;
  for (int j = 0; j < d; ++j) {
    MotionVector t = MotionVector::Zero(static_cast<Eigen::Index>(d) * n);
    for (int v = 0; v < n; ++v) t(static_cast<Eigen::Index>(d) * v + j) = 1.0;
    gens.push_back(std::move(t));
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      MotionVector r = MotionVector::Zero(static_cast<Eigen::Index>(d) * n);
      for (int v = 0; v < n; ++v) {
        r(static_cast<Eigen::Index>(d) * v + k) = fw.config.coords(v, j);
        r(static_cast<Eigen::Index>(d) * v + j) = -fw.config.coords(v, k);
      }
      gens.push_back(std::move(r));
    }
  return gens;
}

/// Same generators as exact columns of a dn x (d + C(d,2)) matrix.
inline RationalMatrix exact_rigid_motion_matrix(const Framework& fw) {
  fw.validate();
  if (!fw.config.exact)
    throw validation_error("framework has no exact coordinates");
  const int d = fw.dim(), n = fw.joint_count();
  const int cols = d + d * (d - 1) / 2;
  RationalMatrix m(static_cast<std::size_t>(d) * n,
                   static_cast<std::size_t>(cols));
  for (int j = 0; j < d; ++j)
    for (int v = 0; v < n; ++v)
      m.at(static_cast<std::size_t>(d) * v + j, static_cast<std::size_t>(j)) = 1;
  int col = d;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k, ++col)
      for (int v = 0; v < n; ++v) {
        m.at(static_cast<std::size_t>(d) * v + k,
             static_cast<std::size_t>(col)) = fw.config.exact->at(v, j);
        m.at(static_cast<std::size_t>(d) * v + j,
             static_cast<std::size_t>(col)) = -fw.config.exact->at(v, k);
      }
  return m;
}

struct InfinitesimalAnalysis {
  int rank = 0;
  int nullity = 0;
  /// Dimension of the span of the rigid-body generators at this
  /// configuration.
  int motion_span_dim = 0;
  /// Kernel dimension beyond the rigid-body motions.
  int flex_count = 0;
  bool rigid = false;
  std::vector<MotionVector> motion_generators;
  /// Orthonormal basis of the kernel directions orthogonal to every
  /// rigid-body motion. Empty (zero columns) when the framework is rigid.
  Matrix flex_basis;
};

/// Rank picture of the framework. Rigidity holds when the rank reaches
/// dn - (d+1)d/2, or when the graph is complete on affinely independent
/// joints (the small complete frameworks that cannot reach that rank).
inline InfinitesimalAnalysis infinitesimal_analysis(const Framework& fw,
                                                    double tol = 0.0) {
  const Matrix r = rigidity_matrix(fw);
  const int d = fw.dim(), n = fw.joint_count();
  InfinitesimalAnalysis out;
  out.rank = numeric_rank(r, tol);
  out.nullity = d * n - out.rank;
  out.motion_generators = rigid_motion_basis(fw);
  Matrix gen(static_cast<Eigen::Index>(d) * n,
             static_cast<Eigen::Index>(out.motion_generators.size()));
  for (std::size_t j = 0; j < out.motion_generators.size(); ++j)
    gen.col(static_cast<Eigen::Index>(j)) = out.motion_generators[j];
  out.motion_span_dim = numeric_rank(gen, tol);
  out.flex_count = out.nullity - out.motion_span_dim;

  const int target = d * n - (d + 1) * d / 2;
  const bool complete_independent =
      fw.graph.is_complete() && affine_span_dim(fw.config, tol) == n - 1;
  out.rigid = (out.rank == target) || complete_independent;

  // Vectors killed by the rigidity matrix and orthogonal to every rigid-body
  // generator, found in one decomposition so the rank threshold is shared.
  Matrix stacked(r.rows() + gen.cols(), r.cols());
  stacked.topRows(r.rows()) = r;
  stacked.bottomRows(gen.cols()) = gen.transpose();
  out.flex_basis = kernel_basis(stacked, tol);
  return out;
}

/// Orthonormal basis of the self-stresses (left kernel of the rigidity
/// matrix), as matrix columns.
inline Matrix self_stresses(const Framework& fw, double tol = 0.0) {
  return left_kernel_basis(rigidity_matrix(fw), tol);
}

struct IsostaticVerdict {
  bool isostatic = false;
  bool rigid = false;
  int rank = 0;
  int stress_count = 0;
  int flex_count = 0;
};

/// Isostatic means rigid with independent bars (no self-stress).
inline IsostaticVerdict is_isostatic(const Framework& fw, double tol = 0.0) {
  const auto analysis = infinitesimal_analysis(fw, tol);
  IsostaticVerdict v;
  v.rigid = analysis.rigid;
  v.rank = analysis.rank;
  v.flex_count = analysis.flex_count;
  v.stress_count = fw.bar_count() - analysis.rank;
  v.isostatic = v.rigid && v.stress_count == 0;
  return v;
}

/// Bar count minus dn - (d+1)d/2, the classical counting heuristic. Zero is
/// necessary but not sufficient for an isostatic framework.
inline int maxwell_count(const Framework& fw) {
  fw.validate();
  if (fw.joint_count() < fw.dim())
    throw validation_error("counting rule needs at least d joints");
  return fw.bar_count() -
         (fw.dim() * fw.joint_count() - (fw.dim() + 1) * fw.dim() / 2);
}

/// Load pulling joints h and k toward each other: block h gets p_h - p_k,
/// block k the negative. Zero if the joints coincide.
inline LoadVector pair_load(const Framework& fw, int h, int k) {
  fw.validate();
  if (h == k) throw validation_error("pair load needs two distinct joints");
  if (h < 0 || h >= fw.joint_count() || k < 0 || k >= fw.joint_count())
    throw validation_error("joint index out of range");
  const int d = fw.dim();
  LoadVector l =
      LoadVector::Zero(static_cast<Eigen::Index>(d) * fw.joint_count());
  const Vector diff = fw.config.point(h) - fw.config.point(k);
  l.segment(static_cast<Eigen::Index>(d) * h, d) = diff;
  l.segment(static_cast<Eigen::Index>(d) * k, d) = -diff;
  return l;
}

/// Equilibrium means zero net force and zero net moment in every coordinate
/// plane: sum_v l_v = 0 and sum_v ((l_v)_j (p_v)_k - (l_v)_k (p_v)_j) = 0 for
/// all j < k.
inline bool is_equilibrium_load(const Framework& fw, const LoadVector& l,
                                double tol = 1e-9) {
  fw.validate();
  const int d = fw.dim(), n = fw.joint_count();
  if (l.size() != static_cast<Eigen::Index>(d) * n)
    throw validation_error("load length does not match d times joint count");
  const double scale =
      std::max(1.0, l.lpNorm<Eigen::Infinity>() *
                        std::max(1.0, fw.config.coords.lpNorm<Eigen::Infinity>()));
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int v = 0; v < n; ++v) s += l(static_cast<Eigen::Index>(d) * v + j);
    if (std::abs(s) > tol * scale) return false;
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      double s = 0.0;
      for (int v = 0; v < n; ++v)
        s += l(static_cast<Eigen::Index>(d) * v + j) * fw.config.coords(v, k) -
             l(static_cast<Eigen::Index>(d) * v + k) * fw.config.coords(v, j);
      if (std::abs(s) > tol * scale) return false;
    }
  return true;
}

struct LoadResolution {
  bool resolved = false;
  /// Least-norm bar stress attempting R^T w = l; meaningful even when the
  /// load is unresolvable (it is the least-squares best effort).
  StressVector stress;
  double residual = 0.0;
};

/// Tries to balance an equilibrium load by bar stresses. Resolution demands
/// residual at most tol times the load norm.
inline LoadResolution resolve_load(const Framework& fw, const LoadVector& l,
                                   double tol = 1e-9) {
  if (!is_equilibrium_load(fw, l, tol))
    throw validation_error("load is not in equilibrium");
  const Matrix rt = rigidity_matrix(fw).transpose();
  LoadResolution out;
  out.stress = min_norm_least_squares(rt, l);
  out.residual = (rt * out.stress - l).norm();
  out.resolved = out.residual <= tol * l.norm();
  return out;
}

/// A motion u opens the pair (h, k) when (p_h - p_k) . (u_h - u_k) is
/// nonzero. The pair load is unresolvable exactly when some kernel motion
/// opens the pair; this checks that the two sides agree.
inline bool flex_load_duality_check(const Framework& fw, int h, int k,
                                    double tol = 1e-9) {
  const LoadVector f = pair_load(fw, h, k);
  const auto res = resolve_load(fw, f, tol);

  const Matrix kernel = kernel_basis(rigidity_matrix(fw));
  const int d = fw.dim();
  const Vector diff = fw.config.point(h) - fw.config.point(k);
  const double scale = std::max(1.0, diff.norm());
  bool opened = false;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const Vector uh = kernel.col(c).segment(static_cast<Eigen::Index>(d) * h, d);
    const Vector uk = kernel.col(c).segment(static_cast<Eigen::Index>(d) * k, d);
    if (std::abs(diff.dot(uh - uk)) > tol * scale) {
      opened = true;
      break;
    }
  }
  return res.resolved == !opened;
}

/// Exact-rational version of the same duality statement, used as an oracle:
/// membership of the pair load in the row space decided by rank, the motion
/// side decided on an exact kernel basis.
inline bool exact_flex_load_duality_check(const Framework& fw, int h, int k) {
  if (!fw.config.exact)
    throw validation_error("framework has no exact coordinates");
  const RationalMatrix r = exact_rigidity_matrix(fw);
  const int d = fw.dim();

  RationalMatrix augmented(r.rows() + 1, r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      augmented.at(i, j) = r.at(i, j);
  for (int j = 0; j < d; ++j) {
    Rational diff = fw.config.exact->at(h, j) - fw.config.exact->at(k, j);
    augmented.at(r.rows(), static_cast<std::size_t>(d) * h + j) = diff;
    augmented.at(r.rows(), static_cast<std::size_t>(d) * k + j) = -diff;
  }
  const bool resolvable = exact_rank(augmented) == exact_rank(r);

  bool opened = false;
  for (const auto& u : exact_kernel(r)) {
    Rational form = 0;
    for (int j = 0; j < d; ++j) {
      Rational diff = fw.config.exact->at(h, j) - fw.config.exact->at(k, j);
      form += diff * (u[static_cast<std::size_t>(d) * h + j] -
                      u[static_cast<std::size_t>(d) * k + j]);
    }
    if (form != 0) {
      opened = true;
      break;
    }
  }
  return resolvable == !opened;
}

} // namespace symrig
