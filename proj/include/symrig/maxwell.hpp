#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symrig/blockdiag.hpp"
#include "symrig/errors.hpp"
#include "symrig/framework.hpp"
#include "symrig/representation.hpp"
#include "symrig/symmetry.hpp"

namespace symrig {

/// Character-level counting rule. An isostatic framework must satisfy
/// X_Q = X_i elementwise: the bar action must match the internal part of the
/// joint displacement action in every irreducible type, not just in total
/// dimension.
struct MaxwellReport {
  std::vector<std::string> element_labels;
  std::vector<std::string> irrep_names;
  std::vector<int> irrep_degrees;
  Character x_joint, x_trans, x_rot, x_ext, x_internal, x_q;
  /// Multiplicities of X_Q and X_i per table row.
  std::vector<long long> kappa, mu;
  /// kappa - mu per row; positive predicts flexes and unresolvable loads of
  /// that symmetry type, negative predicts self-stresses.
  std::vector<long long> gap;
  bool passes = false;
};

inline MaxwellReport symmetry_maxwell(const Framework& fw,
                                      const SymmetryGroup& group,
                                      const TypeMap& map,
                                      const CharacterTable& table,
                                      double tol = 1e-9) {
  if (!is_compatible(fw, group, map, tol))
    throw validation_error("configuration is not compatible with the group");
  if (affine_span_dim(fw.config) != fw.dim())
    throw validation_error(
        "joints must affinely span the ambient space for the counting rule");

  MaxwellReport report;
  for (int x = 0; x < group.order(); ++x)
    report.element_labels.push_back(group.label(x));
  for (const auto& irrep : table.irreps) {
    report.irrep_names.push_back(irrep.name);
    report.irrep_degrees.push_back(irrep.degree);
  }

  report.x_trans = translation_char(group);
  report.x_rot = rotation_char(group);
  report.x_joint = joint_char(fw.graph, map);
  report.x_internal = bar_char(fw.graph, map);
  report.x_ext.resize(report.x_trans.size());
  report.x_q.resize(report.x_trans.size());
  for (std::size_t x = 0; x < report.x_trans.size(); ++x) {
    report.x_ext[x] = report.x_joint[x] * report.x_trans[x];
    report.x_q[x] = report.x_ext[x] - report.x_trans[x] - report.x_rot[x];
  }

  report.kappa = decompose(report.x_q, table);
  report.mu = decompose(report.x_internal, table);
  report.passes = true;
  for (std::size_t t = 0; t < report.kappa.size(); ++t) {
    report.gap.push_back(report.kappa[t] - report.mu[t]);
    if (report.gap.back() != 0) report.passes = false;
  }
  return report;
}

/// What a nonzero gap means, one finding per affected irreducible type. The
/// counts are lower bounds: equal and opposite contributions inside one type
/// can hide from the character count.
struct GapFinding {
  std::string irrep;
  /// Copies of the irrep by which X_Q exceeds X_i (flexes of this symmetry
  /// type, each paired with an unresolvable equilibrium load).
  long long flexes = 0;
  /// Copies by which X_i exceeds X_Q (self-stresses of this symmetry type).
  long long self_stresses = 0;
  std::string description;
};

inline std::vector<GapFinding> interpret_gaps(const MaxwellReport& report) {
  std::vector<GapFinding> findings;
  for (std::size_t t = 0; t < report.gap.size(); ++t) {
    if (report.gap[t] == 0) continue;
    GapFinding f;
    f.irrep = report.irrep_names[t];
    if (report.gap[t] > 0) {
      f.flexes = report.gap[t];
      f.description = "at least " + std::to_string(f.flexes) +
                      " independent flex(es) and as many unresolvable "
                      "equilibrium loads transforming as " +
                      f.irrep;
    } else {
      f.self_stresses = -report.gap[t];
      f.description = "at least " + std::to_string(f.self_stresses) +
                      " independent self-stress(es) transforming as " + f.irrep;
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

} // namespace symrig
