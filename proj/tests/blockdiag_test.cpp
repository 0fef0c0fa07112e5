#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "test_support.hpp"

using namespace symrig;
using namespace testsupport;

namespace {

std::vector<SymmetricFixture> standing_fixtures() {
  return {k3_mirror(), k33_rectangle(), equilateral_c3(), equilateral_c3v()};
}

std::vector<double> sorted_singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() +
                              svd.singularValues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

} // namespace

TEST_CASE("symmetry-adapted bases") {
  for (const auto& fx : standing_fixtures()) {
    const auto table = character_table(fx.group);
    for (const auto& rep :
         {external_rep(fx.fw.graph, fx.group, fx.map),
          internal_rep(fx.fw.graph, fx.group, fx.map)}) {
      const auto sab = isotypic_basis(rep, table);
      const int dim = rep.degree();

      CHECK(sab.total_dim() == dim);
      CHECK((sab.basis.transpose() * sab.basis -
             Matrix::Identity(dim, dim)).norm() < 1e-9);

      // Component widths follow the character decomposition.
      const auto mult = decompose(character(rep), table);
      for (int t = 0; t < table.count(); ++t)
        CHECK(sab.dims[static_cast<std::size_t>(t)] ==
              table.irreps[static_cast<std::size_t>(t)].degree *
                  static_cast<int>(mult[static_cast<std::size_t>(t)]));

      // Each component is invariant under the whole action.
      for (int t = 0; t < table.count(); ++t) {
        const int o = sab.offsets[static_cast<std::size_t>(t)];
        const int w = sab.dims[static_cast<std::size_t>(t)];
        if (w == 0) continue;
        const Matrix b = sab.basis.middleCols(o, w);
        for (const auto& h : rep.matrices) {
          const Matrix moved = h * b;
          CHECK((moved - b * (b.transpose() * moved)).norm() < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("known component dimensions") {
  const auto fx = k3_mirror();
  const auto table = character_table(fx.group);
  const auto ext = isotypic_basis(external_rep(fx.fw.graph, fx.group, fx.map),
                                  table);
  CHECK(ext.dims == std::vector<int>{3, 3});
  const auto inter = isotypic_basis(internal_rep(fx.fw.graph, fx.group, fx.map),
                                    table);
  CHECK(inter.dims == std::vector<int>{2, 1});

  const auto fx3 = equilateral_c3();
  const auto table3 = character_table(fx3.group);
  CHECK(isotypic_basis(external_rep(fx3.fw.graph, fx3.group, fx3.map), table3)
            .dims == std::vector<int>{2, 4});
  CHECK(isotypic_basis(internal_rep(fx3.fw.graph, fx3.group, fx3.map), table3)
            .dims == std::vector<int>{1, 2});
}

TEST_CASE("transformed rigidity matrix decays into blocks") {
  for (const auto& fx : standing_fixtures()) {
    const auto table = character_table(fx.group);
    const auto form = block_diagonalize(fx.fw, fx.group, fx.map, table);
    const Matrix r = rigidity_matrix(fx.fw);

    CHECK(form.off_block_residual < 1e-12 * (1.0 + r.norm()));
    CHECK(form.blocks.size() == static_cast<std::size_t>(table.count()));

    // Orthogonal changes of basis preserve the singular values, so the
    // blocks carry exactly the spectrum of the full matrix.
    std::vector<double> block_sv;
    for (const auto& b : form.blocks)
      for (double s : sorted_singular_values(b.data)) block_sv.push_back(s);
    std::sort(block_sv.begin(), block_sv.end(), std::greater<>());
    const auto full_sv = sorted_singular_values(r);
    // Rectangular blocks can carry fewer values than the full matrix; the
    // missing ones are zeros.
    block_sv.resize(full_sv.size(), 0.0);
    for (std::size_t i = 0; i < full_sv.size(); ++i)
      CHECK(block_sv[i] == Catch::Approx(full_sv[i]).margin(1e-9));

    // Reassembling through the bases returns the original matrix.
    const Matrix back = form.row_basis.basis * form.transformed *
                        form.col_basis.basis.transpose();
    CHECK((back - r).norm() < 1e-12 * (1.0 + r.norm()));
  }
}

TEST_CASE("block shapes and ranks of the worked examples") {
  SECTION("mirrored triangle") {
    const auto fx = k3_mirror();
    const auto form =
        block_diagonalize(fx.fw, fx.group, fx.map, character_table(fx.group));
    REQUIRE(form.blocks.size() == 2);
    CHECK(form.blocks[0].data.rows() == 2);
    CHECK(form.blocks[0].data.cols() == 3);
    CHECK(numeric_rank(form.blocks[0].data) == 2);
    CHECK(form.blocks[1].data.rows() == 1);
    CHECK(form.blocks[1].data.cols() == 3);
    CHECK(numeric_rank(form.blocks[1].data) == 1);
  }

  SECTION("rotating triangle") {
    const auto fx = equilateral_c3();
    const auto form =
        block_diagonalize(fx.fw, fx.group, fx.map, character_table(fx.group));
    REQUIRE(form.blocks.size() == 2);
    CHECK(form.blocks[0].data.rows() == 1);
    CHECK(form.blocks[0].data.cols() == 2);
    CHECK(numeric_rank(form.blocks[0].data) == 1);
    CHECK(form.blocks[1].data.rows() == 2);
    CHECK(form.blocks[1].data.cols() == 4);
    CHECK(numeric_rank(form.blocks[1].data) == 2);
  }

  SECTION("bipartite rectangle framework") {
    const auto fx = k33_rectangle();
    const auto form =
        block_diagonalize(fx.fw, fx.group, fx.map, character_table(fx.group));
    const auto motion = motion_space_decomposition(fx.fw, fx.group, fx.map,
                                                   character_table(fx.group));
    const auto analysis = block_rank_analysis(form, motion);
    CHECK(analysis.rows == std::vector<int>{4, 2, 2, 1});
    CHECK(analysis.cols == std::vector<int>{3, 3, 3, 3});
    CHECK(analysis.rank == std::vector<int>{3, 2, 2, 1});
    CHECK(analysis.stress_dim == std::vector<int>{1, 0, 0, 0});
    CHECK(analysis.flex_dim == std::vector<int>{0, 0, 0, 1});
  }
}

TEST_CASE("motion space split by irreducible type") {
  const auto fx = k33_rectangle();
  const auto table = character_table(fx.group);
  const auto motion = motion_space_decomposition(fx.fw, fx.group, fx.map, table);

  CHECK(motion.lambda == std::vector<long long>{3, 3, 3, 3});
  CHECK(motion.mu == std::vector<long long>{4, 2, 2, 1});
  CHECK(motion.theta == std::vector<long long>{0, 0, 1, 1});
  CHECK(motion.rho == std::vector<long long>{0, 1, 0, 0});
  CHECK(motion.dim_Q == std::vector<int>{3, 2, 2, 2});

  int total_e = 0, total_i = 0, total_t = 0, total_r = 0;
  for (std::size_t t = 0; t < motion.dim_e.size(); ++t) {
    total_e += motion.dim_e[t];
    total_i += motion.dim_i[t];
    total_t += motion.dim_T[t];
    total_r += motion.dim_R[t];
  }
  CHECK(total_e == 2 * fx.fw.joint_count());
  CHECK(total_i == fx.fw.bar_count());
  CHECK(total_t == 2);
  CHECK(total_r == 1);
}

TEST_CASE("block ranks add up to the global picture") {
  for (const auto& fx : standing_fixtures()) {
    const auto table = character_table(fx.group);
    const auto form = block_diagonalize(fx.fw, fx.group, fx.map, table);
    const auto motion =
        motion_space_decomposition(fx.fw, fx.group, fx.map, table);
    const auto analysis = block_rank_analysis(form, motion);
    const auto global = infinitesimal_analysis(fx.fw);

    int rank = 0, stress = 0, flex = 0;
    for (std::size_t t = 0; t < analysis.rank.size(); ++t) {
      rank += analysis.rank[t];
      stress += analysis.stress_dim[t];
      flex += analysis.flex_dim[t];
    }
    CHECK(rank == global.rank);
    CHECK(stress == fx.fw.bar_count() - global.rank);
    CHECK(flex == global.flex_count);
  }
}

TEST_CASE("broken symmetry is caught") {
  auto fx = k3_mirror();
  fx.fw.config.coords(2, 0) += 1e-4;
  fx.fw.config.exact.reset();
  const auto table = character_table(fx.group);

  CHECK_THROWS_AS(block_diagonalize(fx.fw, fx.group, fx.map, table),
                  validation_error);

  BlockDiagonalizeOptions skip_check;
  skip_check.check_compatibility = false;
  CHECK_THROWS_AS(
      block_diagonalize(fx.fw, fx.group, fx.map, table, 1e-9, skip_check),
      numeric_error);

  BlockDiagonalizeOptions permissive;
  permissive.check_compatibility = false;
  permissive.enforce_residual = false;
  const auto form =
      block_diagonalize(fx.fw, fx.group, fx.map, table, 1e-9, permissive);
  CHECK(form.off_block_residual > 1e-6);
}

TEST_CASE("stiffness-shaped products share the block structure") {
  for (const auto& fx : standing_fixtures()) {
    const auto table = character_table(fx.group);
    const auto forms = stiffness_blockdiag(fx.fw, fx.group, fx.map, table);
    const Matrix r = rigidity_matrix(fx.fw);

    const Matrix joint_back = forms.joint_form.row_basis.basis *
                              forms.joint_form.transformed *
                              forms.joint_form.col_basis.basis.transpose();
    CHECK((joint_back - r.transpose() * r).norm() < 1e-10 * (1 + r.squaredNorm()));

    const Matrix bar_back = forms.bar_form.row_basis.basis *
                            forms.bar_form.transformed *
                            forms.bar_form.col_basis.basis.transpose();
    CHECK((bar_back - r * r.transpose()).norm() < 1e-10 * (1 + r.squaredNorm()));

    // Square symmetric blocks with nonnegative spectra.
    for (const auto& b : forms.joint_form.blocks) {
      CHECK(b.data.rows() == b.data.cols());
      if (b.data.rows() == 0) continue;
      CHECK((b.data - b.data.transpose()).norm() < 1e-10);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(b.data);
      CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    }

    // The nonzero stiffness eigenvalues are the squared rigidity spectrum.
    std::vector<double> eig_all;
    for (const auto& b : forms.joint_form.blocks)
      for (double s : sorted_singular_values(b.data)) eig_all.push_back(s);
    std::sort(eig_all.begin(), eig_all.end(), std::greater<>());
    const auto sv = sorted_singular_values(r);
    for (std::size_t i = 0; i < sv.size(); ++i)
      CHECK(eig_all[i] == Catch::Approx(sv[i] * sv[i]).margin(1e-9));
  }
}
