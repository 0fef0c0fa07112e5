#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace symrig;
using namespace testsupport;

namespace {

Framework unit_square() {
  Framework fw;
  fw.graph = {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  fw.config = exact_config(2, {{"0", "0"}, {"1", "0"}, {"1", "1"}, {"0", "1"}});
  return fw;
}

} // namespace

TEST_CASE("graph validation rejects malformed input") {
  CHECK_THROWS_AS((Graph{0, {}}.validate()), validation_error);
  CHECK_THROWS_AS((Graph{3, {{0, 0}}}.validate()), validation_error);
  CHECK_THROWS_AS((Graph{3, {{0, 3}}}.validate()), validation_error);
  CHECK_THROWS_AS((Graph{3, {{-1, 2}}}.validate()), validation_error);
  CHECK_THROWS_AS((Graph{3, {{0, 1}, {1, 0}}}.validate()), validation_error);
  CHECK_NOTHROW((Graph{3, {{0, 1}, {1, 2}}}.validate()));
}

TEST_CASE("framework validation rejects coincident adjacent joints") {
  Framework bad;
  bad.graph = {2, {{0, 1}}};
  bad.config = exact_config(2, {{"1", "2"}, {"1", "2"}});
  CHECK_THROWS_AS(bad.validate(), validation_error);

  // Coincident joints are fine as long as no bar joins them.
  CHECK_NOTHROW(coincident_cycle().validate());
}

TEST_CASE("rigidity matrix rows hold coordinate differences") {
  const Framework fw = k3_mirror().fw;
  const Matrix r = rigidity_matrix(fw);
  REQUIRE(r.rows() == 3);
  REQUIRE(r.cols() == 6);
  for (int f = 0; f < fw.bar_count(); ++f) {
    const auto [u, v] = fw.graph.edges[static_cast<std::size_t>(f)];
    const Vector diff = fw.config.point(u) - fw.config.point(v);
    CHECK((r.row(f).segment(2 * u, 2).transpose() - diff).norm() == 0.0);
    CHECK((r.row(f).segment(2 * v, 2).transpose() + diff).norm() == 0.0);
    for (int w = 0; w < fw.joint_count(); ++w) {
      if (w == u || w == v) continue;
      CHECK(r.row(f).segment(2 * w, 2).norm() == 0.0);
    }
  }
}

TEST_CASE("float and exact rigidity matrices agree entry by entry") {
  for (const Framework& fw :
       {k33_rectangle().fw, k4_generic(), collinear_triangle()}) {
    const Matrix r = rigidity_matrix(fw);
    const RationalMatrix e = exact_rigidity_matrix(fw);
    REQUIRE(static_cast<std::size_t>(r.rows()) == e.rows());
    REQUIRE(static_cast<std::size_t>(r.cols()) == e.cols());
    // Differences of rounded coordinates can sit one ulp away from the
    // rounded exact difference, so compare with a matching slack.
    for (std::size_t i = 0; i < e.rows(); ++i)
      for (std::size_t j = 0; j < e.cols(); ++j)
        CHECK(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              Catch::Approx(to_double(e.at(i, j))).margin(1e-14));
  }
}

TEST_CASE("affine span dimension") {
  CHECK(affine_span_dim(k3_mirror().fw.config) == 2);
  CHECK(affine_span_dim(collinear_triangle().config) == 1);
  CHECK(affine_span_dim(k4_mirror_3d().fw.config) == 3);
  CHECK(affine_span_dim(coincident_cycle().config) == 2);
  CHECK(affine_span_dim(exact_config(2, {{"4", "-7"}})) == 0);

  for (const Configuration& c :
       {k3_mirror().fw.config, collinear_triangle().config,
        k4_mirror_3d().fw.config, coincident_cycle().config})
    CHECK(exact_affine_span_dim(c) == affine_span_dim(c));
}

TEST_CASE("rigid-body generators lie in the kernel") {
  for (const Framework& fw : {k3_mirror().fw, k33_rectangle().fw,
                              collinear_triangle(), k4_mirror_3d().fw}) {
    const Matrix r = rigidity_matrix(fw);
    const auto gens = rigid_motion_basis(fw);
    const int d = fw.dim();
    REQUIRE(static_cast<int>(gens.size()) == d + d * (d - 1) / 2);
    for (const auto& g : gens) CHECK((r * g).norm() < 1e-12 * (1 + r.norm()));
  }
}

TEST_CASE("exact motion matrix matches the float generators") {
  const Framework fw = k33_rectangle().fw;
  const auto gens = rigid_motion_basis(fw);
  const RationalMatrix m = exact_rigid_motion_matrix(fw);
  REQUIRE(m.cols() == gens.size());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t i = 0; i < m.rows(); ++i)
      CHECK(gens[c](static_cast<Eigen::Index>(i)) == to_double(m.at(i, c)));
  CHECK(exact_rank(m) == 3);
}

TEST_CASE("rank analysis of the standing frameworks") {
  SECTION("triangle is isostatic") {
    const auto a = infinitesimal_analysis(k3_mirror().fw);
    CHECK(a.rank == 3);
    CHECK(a.nullity == 3);
    CHECK(a.motion_span_dim == 3);
    CHECK(a.flex_count == 0);
    CHECK(a.rigid);
    CHECK(a.flex_basis.cols() == 0);
    const auto v = is_isostatic(k3_mirror().fw);
    CHECK(v.isostatic);
    CHECK(v.stress_count == 0);
  }

  SECTION("complete graph on four joints is rigid but overbraced") {
    const auto v = is_isostatic(k4_generic());
    CHECK(v.rigid);
    CHECK(v.rank == 5);
    CHECK(v.stress_count == 1);
    CHECK_FALSE(v.isostatic);
  }

  SECTION("collinear triangle flexes and carries a stress") {
    const auto a = infinitesimal_analysis(collinear_triangle());
    CHECK(a.rank == 2);
    CHECK(a.nullity == 4);
    CHECK(a.motion_span_dim == 3);
    CHECK(a.flex_count == 1);
    CHECK_FALSE(a.rigid);
    CHECK(a.flex_basis.cols() == 1);
    CHECK(self_stresses(collinear_triangle()).cols() == 1);
  }

  SECTION("bipartite rectangle framework") {
    const auto a = infinitesimal_analysis(k33_rectangle().fw);
    CHECK(a.rank == 8);
    CHECK(a.flex_count == 1);
    CHECK_FALSE(a.rigid);
  }

  SECTION("single bar in space is rigid below the rank target") {
    Framework bar;
    bar.graph = {2, {{0, 1}}};
    bar.config = exact_config(3, {{"0", "0", "0"}, {"1", "2", "3"}});
    const auto a = infinitesimal_analysis(bar);
    CHECK(a.rank == 1);
    CHECK(a.motion_span_dim == 5);
    CHECK(a.flex_count == 0);
    CHECK(a.rigid);
  }
}

TEST_CASE("flex basis is a kernel basis orthogonal to the motions") {
  const Framework fw = collinear_triangle();
  const auto a = infinitesimal_analysis(fw);
  const Matrix r = rigidity_matrix(fw);
  CHECK((r * a.flex_basis).norm() < 1e-12);
  for (const auto& g : a.motion_generators)
    CHECK((a.flex_basis.transpose() * g).norm() < 1e-12);
  CHECK((a.flex_basis.transpose() * a.flex_basis - Matrix::Identity(1, 1))
            .norm() < 1e-12);
}

TEST_CASE("counting heuristic") {
  CHECK(maxwell_count(k3_mirror().fw) == 0);
  CHECK(maxwell_count(k33_rectangle().fw) == 0);
  CHECK(maxwell_count(k4_generic()) == 1);
  CHECK(maxwell_count(k4_mirror_3d().fw) == 0);

  Framework lone;
  lone.graph = {1, {}};
  lone.config = exact_config(2, {{"0", "0"}});
  CHECK_THROWS_AS(maxwell_count(lone), validation_error);
}

TEST_CASE("pair loads are equilibrium loads") {
  const Framework fw = k4_generic();
  for (int h = 0; h < 4; ++h)
    for (int k = h + 1; k < 4; ++k)
      CHECK(is_equilibrium_load(fw, pair_load(fw, h, k)));
  CHECK_THROWS_AS(pair_load(fw, 1, 1), validation_error);
  CHECK_THROWS_AS(pair_load(fw, 0, 9), validation_error);

  // A single force at one joint has nonzero net force.
  LoadVector push = LoadVector::Zero(8);
  push(0) = 1.0;
  CHECK_FALSE(is_equilibrium_load(fw, push));
  CHECK_THROWS_AS(resolve_load(fw, push), validation_error);

  // Equal and opposite forces off the connecting line have net moment.
  LoadVector torque = LoadVector::Zero(8);
  torque(1) = 1.0;
  torque(3) = -1.0;
  CHECK_FALSE(is_equilibrium_load(fw, torque));
}

TEST_CASE("load resolution on rigid and flexible frameworks") {
  SECTION("rigid triangle resolves every pair load") {
    const Framework fw = k3_mirror().fw;
    for (int h = 0; h < 3; ++h)
      for (int k = h + 1; k < 3; ++k) {
        const auto res = resolve_load(fw, pair_load(fw, h, k));
        CHECK(res.resolved);
        CHECK(res.residual < 1e-9);
        const Matrix rt = rigidity_matrix(fw).transpose();
        CHECK((rt * res.stress - pair_load(fw, h, k)).norm() < 1e-9);
      }
  }

  SECTION("transverse load on the collinear triangle cannot be balanced") {
    const Framework fw = collinear_triangle();
    LoadVector l = LoadVector::Zero(6);
    l(1) = -0.5;
    l(3) = -0.5;
    l(5) = 1.0;
    REQUIRE(is_equilibrium_load(fw, l));
    const auto res = resolve_load(fw, l);
    CHECK_FALSE(res.resolved);
    CHECK(res.residual == Catch::Approx(std::sqrt(1.5)).epsilon(1e-12));
  }
}

TEST_CASE("pair-load resolvability matches kernel openings") {
  SECTION("square diagonals are opened by the shear flex") {
    const Framework fw = unit_square();
    CHECK(flex_load_duality_check(fw, 0, 2));
    CHECK(flex_load_duality_check(fw, 1, 3));
    CHECK(exact_flex_load_duality_check(fw, 0, 2));

    const auto diag = resolve_load(fw, pair_load(fw, 0, 2));
    CHECK_FALSE(diag.resolved);
  }

  SECTION("pairs along existing bars stay resolvable") {
    const Framework fw = unit_square();
    CHECK(flex_load_duality_check(fw, 0, 1));
    CHECK(resolve_load(fw, pair_load(fw, 0, 1)).resolved);
  }

  SECTION("both routes agree on every pair of the standing frameworks") {
    for (const Framework& fw :
         {k3_mirror().fw, k4_generic(), collinear_triangle(), unit_square(),
          k33_rectangle().fw})
      for (int h = 0; h < fw.joint_count(); ++h)
        for (int k = h + 1; k < fw.joint_count(); ++k) {
          INFO("pair " << h << "," << k);
          CHECK(flex_load_duality_check(fw, h, k));
          CHECK(exact_flex_load_duality_check(fw, h, k));
        }
  }
}
