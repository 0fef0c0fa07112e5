#pragma once

#include <symrig/symrig.hpp>

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

using namespace symrig;

inline double pi() { return std::acos(-1.0); }

/// Builds a configuration from rational literals, carrying both the float
/// and the exact coordinates.
inline Configuration exact_config(int dim,
                                  const std::vector<std::vector<std::string>>& rows) {
  Configuration c;
  c.dim = dim;
  const int n = static_cast<int>(rows.size());
  c.coords = Matrix(n, dim);
  RationalMatrix exact(static_cast<std::size_t>(n),
                       static_cast<std::size_t>(dim));
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < dim; ++j) {
      const Rational r = parse_rational(rows[static_cast<std::size_t>(v)]
                                            [static_cast<std::size_t>(j)]);
      exact.at(static_cast<std::size_t>(v), static_cast<std::size_t>(j)) = r;
      c.coords(v, j) = to_double(r);
    }
  c.exact = exact;
  return c;
}

struct SymmetricFixture {
  Framework fw;
  SymmetryGroup group;
  TypeMap map;
};

/// Triangle with a vertical mirror: joints (-1,0), (1,0), (0,2), bars in the
/// order {1,2}, {1,3}, {2,3}. The mirror swaps the first two joints.
inline SymmetricFixture k3_mirror() {
  SymmetricFixture fx;
  fx.fw.graph = {3, {{0, 1}, {0, 2}, {1, 2}}};
  fx.fw.config = exact_config(2, {{"-1", "0"}, {"1", "0"}, {"0", "2"}});
  fx.group = builtin_group_2d(BuiltinKind::Cs, 1, pi() / 2);
  fx.map.images = {{0, 1, 2}, {1, 0, 2}};
  return fx;
}

/// Complete bipartite framework on parts {1,2,3} and {4,5,6} with the full
/// rectangle symmetry (half turn, horizontal and vertical mirrors), centered
/// at the origin.
inline SymmetricFixture k33_rectangle() {
  SymmetricFixture fx;
  fx.fw.graph = {6,
                 {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5},
                  {2, 3}, {2, 4}, {2, 5}}};
  fx.fw.config = exact_config(2, {{"-3/2", "1/2"},
                                  {"3/2", "1/2"},
                                  {"0", "-1"},
                                  {"0", "1"},
                                  {"-3/2", "-1/2"},
                                  {"3/2", "-1/2"}});
  fx.group = builtin_group_2d(BuiltinKind::Cmv, 2, 0.0);
  // Element order: Id, half turn, mirror across x, mirror across y.
  fx.map.images = {{0, 1, 2, 3, 4, 5},
                   {5, 4, 3, 2, 1, 0},
                   {4, 5, 3, 2, 0, 1},
                   {1, 0, 2, 3, 5, 4}};
  return fx;
}

/// Degenerate triangle with all three joints on a line, the third joint
/// between the other two.
inline Framework collinear_triangle() {
  Framework fw;
  fw.graph = {3, {{0, 1}, {0, 2}, {1, 2}}};
  fw.config = exact_config(2, {{"0", "0"}, {"2", "0"}, {"1", "0"}});
  return fw;
}

/// Generic complete graph on four joints in the plane.
inline Framework k4_generic() {
  Framework fw;
  fw.graph = {4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  fw.config = exact_config(
      2, {{"0", "0"}, {"3", "0"}, {"1", "2"}, {"2", "7/3"}});
  return fw;
}

/// Equilateral triangle under its rotation group only (one degree-2
/// character row).
inline SymmetricFixture equilateral_c3() {
  SymmetricFixture fx;
  fx.fw.graph = {3, {{0, 1}, {1, 2}, {0, 2}}};
  fx.fw.config.dim = 2;
  fx.fw.config.coords = Matrix(3, 2);
  for (int v = 0; v < 3; ++v) {
    const double angle = pi() / 2 + 2.0 * pi() * v / 3.0;
    fx.fw.config.coords(v, 0) = std::cos(angle);
    fx.fw.config.coords(v, 1) = std::sin(angle);
  }
  fx.group = builtin_group_2d(BuiltinKind::Cm, 3);
  fx.map.images = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  return fx;
}

/// Same triangle with the full dihedral symmetry (mirror through the top
/// joint).
inline SymmetricFixture equilateral_c3v() {
  SymmetricFixture fx = equilateral_c3();
  fx.group = builtin_group_2d(BuiltinKind::Cmv, 3, pi() / 2);
  // Mirrors: s0 through joint 1, s1 through joint 3, s2 through joint 2.
  fx.map.images = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                   {0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
  return fx;
}

/// Four-cycle with joints 2 and 4 coincident on the mirror line; the mirror
/// can either swap or fix them, so two vertex maps are valid.
inline Framework coincident_cycle() {
  Framework fw;
  fw.graph = {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  fw.config = exact_config(2, {{"-1", "0"}, {"0", "1"}, {"1", "0"}, {"0", "1"}});
  return fw;
}

/// Complete graph on four joints in space with a mirror swapping the two
/// off-plane joints. The mirror group needs a user-supplied character table
/// (there is no built-in for dimension three).
inline SymmetricFixture k4_mirror_3d() {
  SymmetricFixture fx;
  fx.fw.graph = {4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  fx.fw.config = exact_config(3, {{"0", "0", "1"},
                                  {"0", "0", "-1"},
                                  {"1", "0", "0"},
                                  {"0", "1", "0"}});
  Matrix mirror = Matrix::Identity(3, 3);
  mirror(2, 2) = -1.0;
  fx.group = group_from_generators(3, {mirror});
  fx.map.images = {{0, 1, 2, 3}, {1, 0, 2, 3}};
  return fx;
}

inline CharacterTable mirror_table_3d() {
  CharacterTable table;
  table.irreps.push_back({"A'", 1, {1.0, 1.0}});
  table.irreps.push_back({"A''", 1, {1.0, -1.0}});
  return table;
}

/// Random framework built to be exactly symmetric: joints are whole group
/// orbits of random seed points and bars are whole orbits of random pairs,
/// so the orbit bookkeeping itself provides the vertex map.
inline SymmetricFixture random_symmetric_framework(std::mt19937& rng,
                                                   int group_choice) {
  SymmetryGroup group;
  std::uniform_real_distribution<double> angle_dist(0.0, pi());
  switch (group_choice % 5) {
    case 0: group = builtin_group_2d(BuiltinKind::Cs, 1, angle_dist(rng)); break;
    case 1: group = builtin_group_2d(BuiltinKind::Cm, 2); break;
    case 2: group = builtin_group_2d(BuiltinKind::Cm, 3); break;
    case 3: group = builtin_group_2d(BuiltinKind::Cmv, 2, angle_dist(rng)); break;
    default: group = builtin_group_2d(BuiltinKind::Cmv, 3, angle_dist(rng)); break;
  }
  const int k = group.order();
  std::uniform_int_distribution<int> orbit_count_dist(2, 3);
  std::uniform_real_distribution<double> radius_dist(0.7, 2.0);
  std::uniform_real_distribution<double> seed_angle_dist(0.0, 2.0 * pi());

  SymmetricFixture fx;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int orbits = orbit_count_dist(rng);
    const int n = orbits * k;
    Matrix coords(n, 2);
    for (int o = 0; o < orbits; ++o) {
      Vector seed(2);
      const double r = radius_dist(rng), a = seed_angle_dist(rng);
      seed << r * std::cos(a), r * std::sin(a);
      for (int x = 0; x < k; ++x)
        coords.row(o * k + x) = (group.matrix(x) * seed).transpose();
    }
    bool separated = true;
    for (int u = 0; u < n && separated; ++u)
      for (int v = u + 1; v < n && separated; ++v)
        if ((coords.row(u) - coords.row(v)).norm() < 1e-2) separated = false;
    if (!separated) continue;

    fx.fw.graph.n = n;
    fx.fw.graph.edges.clear();
    fx.fw.config.dim = 2;
    fx.fw.config.coords = coords;
    fx.fw.config.exact.reset();

    fx.map.images.assign(static_cast<std::size_t>(k), {});
    for (int x = 0; x < k; ++x) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (int o = 0; o < orbits; ++o)
        for (int e = 0; e < k; ++e)
          perm[static_cast<std::size_t>(o * k + e)] = o * k + group.product(x, e);
      fx.map.images[static_cast<std::size_t>(x)] = std::move(perm);
    }

    std::uniform_int_distribution<int> vertex_dist(0, n - 1);
    std::set<std::pair<int, int>> edge_set;
    const int seed_pairs = 2 + static_cast<int>(rng() % 3);
    for (int s = 0; s < seed_pairs; ++s) {
      const int a = vertex_dist(rng);
      int b = vertex_dist(rng);
      while (b == a) b = vertex_dist(rng);
      for (int x = 0; x < k; ++x) {
        const auto& perm = fx.map.images[static_cast<std::size_t>(x)];
        auto key = std::minmax(perm[static_cast<std::size_t>(a)],
                               perm[static_cast<std::size_t>(b)]);
        edge_set.insert({key.first, key.second});
      }
    }
    for (const auto& e : edge_set) fx.fw.graph.edges.push_back(e);
    fx.group = group;
    return fx;
  }
  throw std::runtime_error("could not build a separated random framework");
}

} // namespace testsupport
