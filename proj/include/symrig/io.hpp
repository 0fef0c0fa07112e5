#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symrig/blockdiag.hpp"
#include "symrig/errors.hpp"
#include "symrig/framework.hpp"
#include "symrig/maxwell.hpp"
#include "symrig/representation.hpp"
#include "symrig/symmetry.hpp"

namespace symrig {

using Json = nlohmann::ordered_json;

/// How the group was described in the input file, kept verbatim so a parsed
/// problem can be written back out unchanged.
struct GroupSpec {
  bool is_builtin = false;
  std::string builtin_name;
  int m = 1;
  double mirror_angle = 0.0;
  std::vector<Matrix> generators;
};

/// A fully parsed problem: framework, group, and the optional vertex map and
/// character table that accompany it.
struct AnalysisInput {
  Framework framework;
  GroupSpec group_spec;
  SymmetryGroup group;
  std::optional<TypeMap> type_map;
  std::optional<CharacterTable> user_table;
};

/// The table to analyze with: the user-supplied one (validated) if present,
/// otherwise the built-in table for the group.
inline CharacterTable resolved_table(const AnalysisInput& input) {
  if (input.user_table) {
    validate_character_table(*input.user_table, input.group);
    return *input.user_table;
  }
  return character_table(input.group);
}

namespace detail {

inline void expect(bool cond, const std::string& msg) {
  if (!cond) throw validation_error(msg);
}

inline Matrix parse_matrix(const Json& rows, int dim, const std::string& what) {
  expect(rows.is_array() && static_cast<int>(rows.size()) == dim,
         what + " must be a " + std::to_string(dim) + "x" +
             std::to_string(dim) + " array");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    expect(row.is_array() && static_cast<int>(row.size()) == dim,
           what + " must be a square array of numbers");
    for (int j = 0; j < dim; ++j) {
      const Json& cell = row[static_cast<std::size_t>(j)];
      expect(cell.is_number(), what + " entries must be numbers");
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

} // namespace detail

inline SymmetryGroup build_group(const GroupSpec& spec, int dim) {
  if (spec.is_builtin) {
    detail::expect(dim == 2, "built-in groups are planar; use generators");
    if (spec.builtin_name == "C1") return builtin_group_2d(BuiltinKind::C1);
    if (spec.builtin_name == "Cs")
      return builtin_group_2d(BuiltinKind::Cs, 1, spec.mirror_angle);
    if (spec.builtin_name == "Cm")
      return builtin_group_2d(BuiltinKind::Cm, spec.m);
    if (spec.builtin_name == "Cmv")
      return builtin_group_2d(BuiltinKind::Cmv, spec.m, spec.mirror_angle);
    throw validation_error("unknown built-in group '" + spec.builtin_name +
                           "'");
  }
  return group_from_generators(dim, spec.generators);
}

inline AnalysisInput parse_input(const Json& doc) {
  detail::expect(doc.is_object(), "input must be a JSON object");
  detail::expect(doc.contains("dimension") &&
                     doc["dimension"].is_number_integer(),
                 "missing integer field 'dimension'");
  const int dim = doc["dimension"].get<int>();
  detail::expect(dim >= 1, "'dimension' must be positive");

  detail::expect(doc.contains("coordinates") && doc["coordinates"].is_array(),
                 "missing array field 'coordinates'");
  const Json& coords = doc["coordinates"];
  const int n = static_cast<int>(coords.size());
  detail::expect(n >= 1, "'coordinates' must not be empty");

  AnalysisInput input;
  Configuration& config = input.framework.config;
  config.dim = dim;
  config.coords = Matrix(n, dim);
  RationalMatrix exact(static_cast<std::size_t>(n),
                       static_cast<std::size_t>(dim));
  bool all_exact = true;
  for (int v = 0; v < n; ++v) {
    const Json& row = coords[static_cast<std::size_t>(v)];
    detail::expect(row.is_array() && static_cast<int>(row.size()) == dim,
                   "each coordinate row needs exactly 'dimension' entries");
    for (int j = 0; j < dim; ++j) {
      const Json& cell = row[static_cast<std::size_t>(j)];
      if (cell.is_string()) {
        const Rational r = parse_rational(cell.get<std::string>());
        exact.at(static_cast<std::size_t>(v), static_cast<std::size_t>(j)) = r;
        config.coords(v, j) = to_double(r);
      } else if (cell.is_number_integer() || cell.is_number_unsigned()) {
        const long long k = cell.get<long long>();
        exact.at(static_cast<std::size_t>(v), static_cast<std::size_t>(j)) =
            Rational(k);
        config.coords(v, j) = static_cast<double>(k);
      } else if (cell.is_number_float()) {
        all_exact = false;
        config.coords(v, j) = cell.get<double>();
      } else {
        throw validation_error(
            "coordinates must be numbers or rational strings like \"3/2\"");
      }
    }
  }
  if (all_exact) config.exact = std::move(exact);

  detail::expect(doc.contains("edges") && doc["edges"].is_array(),
                 "missing array field 'edges'");
  Graph& graph = input.framework.graph;
  graph.n = n;
  for (const Json& e : doc["edges"]) {
    detail::expect(e.is_array() && e.size() == 2 &&
                       e[0].is_number_integer() && e[1].is_number_integer(),
                   "each edge must be a pair of 1-based vertex numbers");
    const int u = e[0].get<int>(), v = e[1].get<int>();
    detail::expect(u >= 1 && u <= n && v >= 1 && v <= n,
                   "edge endpoint out of range");
    graph.edges.push_back({u - 1, v - 1});
  }
  input.framework.validate();

  detail::expect(doc.contains("group") && doc["group"].is_object(),
                 "missing object field 'group'");
  const Json& grp = doc["group"];
  if (grp.contains("builtin")) {
    detail::expect(grp["builtin"].is_string(),
                   "'group.builtin' must be a string");
    input.group_spec.is_builtin = true;
    input.group_spec.builtin_name = grp["builtin"].get<std::string>();
    if (grp.contains("m")) {
      detail::expect(grp["m"].is_number_integer(),
                     "'group.m' must be an integer");
      input.group_spec.m = grp["m"].get<int>();
    }
    if (grp.contains("mirror_angle")) {
      detail::expect(grp["mirror_angle"].is_number(),
                     "'group.mirror_angle' must be a number");
      input.group_spec.mirror_angle = grp["mirror_angle"].get<double>();
    }
  } else if (grp.contains("generators")) {
    detail::expect(grp["generators"].is_array(),
                   "'group.generators' must be an array of matrices");
    for (const Json& g : grp["generators"])
      input.group_spec.generators.push_back(
          detail::parse_matrix(g, dim, "generator"));
  } else {
    throw validation_error("'group' needs either 'builtin' or 'generators'");
  }
  input.group = build_group(input.group_spec, dim);

  if (doc.contains("phi")) {
    detail::expect(doc["phi"].is_object(),
                   "'phi' must map element labels to image lists");
    TypeMap map;
    map.images.resize(static_cast<std::size_t>(input.group.order()));
    std::vector<bool> seen(static_cast<std::size_t>(input.group.order()),
                           false);
    for (const auto& [label, images] : doc["phi"].items()) {
      int idx = -1;
      for (int x = 0; x < input.group.order(); ++x)
        if (input.group.label(x) == label) {
          idx = x;
          break;
        }
      detail::expect(idx >= 0, "'phi' names unknown element '" + label + "'");
      detail::expect(images.is_array() && static_cast<int>(images.size()) == n,
                     "'phi." + label + "' needs one image per vertex");
      std::vector<int> perm;
      for (const Json& w : images) {
        detail::expect(w.is_number_integer(),
                       "'phi' images must be 1-based vertex numbers");
        const int t = w.get<int>();
        detail::expect(t >= 1 && t <= n, "'phi' image out of range");
        perm.push_back(t - 1);
      }
      map.images[static_cast<std::size_t>(idx)] = std::move(perm);
      seen[static_cast<std::size_t>(idx)] = true;
    }
    for (int x = 0; x < input.group.order(); ++x)
      detail::expect(seen[static_cast<std::size_t>(x)],
                     "'phi' is missing element '" + input.group.label(x) + "'");
    input.type_map = std::move(map);
  }

  if (doc.contains("character_table")) {
    detail::expect(doc["character_table"].is_array(),
                   "'character_table' must be an array of rows");
    CharacterTable table;
    for (const Json& row : doc["character_table"]) {
      detail::expect(row.is_object() && row.contains("name") &&
                         row.contains("degree") && row.contains("values"),
                     "each character row needs 'name', 'degree', 'values'");
      Irrep irrep;
      irrep.name = row["name"].get<std::string>();
      detail::expect(row["degree"].is_number_integer() &&
                         row["degree"].get<int>() >= 1,
                     "character row degree must be a positive integer");
      irrep.degree = row["degree"].get<int>();
      detail::expect(row["values"].is_array(),
                     "character row 'values' must be an array");
      for (const Json& v : row["values"]) {
        detail::expect(v.is_number(), "character values must be numbers");
        irrep.values.push_back(v.get<double>());
      }
      table.irreps.push_back(std::move(irrep));
    }
    validate_character_table(table, input.group);
    input.user_table = std::move(table);
  }
  return input;
}

inline AnalysisInput parse_input_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw validation_error("input is not valid JSON");
  return parse_input(doc);
}

inline AnalysisInput input_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_input_text(buffer.str());
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json character_to_json(const Character& chi) {
  Json out = Json::array();
  for (double v : chi) {
    const double rounded = std::round(v);
    // Integral character values print as integers for readability.
    if (std::abs(v - rounded) < 1e-12)
      out.push_back(static_cast<long long>(rounded));
    else
      out.push_back(v);
  }
  return out;
}

/// Writes a parsed problem back in the input schema. Parsing the output
/// again reproduces the same in-memory value.
inline Json input_to_json(const AnalysisInput& input) {
  Json doc = Json::object();
  const Framework& fw = input.framework;
  doc["dimension"] = fw.dim();
  Json coords = Json::array();
  for (int v = 0; v < fw.joint_count(); ++v) {
    Json row = Json::array();
    for (int j = 0; j < fw.dim(); ++j) {
      if (fw.config.exact)
        row.push_back(format_rational(
            fw.config.exact->at(static_cast<std::size_t>(v),
                                static_cast<std::size_t>(j))));
      else
        row.push_back(fw.config.coords(v, j));
    }
    coords.push_back(std::move(row));
  }
  doc["coordinates"] = std::move(coords);
  Json edges = Json::array();
  for (const auto& [u, v] : fw.graph.edges)
    edges.push_back(Json::array({u + 1, v + 1}));
  doc["edges"] = std::move(edges);

  Json grp = Json::object();
  if (input.group_spec.is_builtin) {
    grp["builtin"] = input.group_spec.builtin_name;
    if (input.group_spec.builtin_name == "Cm" ||
        input.group_spec.builtin_name == "Cmv")
      grp["m"] = input.group_spec.m;
    if (input.group_spec.builtin_name == "Cs" ||
        input.group_spec.builtin_name == "Cmv")
      grp["mirror_angle"] = input.group_spec.mirror_angle;
  } else {
    Json gens = Json::array();
    for (const auto& g : input.group_spec.generators)
      gens.push_back(matrix_to_json(g));
    grp["generators"] = std::move(gens);
  }
  doc["group"] = std::move(grp);

  if (input.type_map) {
    Json phi = Json::object();
    for (int x = 0; x < input.group.order(); ++x) {
      Json images = Json::array();
      for (int v : input.type_map->images[static_cast<std::size_t>(x)])
        images.push_back(v + 1);
      phi[input.group.label(x)] = std::move(images);
    }
    doc["phi"] = std::move(phi);
  }

  if (input.user_table) {
    Json table = Json::array();
    for (const auto& irrep : input.user_table->irreps) {
      Json row = Json::object();
      row["name"] = irrep.name;
      row["degree"] = irrep.degree;
      row["values"] = character_to_json(irrep.values);
      table.push_back(std::move(row));
    }
    doc["character_table"] = std::move(table);
  }
  return doc;
}

inline Json type_map_to_json(const SymmetryGroup& group, const TypeMap& map) {
  Json phi = Json::object();
  for (int x = 0; x < group.order(); ++x) {
    Json images = Json::array();
    for (int v : map.images[static_cast<std::size_t>(x)])
      images.push_back(v + 1);
    phi[group.label(x)] = std::move(images);
  }
  return phi;
}

inline Json maxwell_report_to_json(const MaxwellReport& report) {
  Json doc = Json::object();
  doc["elements"] = report.element_labels;
  doc["irreps"] = report.irrep_names;
  doc["degrees"] = report.irrep_degrees;
  Json chars = Json::object();
  chars["joint"] = character_to_json(report.x_joint);
  chars["translation"] = character_to_json(report.x_trans);
  chars["rotation"] = character_to_json(report.x_rot);
  chars["external"] = character_to_json(report.x_ext);
  chars["internal"] = character_to_json(report.x_internal);
  chars["q"] = character_to_json(report.x_q);
  doc["characters"] = std::move(chars);
  doc["kappa"] = report.kappa;
  doc["mu"] = report.mu;
  doc["gap"] = report.gap;
  doc["passes"] = report.passes;
  Json findings = Json::array();
  for (const auto& f : interpret_gaps(report)) {
    Json item = Json::object();
    item["irrep"] = f.irrep;
    item["flexes"] = f.flexes;
    item["self_stresses"] = f.self_stresses;
    item["description"] = f.description;
    findings.push_back(std::move(item));
  }
  doc["findings"] = std::move(findings);
  return doc;
}

inline MaxwellReport maxwell_report_from_json(const Json& doc) {
  MaxwellReport report;
  report.element_labels = doc["elements"].get<std::vector<std::string>>();
  report.irrep_names = doc["irreps"].get<std::vector<std::string>>();
  report.irrep_degrees = doc["degrees"].get<std::vector<int>>();
  auto character_from = [](const Json& arr) {
    Character chi;
    for (const Json& v : arr) chi.push_back(v.get<double>());
    return chi;
  };
  report.x_joint = character_from(doc["characters"]["joint"]);
  report.x_trans = character_from(doc["characters"]["translation"]);
  report.x_rot = character_from(doc["characters"]["rotation"]);
  report.x_ext = character_from(doc["characters"]["external"]);
  report.x_internal = character_from(doc["characters"]["internal"]);
  report.x_q = character_from(doc["characters"]["q"]);
  report.kappa = doc["kappa"].get<std::vector<long long>>();
  report.mu = doc["mu"].get<std::vector<long long>>();
  report.gap = doc["gap"].get<std::vector<long long>>();
  report.passes = doc["passes"].get<bool>();
  return report;
}

} // namespace symrig
