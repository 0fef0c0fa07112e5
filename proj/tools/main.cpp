#include <CLI11.hpp>

#include <symrig/symrig.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace symrig;

struct Options {
  std::string file;
  std::string format = "text";
  double tolerance = 1e-9;
  bool exact = false;
  bool dump_matrices = false;
};

std::vector<TypeMap> resolve_maps(const AnalysisInput& input, double tol) {
  if (input.type_map) {
    if (!is_compatible(input.framework, input.group, *input.type_map, tol))
      throw validation_error(
          "supplied vertex map is not compatible with the configuration");
    return {*input.type_map};
  }
  auto maps = find_type_maps(input.framework, input.group, tol);
  if (maps.empty())
    throw validation_error("no compatible vertex map exists for this group");
  return maps;
}

void require_exact_coords(const AnalysisInput& input) {
  if (!input.framework.config.exact)
    throw validation_error(
        "exact checks need integer or rational coordinates, not floats");
}

std::string join_labels(const SymmetryGroup& g) {
  std::string line;
  for (int x = 0; x < g.order(); ++x) {
    if (x) line += " ";
    line += g.label(x);
  }
  return line;
}

std::string format_value(double v) {
  const double rounded = std::round(v);
  if (std::abs(v - rounded) < 1e-12) {
    std::ostringstream s;
    s << static_cast<long long>(rounded);
    return s.str();
  }
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void print_character_block(std::ostream& out, const SymmetryGroup& group,
                           const std::vector<std::pair<std::string, Character>>&
                               rows) {
  out << "  " << std::left << std::setw(6) << "" << std::right;
  for (int x = 0; x < group.order(); ++x)
    out << std::setw(8) << group.label(x);
  out << "\n";
  for (const auto& [name, chi] : rows) {
    out << "  " << std::left << std::setw(6) << name << std::right;
    for (double v : chi) out << std::setw(8) << format_value(v);
    out << "\n";
  }
}

void print_phi(std::ostream& out, const SymmetryGroup& group,
               const TypeMap& map) {
  for (int x = 0; x < group.order(); ++x) {
    out << "  " << group.label(x) << ":";
    for (int v : map.images[static_cast<std::size_t>(x)]) out << " " << v + 1;
    out << "\n";
  }
}

void print_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
  out << name << " (" << m.rows() << "x" << m.cols() << "):\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << " " << std::setw(12) << std::setprecision(6) << m(i, j);
    out << "\n";
  }
}

// ---------------------------------------------------------------- analyze --

void run_analyze(const AnalysisInput& input, const Options& opt) {
  const Framework& fw = input.framework;
  const auto analysis = infinitesimal_analysis(fw, opt.tolerance);
  const auto verdict = is_isostatic(fw, opt.tolerance);

  Json doc = Json::object();
  doc["elements"] = Json::parse("[]");
  for (int x = 0; x < input.group.order(); ++x)
    doc["elements"].push_back(input.group.label(x));
  doc["dimension"] = fw.dim();
  doc["joints"] = fw.joint_count();
  doc["bars"] = fw.bar_count();
  doc["rank"] = analysis.rank;
  doc["nullity"] = analysis.nullity;
  doc["motion_span"] = analysis.motion_span_dim;
  doc["flexes"] = analysis.flex_count;
  doc["self_stresses"] = fw.bar_count() - analysis.rank;
  if (fw.joint_count() >= fw.dim())
    doc["counting_heuristic"] = maxwell_count(fw);
  else
    doc["counting_heuristic"] = nullptr;
  doc["rigid"] = analysis.rigid;
  doc["isostatic"] = verdict.isostatic;

  if (opt.exact) {
    const int exact_r = exact_rank(exact_rigidity_matrix(fw));
    const int exact_span = exact_affine_span_dim(fw.config);
    Json ex = Json::object();
    ex["rank"] = exact_r;
    ex["affine_span"] = exact_span;
    doc["exact"] = std::move(ex);
    if (exact_r != analysis.rank)
      throw numeric_error("float rank disagrees with exact rank");
    if (exact_span != affine_span_dim(fw.config, opt.tolerance))
      throw numeric_error("float affine span disagrees with exact span");
  }
  if (opt.dump_matrices)
    doc["rigidity_matrix"] = matrix_to_json(rigidity_matrix(fw));

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "elements: " << join_labels(input.group) << "\n";
  std::cout << "dimension: " << fw.dim() << "  joints: " << fw.joint_count()
            << "  bars: " << fw.bar_count() << "\n";
  std::cout << "rank: " << analysis.rank << "  nullity: " << analysis.nullity
            << "  rigid-motion span: " << analysis.motion_span_dim << "\n";
  std::cout << "flexes: " << analysis.flex_count
            << "  self-stresses: " << fw.bar_count() - analysis.rank << "\n";
  if (doc["counting_heuristic"].is_number())
    std::cout << "counting heuristic (bars - dof): "
              << doc["counting_heuristic"].get<int>() << "\n";
  std::cout << "rigid: " << (analysis.rigid ? "yes" : "no") << "\n";
  std::cout << "isostatic: " << (verdict.isostatic ? "yes" : "no") << "\n";
  if (opt.exact)
    std::cout << "exact rank: " << doc["exact"]["rank"].get<int>()
              << " (confirmed)\n";
  if (opt.dump_matrices)
    print_matrix(std::cout, "rigidity matrix", rigidity_matrix(fw));
}

// ---------------------------------------------------------------- maxwell --

void run_maxwell(const AnalysisInput& input, const Options& opt) {
  const auto table = resolved_table(input);
  const auto maps = resolve_maps(input, opt.tolerance);

  Json doc = Json::object();
  doc["elements"] = Json::array();
  for (int x = 0; x < input.group.order(); ++x)
    doc["elements"].push_back(input.group.label(x));
  doc["map_count"] = maps.size();
  doc["maps"] = Json::array();
  std::vector<MaxwellReport> reports;
  std::vector<BlockRankAnalysis> block_counts;
  for (const auto& map : maps) {
    const auto report = symmetry_maxwell(input.framework, input.group, map,
                                         table, opt.tolerance);
    // The character gaps are only lower bounds per type; the block ranks give
    // the exact counts, so the report carries both.
    const auto form = block_diagonalize(input.framework, input.group, map,
                                        table, opt.tolerance);
    const auto motion = motion_space_decomposition(
        input.framework, input.group, map, table, opt.tolerance);
    const auto blocks = block_rank_analysis(form, motion, opt.tolerance);

    Json item = Json::object();
    item["phi"] = type_map_to_json(input.group, map);
    item["report"] = maxwell_report_to_json(report);
    item["block_counts"] = Json::array();
    for (std::size_t t = 0; t < blocks.irrep.size(); ++t) {
      Json b = Json::object();
      b["irrep"] = blocks.irrep[t];
      b["stress_dim"] = blocks.stress_dim[t];
      b["flex_dim"] = blocks.flex_dim[t];
      item["block_counts"].push_back(std::move(b));
    }
    doc["maps"].push_back(std::move(item));
    reports.push_back(report);
    block_counts.push_back(blocks);
  }

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "elements: " << join_labels(input.group) << "\n";
  std::cout << "vertex maps: " << maps.size() << "\n";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& report = reports[i];
    std::cout << "\nmap " << i + 1 << ":\n";
    print_phi(std::cout, input.group, maps[i]);
    print_character_block(std::cout, input.group,
                          {{"X_J", report.x_joint},
                           {"X_T", report.x_trans},
                           {"X_R", report.x_rot},
                           {"X_e", report.x_ext},
                           {"X_Q", report.x_q},
                           {"X_i", report.x_internal}});
    std::cout << "  " << std::left << std::setw(8) << "irrep" << std::right
              << std::setw(8) << "degree" << std::setw(8) << "kappa"
              << std::setw(8) << "mu" << std::setw(8) << "gap"
              << std::setw(8) << "stress" << std::setw(8) << "flex" << "\n";
    for (std::size_t t = 0; t < report.irrep_names.size(); ++t)
      std::cout << "  " << std::left << std::setw(8) << report.irrep_names[t]
                << std::right << std::setw(8) << report.irrep_degrees[t]
                << std::setw(8) << report.kappa[t] << std::setw(8)
                << report.mu[t] << std::setw(8) << report.gap[t]
                << std::setw(8) << block_counts[i].stress_dim[t]
                << std::setw(8) << block_counts[i].flex_dim[t] << "\n";
    std::cout << "  verdict: " << (report.passes ? "PASS" : "FAIL") << "\n";
    for (const auto& f : interpret_gaps(report))
      std::cout << "  " << f.description << "\n";
  }
}

// --------------------------------------------------------------- blockdiag --

void run_blockdiag(const AnalysisInput& input, const Options& opt) {
  const auto table = resolved_table(input);
  const auto maps = resolve_maps(input, opt.tolerance);
  const Matrix r = rigidity_matrix(input.framework);
  const int global_rank = numeric_rank(r, opt.tolerance);

  Json doc = Json::object();
  doc["elements"] = Json::array();
  for (int x = 0; x < input.group.order(); ++x)
    doc["elements"].push_back(input.group.label(x));
  doc["global_rank"] = global_rank;
  doc["maps"] = Json::array();

  struct PerMap {
    BlockDiagonalForm form;
    BlockRankAnalysis analysis;
  };
  std::vector<PerMap> results;

  for (const auto& map : maps) {
    auto form = block_diagonalize(input.framework, input.group, map, table,
                                  opt.tolerance);
    const auto motion = motion_space_decomposition(input.framework, input.group,
                                                   map, table, opt.tolerance);
    auto analysis = block_rank_analysis(form, motion, opt.tolerance);

    Json item = Json::object();
    item["phi"] = type_map_to_json(input.group, map);
    item["blocks"] = Json::array();
    int rank_sum = 0;
    for (std::size_t t = 0; t < analysis.irrep.size(); ++t) {
      Json b = Json::object();
      b["irrep"] = analysis.irrep[t];
      b["rows"] = analysis.rows[t];
      b["cols"] = analysis.cols[t];
      b["rank"] = analysis.rank[t];
      b["stress_dim"] = analysis.stress_dim[t];
      b["flex_dim"] = analysis.flex_dim[t];
      item["blocks"].push_back(std::move(b));
      rank_sum += analysis.rank[t];
    }
    item["rank_sum"] = rank_sum;
    item["off_block_residual"] = form.off_block_residual;
    if (opt.exact) {
      require_exact_coords(input);
      const int exact_r = exact_rank(exact_rigidity_matrix(input.framework));
      item["exact_rank"] = exact_r;
      if (rank_sum != exact_r)
        throw numeric_error("block rank sum disagrees with exact rank");
    }
    if (opt.dump_matrices) {
      Json ms = Json::object();
      ms["rigidity"] = matrix_to_json(r);
      ms["col_basis"] = matrix_to_json(form.col_basis.basis);
      ms["row_basis"] = matrix_to_json(form.row_basis.basis);
      ms["transformed"] = matrix_to_json(form.transformed);
      item["matrices"] = std::move(ms);
    }
    doc["maps"].push_back(std::move(item));
    results.push_back({std::move(form), std::move(analysis)});
  }

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "elements: " << join_labels(input.group) << "\n";
  std::cout << "global rank: " << global_rank << "\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    std::cout << "\nmap " << i + 1 << ":\n";
    print_phi(std::cout, input.group, maps[i]);
    std::cout << "  " << std::left << std::setw(8) << "irrep" << std::right
              << std::setw(6) << "rows" << std::setw(6) << "cols"
              << std::setw(6) << "rank" << std::setw(8) << "stress"
              << std::setw(6) << "flex" << "\n";
    for (std::size_t t = 0; t < res.analysis.irrep.size(); ++t)
      std::cout << "  " << std::left << std::setw(8) << res.analysis.irrep[t]
                << std::right << std::setw(6) << res.analysis.rows[t]
                << std::setw(6) << res.analysis.cols[t] << std::setw(6)
                << res.analysis.rank[t] << std::setw(8)
                << res.analysis.stress_dim[t] << std::setw(6)
                << res.analysis.flex_dim[t] << "\n";
    std::cout << "  off-block residual: " << std::scientific
              << std::setprecision(3) << res.form.off_block_residual
              << std::defaultfloat << "\n";
    if (opt.dump_matrices) {
      print_matrix(std::cout, "rigidity matrix", r);
      print_matrix(std::cout, "joint basis", res.form.col_basis.basis);
      print_matrix(std::cout, "bar basis", res.form.row_basis.basis);
      print_matrix(std::cout, "transformed", res.form.transformed);
    }
  }
}

// ---------------------------------------------------------------- typemaps --

void run_typemaps(const AnalysisInput& input, const Options& opt) {
  const auto maps =
      find_type_maps(input.framework, input.group, opt.tolerance);

  Json doc = Json::object();
  doc["elements"] = Json::array();
  for (int x = 0; x < input.group.order(); ++x)
    doc["elements"].push_back(input.group.label(x));
  doc["map_count"] = maps.size();
  doc["maps"] = Json::array();
  for (const auto& map : maps)
    doc["maps"].push_back(type_map_to_json(input.group, map));

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "elements: " << join_labels(input.group) << "\n";
  std::cout << "found " << maps.size() << " vertex map(s)\n";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    std::cout << "map " << i + 1 << ":\n";
    print_phi(std::cout, input.group, maps[i]);
  }
}

// ------------------------------------------------------------------ oracle --

void run_oracle(const AnalysisInput& input, const Options& opt) {
  require_exact_coords(input);
  const Framework& fw = input.framework;

  struct Check {
    std::string name;
    int float_value;
    int exact_value;
  };
  std::vector<Check> checks;

  const Matrix r = rigidity_matrix(fw);
  checks.push_back({"rigidity rank", numeric_rank(r, opt.tolerance),
                    exact_rank(exact_rigidity_matrix(fw))});
  checks.push_back({"affine span", affine_span_dim(fw.config, opt.tolerance),
                    exact_affine_span_dim(fw.config)});

  const auto gens = rigid_motion_basis(fw);
  Matrix gen(r.cols(), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j)
    gen.col(static_cast<Eigen::Index>(j)) = gens[j];
  checks.push_back({"motion span", numeric_rank(gen, opt.tolerance),
                    exact_rank(exact_rigid_motion_matrix(fw))});

  const auto table = resolved_table(input);
  const auto maps = resolve_maps(input, opt.tolerance);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto form = block_diagonalize(fw, input.group, maps[i], table,
                                        opt.tolerance);
    int rank_sum = 0;
    for (const auto& b : form.blocks)
      rank_sum += numeric_rank(b.data, opt.tolerance);
    std::ostringstream name;
    name << "map " << i + 1 << " block rank sum";
    checks.push_back({name.str(), rank_sum, checks[0].exact_value});
  }

  bool all_ok = true;
  Json doc = Json::object();
  doc["elements"] = Json::array();
  for (int x = 0; x < input.group.order(); ++x)
    doc["elements"].push_back(input.group.label(x));
  doc["checks"] = Json::array();
  for (const auto& c : checks) {
    const bool ok = c.float_value == c.exact_value;
    all_ok = all_ok && ok;
    Json item = Json::object();
    item["name"] = c.name;
    item["float"] = c.float_value;
    item["exact"] = c.exact_value;
    item["ok"] = ok;
    doc["checks"].push_back(std::move(item));
  }
  doc["confirmed"] = all_ok;

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "elements: " << join_labels(input.group) << "\n";
    std::cout << std::left << std::setw(26) << "check" << std::right
              << std::setw(8) << "float" << std::setw(8) << "exact"
              << "  status\n";
    for (const auto& c : checks)
      std::cout << std::left << std::setw(26) << c.name << std::right
                << std::setw(8) << c.float_value << std::setw(8)
                << c.exact_value << "  "
                << (c.float_value == c.exact_value ? "ok" : "MISMATCH")
                << "\n";
    std::cout << (all_ok ? "all ranks confirmed" : "ranks disagree") << "\n";
  }
  if (!all_ok)
    throw numeric_error("float and exact ranks disagree");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity analysis of symmetric bar-and-joint frameworks"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "problem description (JSON)")
        ->required();
    sub->add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--tolerance", opt.tolerance,
                    "relative tolerance for ranks and residuals")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--exact", opt.exact,
                  "require rational coordinates and cross-check ranks "
                  "against exact arithmetic");
    sub->add_flag("--dump-matrices", opt.dump_matrices,
                  "include matrices in the output");
  };

  auto* analyze =
      app.add_subcommand("analyze", "rank, flex, and self-stress summary");
  auto* maxwell = app.add_subcommand(
      "maxwell", "symmetry-refined counting rule, one report per vertex map");
  auto* blockdiag = app.add_subcommand(
      "blockdiag", "rigidity matrix in the symmetry-adapted bases");
  auto* typemaps = app.add_subcommand(
      "typemaps", "list vertex maps compatible with the configuration");
  auto* oracle = app.add_subcommand(
      "oracle", "cross-check float ranks against exact rational elimination");
  for (auto* sub : {analyze, maxwell, blockdiag, typemaps, oracle})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[validation]: " << e.what() << "\n";
    return 2;
  }

  try {
    const AnalysisInput input = input_from_file(opt.file);
    if (opt.exact) require_exact_coords(input);
    if (analyze->parsed())
      run_analyze(input, opt);
    else if (maxwell->parsed())
      run_maxwell(input, opt);
    else if (blockdiag->parsed())
      run_blockdiag(input, opt);
    else if (typemaps->parsed())
      run_typemaps(input, opt);
    else if (oracle->parsed())
      run_oracle(input, opt);
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "error[validation]: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error[numeric]: " << e.what() << "\n";
    return 3;
  }
}
