// cartan-dress: conformal and projective Cartan connections over a chart,
// their dressed (gauge-invariant) forms, tractor calculus, and the property
// suites that verify every identity the library is built on.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cartan/checks.hpp"
#include "cartan/corpus.hpp"
#include "cartan/dressing.hpp"
#include "cartan/fields.hpp"
#include "cartan/metric_spec.hpp"
#include "cartan/oracles.hpp"

namespace {

using namespace cartan;

struct CommonArgs {
  std::string spec_path;
  std::string flavor = "conformal";
  std::string point_csv;
  std::string json_path;
  int samples = 10;
  std::uint64_t seed = 1;
  double tol = 0.0;
};

Point parse_point(const std::string& csv, int dim) {
  Point p;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) {
        p.push_back(std::stod(cur));
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (static_cast<int>(p.size()) != dim)
    throw ShapeError("--point needs " + std::to_string(dim) + " comma-separated decimals");
  return p;
}

Flavor flavor_of(const std::string& name) {
  if (name == "conformal") return Flavor::conformal;
  if (name == "projective") return Flavor::projective;
  throw ShapeError("--flavor must be conformal, projective or poincare");
}

int finish(RunReport& report, const CommonArgs& args, double wall_ms) {
  std::cout << report.text_summary();
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall time %.1f ms\n", wall_ms);
  std::cout << buf;
  if (!args.json_path.empty()) {
    std::ofstream out(args.json_path);
    out << report.to_json().dump(2) << "\n";
  } else if (report.checks.empty()) {
    std::cout << report.to_json().dump(2) << "\n";
  }
  std::cout << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? 0 : 1;
}

Json connection_blocks_json(const GradedConnection& conn) {
  Json per_direction = Json::array();
  int n = conn.base_dim();
  for (int l = 0; l < n; ++l) {
    Json slot;
    slot["translation"] = json_vector(conn.comp[l].a_m1);
    slot["linear"] = json_matrix(conn.comp[l].a0);
    slot["covector"] = json_vector(conn.comp[l].a_p1);
    per_direction.push_back(slot);
  }
  return per_direction;
}

Json matrix_connection_json(const MatrixConnection& conn) {
  Json per_direction = Json::array();
  for (const auto& m : conn.comp) per_direction.push_back(json_matrix(m));
  return per_direction;
}

int cmd_tensors(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  Point x = args.point_csv.empty() ? spec.base_point : parse_point(args.point_csv, spec.dimension);
  RunReport report;
  report.command = "tensors";
  report.arguments["spec"] = spec.name;
  report.arguments["point"] = x;

  MetricData m = eval_metric(*spec.metric, x);
  auto curv = riemann_ricci(m);
  report.values["metric"] = json_matrix(m.g);
  report.values["christoffel"] = json_ten3(christoffel(m));
  report.values["ricci"] = json_matrix(curv.ricci);
  report.values["scalar_curvature"] = curv.scalar.value();
  for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
    std::string tag = flavor == Flavor::conformal ? "conformal" : "projective";
    BaseGeometry base = base_geometry(*spec.metric, x, flavor);
    report.values[tag]["schouten"] = json_matrix(base.schouten);
    report.values[tag]["upsilon"] = json_vector(base.upsilon);
    report.values[tag]["pi_traceless"] = json_ten3(base.pi.pi1);
    report.values[tag]["pi_second"] = json_matrix(base.pi.pi2);
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, args, ms);
}

int cmd_connection(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  Point x = args.point_csv.empty() ? spec.base_point : parse_point(args.point_csv, spec.dimension);
  RunReport report;
  report.command = "connection";
  report.arguments["spec"] = spec.name;
  report.arguments["flavor"] = args.flavor;
  report.arguments["point"] = x;

  Mat<double> eta = flat_eta(spec.dimension, spec.signature);
  if (args.flavor == "poincare") {
    MetricData m = eval_metric(*spec.metric, x);
    SectionJet sec = orthonormal_section(m, Flavor::conformal);
    report.values["matrix"] = matrix_connection_json(poincare_connection(m, sec));
  } else {
    Flavor flavor = flavor_of(args.flavor);
    BaseGeometry base = base_geometry(*spec.metric, x, flavor);
    SectionJet sec = spec.section(base.metric, flavor, x);
    GradedConnection graded = normal_connection_graded(base, sec, eta);
    MatrixConnection matrix = normal_connection_matrix(base, sec, eta);
    report.values["graded"] = connection_blocks_json(graded);
    report.values["blocks"] = json_connection_blocks(matrix.comp, flavor);
    report.values["matrix"] = matrix_connection_json(matrix);
    report.checks.push_back(make_check(
        "representation consistency", 1,
        connection_residual(matrix, matrix_from_graded(graded, eta)),
        args.tol > 0 ? args.tol : 1e-11));
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, args, ms);
}

int cmd_dress(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  Point x = args.point_csv.empty() ? spec.base_point : parse_point(args.point_csv, spec.dimension);
  Flavor flavor = flavor_of(args.flavor);
  RunReport report;
  report.command = "dress";
  report.arguments["spec"] = spec.name;
  report.arguments["flavor"] = args.flavor;
  report.arguments["point"] = x;
  report.arguments["seed"] = args.seed;

  Mat<double> eta = flat_eta(spec.dimension, spec.signature);
  BaseGeometry base = base_geometry(*spec.metric, x, flavor);
  SectionJet sec = spec.section(base.metric, flavor, x);
  DressedPipeline pipe = run_dressing(base, sec, eta);
  report.values["stage1"] = json_connection_blocks(pipe.stage1.comp, flavor);
  report.values["dressed"] = json_connection_blocks(pipe.dressed.comp, flavor);
  report.values["christoffel"] = json_ten3(base.gamma);
  report.values["schouten"] = json_matrix(base.schouten);

  double tol = args.tol > 0 ? args.tol : 1e-10;
  report.checks.push_back(make_check(
      "dressed blocks match the base tensors", 1,
      connection_residual(pipe.dressed, expected_dressed(base, flavor)), tol));
  Rng rng(args.seed);
  auto kind1 = flavor == Flavor::conformal ? GaugeField::Kind::special_conformal
                                           : GaugeField::Kind::projective_covector;
  auto kind0 = flavor == Flavor::conformal ? GaugeField::Kind::lorentz
                                           : GaugeField::Kind::projective_gl;
  double inv = 0.0;
  for (int rep = 0; rep < std::max(1, args.samples / 2); ++rep) {
    inv = std::max(inv, verify_invariance(
                            base, sec, random_gauge_field(rng, kind1, spec.dimension, eta, 3),
                            eta));
    inv = std::max(inv, verify_invariance(
                            base, sec, random_gauge_field(rng, kind0, spec.dimension, eta, 3),
                            eta));
  }
  report.checks.push_back(make_check("gauge invariance of the dressed connection",
                                     std::max(1, args.samples / 2) * 2, inv,
                                     args.tol > 0 ? args.tol : 1e-9));
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, args, ms);
}

int cmd_curvature(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  Point x = args.point_csv.empty() ? spec.base_point : parse_point(args.point_csv, spec.dimension);
  Flavor flavor = flavor_of(args.flavor);
  RunReport report;
  report.command = "curvature";
  report.arguments["spec"] = spec.name;
  report.arguments["flavor"] = args.flavor;
  report.arguments["point"] = x;

  Mat<double> eta = flat_eta(spec.dimension, spec.signature);
  BaseGeometry base = base_geometry(*spec.metric, x, flavor);
  SectionJet sec = spec.section(base.metric, flavor, x);
  MatrixConnection conn = matrix_from_graded(normal_connection_graded(base, sec, eta), eta);
  CurvatureValue f = curvature(conn);
  Json blocks = Json::array();
  int n = spec.dimension;
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r) {
      Json b;
      b["directions"] = {l, r};
      b["matrix"] = json_matrix(f.at(l, r));
      blocks.push_back(b);
    }
  report.values["curvature"] = blocks;
  NormalityReport norm = check_normality(base, sec, eta);
  report.values["torsion_norm"] = norm.torsion_norm;
  report.values["curvature_trace_norm"] = norm.ricci_trace_norm;
  double tol = args.tol > 0 ? args.tol : 1e-8;
  report.checks.push_back(make_check("torsion norm", 1, norm.torsion_norm, tol));
  report.checks.push_back(make_check("curvature trace norm", 1, norm.ricci_trace_norm, tol));
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, args, ms);
}

int cmd_tractor(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  Point x = args.point_csv.empty() ? spec.base_point : parse_point(args.point_csv, spec.dimension);
  Flavor flavor = flavor_of(args.flavor);
  RunReport report;
  report.command = "tractor";
  report.arguments["spec"] = spec.name;
  report.arguments["flavor"] = args.flavor;
  report.arguments["point"] = x;
  report.arguments["seed"] = args.seed;

  int n = spec.dimension;
  Mat<double> eta = flat_eta(n, spec.signature);
  BaseGeometry base = base_geometry(*spec.metric, x, flavor);
  SectionJet sec = spec.section(base.metric, flavor, x);
  MatrixConnection dressed = run_dressing(base, sec, eta).dressed;

  Rng rng(args.seed);
  int size = flavor == Flavor::conformal ? n + 2 : n + 1;
  TractorField phi0{flavor, {}, TractorStage::stage0};
  for (int i = 0; i < size; ++i) phi0.comp.push_back(random_taylor(rng, n, 3, 0.6));
  report.values["tractor"] = json_vector(phi0.comp);

  auto d = tractor_derivative(dressed, phi0);
  Json deriv = Json::array();
  for (int l = 0; l < n; ++l) deriv.push_back(json_vector(d[l]));
  report.values["covariant_derivative"] = deriv;

  Json table = Json::array();
  std::vector<TaylorValue> scales;
  scales.push_back(exp(TaylorValue::variable(n, 3, 0, x[0])));
  scales.push_back(TaylorValue::variable(n, 3, 1, x[1]) * 0.2 + 1.0);
  const char* labels[2] = {"exp(x0)", "1 + 0.2*x1"};
  for (int i = 0; i < 2; ++i) {
    ResidualTransform rt = ResidualTransform::from_scale(scales[i]);
    TractorField moved = tractor_weyl(phi0, weyl_c_matrix(rt, base, flavor));
    Json row;
    row["scale"] = labels[i];
    row["transformed"] = json_vector(moved.comp);
    table.push_back(row);
  }
  report.values["dilation_table"] = table;
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, args, ms);
}

int cmd_verify(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  MetricSpec spec = load_spec(args.spec_path);
  RunReport report = run_verify(spec, args.seed, args.samples, std::max(2, args.samples / 2),
                                args.tol);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  CommonArgs a = args;
  return finish(report, a, ms);
}

int cmd_groups(const CommonArgs& args, int n) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.command = "groups";
  report.arguments["n"] = n;
  report.arguments["samples"] = args.samples;
  report.arguments["seed"] = args.seed;
  report.checks = group_checks(n, args.samples, args.seed);
  if (args.tol > 0)
    for (auto& c : report.checks) {
      c.tolerance = args.tol;
      c.passed = c.max_residual < args.tol;
    }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  CommonArgs a = args;
  return finish(report, a, ms);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal and projective Cartan connections, dressed connections, tractors"};
  app.require_subcommand(1);

  CommonArgs args;
  int group_n = 3;

  auto add_common = [&](CLI::App* cmd, bool needs_spec) {
    if (needs_spec) cmd->add_option("--spec", args.spec_path, "metric spec file")->required();
    cmd->add_option("--flavor", args.flavor, "conformal|projective|poincare");
    cmd->add_option("--point", args.point_csv, "evaluation point, comma-separated decimals");
    cmd->add_option("--samples", args.samples, "sample count for randomized checks");
    cmd->add_option("--seed", args.seed, "64-bit seed for randomized checks");
    cmd->add_option("--tol", args.tol, "override the default tolerance of every check");
    cmd->add_option("--json", args.json_path, "write the JSON report to this path");
  };

  CLI::App* tensors = app.add_subcommand("tensors", "metric tensors at a point");
  add_common(tensors, true);
  CLI::App* connection = app.add_subcommand("connection", "normal Cartan connection at a point");
  add_common(connection, true);
  CLI::App* dress_cmd = app.add_subcommand("dress", "dressing pipeline at a point");
  add_common(dress_cmd, true);
  CLI::App* curvature_cmd = app.add_subcommand("curvature", "curvature and normality norms");
  add_common(curvature_cmd, true);
  CLI::App* tractor_cmd = app.add_subcommand("tractor", "tractor derivative and dilation tables");
  add_common(tractor_cmd, true);
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite on a metric");
  add_common(verify, true);
  CLI::App* groups = app.add_subcommand("groups", "group and jet property suites (no metric)");
  add_common(groups, false);
  groups->add_option("--n", group_n, "dimension for the group suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tensors->parsed()) return cmd_tensors(args);
    if (connection->parsed()) return cmd_connection(args);
    if (dress_cmd->parsed()) return cmd_dress(args);
    if (curvature_cmd->parsed()) return cmd_curvature(args);
    if (tractor_cmd->parsed()) return cmd_tractor(args);
    if (verify->parsed()) return cmd_verify(args);
    if (groups->parsed()) return cmd_groups(args, group_n);
  } catch (const cartan::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const cartan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
