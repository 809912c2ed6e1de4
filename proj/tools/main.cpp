#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cli_io.hpp"
#include "simplexcert/oracle.hpp"
#include "simplexcert/perturb.hpp"
#include "simplexcert/simplex.hpp"

namespace {

using namespace simplexcert;
using cli::Json;

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kDefaultSeed = 20240501;

struct Options {
  std::string file;
  std::string new_vertices;
  std::string point;
  std::string lambda;
  int vertex = 0;
  int n = 1;
  double epsilon = 0.0;
  std::optional<double> tolerance;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 100000;
  std::size_t max_points = 10'000'000;
  bool validate = false;
  bool no_points = false;
};

struct Outcome {
  Json report;
  int exit_code = 0;
};

Json base_report(const std::string& command, const Json& arguments) {
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = command;
  report["arguments"] = arguments;
  return report;
}

double resolve_tolerance(const Options& opt, const cli::VertexFile& file) {
  if (opt.tolerance) return *opt.tolerance;  // flag wins over the file
  if (file.tolerance) return *file.tolerance;
  return kPositivityTolerance;
}

Simplex load_simplex(const cli::VertexFile& file, double tol) {
  return new_simplex(file.vertices, tol);
}

const char* kMarginProvenance =
    "smallest-Gram-eigenvalue lower bound for the vertex-difference family, "
    "scaled to the unit L1 coefficient sphere";
const char* kLipProvenance =
    "maximum vertex-difference length; exact operator norm from L1 "
    "coefficients to the ambient norm";

Outcome run_certify_independence(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);

  Json report = base_report("certify-independence", args);
  report["status"] = "certified";
  report["values"] = {{"margin_c", s.constants().margin_c},
                      {"lip_forward", s.constants().lip_forward},
                      {"lip_inverse_bound", s.constants().lip_inverse_bound},
                      {"n", s.n()},
                      {"dimension", s.ambient_dim()},
                      {"tolerance", tol}};
  report["provenance"] = {{"margin_c", kMarginProvenance},
                          {"lip_forward", kLipProvenance}};
  return {report, 0};
}

Outcome run_barycentric(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);

  const BarycentricSolve solve = barycentric(s.vertices(), x, s.constants());
  Json report = base_report("barycentric", args);
  report["status"] = "certified";
  report["values"] = {{"aff_residual", solve.aff_residual},
                      {"margin_c", s.constants().margin_c}};
  report["vectors"] = {
      {"lambda", cli::vector_to_json(solve.lambda.coeffs())},
      {"projection",
       cli::vector_to_json(evaluate(s.vertices(), solve.lambda))}};
  report["provenance"] = {
      {"lambda", "least-squares affine coordinates of the hull projection"},
      {"aff_residual", "distance from the query to the affine hull"}};
  return {report, 0};
}

Outcome run_classify(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);

  const MembershipVerdict verdict = classify(s, x);
  Json report = base_report("classify", args);
  const bool decided = verdict.verdict != MembershipClass::Indeterminate;
  report["status"] = decided ? "certified" : "cannot-certify";
  switch (verdict.verdict) {
    case MembershipClass::CertifiedInside:
      report["verdict"] = "certified-inside";
      break;
    case MembershipClass::CertifiedOutside:
      report["verdict"] = "certified-outside";
      break;
    case MembershipClass::Indeterminate:
      report["verdict"] = "indeterminate";
      report["reason"] =
          "some coefficient lies within the tolerance band around zero";
      break;
  }
  report["values"] = {{"witness_margin", verdict.witness_margin},
                      {"aff_residual", verdict.aff_residual},
                      {"min_coefficient", verdict.lambda.min_coeff()},
                      {"tolerance", tol}};
  report["vectors"] = {{"lambda",
                        cli::vector_to_json(verdict.lambda.coeffs())}};
  report["provenance"] = {
      {"witness_margin",
       "minimal coefficient when inside; most negative coefficient or hull "
       "residual when outside"}};
  return {report, decided ? 0 : 2};
}

Outcome run_interior(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);

  const InteriorCertificate cert = relint_certificate(s, x);
  Json report = base_report("interior", args);
  report["status"] = "certified";
  report["values"] = {{"radius", cert.radius},
                      {"min_coeff", cert.min_coeff},
                      {"margin_c", s.constants().margin_c}};
  report["vectors"] = {{"lambda", cli::vector_to_json(cert.lambda.coeffs())}};
  report["provenance"] = {
      {"radius",
       "half the minimal coefficient times the independence margin; every "
       "hull point within this radius stays in the simplex"},
      {"margin_c", kMarginProvenance}};
  return {report, 0};
}

BarycentricVector interior_coordinates(const Simplex& s,
                                       const Eigen::VectorXd& x) {
  const MembershipVerdict verdict = classify(s, x);
  if (verdict.verdict == MembershipClass::CertifiedOutside) {
    throw CannotCertifyError("point is certified outside the simplex");
  }
  return verdict.lambda;
}

Outcome run_face_distance(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);
  const BarycentricVector lambda = interior_coordinates(s, x);

  const double bound = face_distance_lb(s, lambda, opt.vertex);
  Json report = base_report("face-distance", args);
  report["status"] = "certified";
  report["values"] = {{"bound", bound},
                      {"vertex_coefficient", lambda[opt.vertex]}};
  report["vectors"] = {{"lambda", cli::vector_to_json(lambda.coeffs())}};
  report["provenance"] = {
      {"bound",
       "vertex coefficient times the vertex height over the opposite face; "
       "zero when the coefficient is inside the tolerance band"}};
  return {report, 0};
}

Outcome run_project_face(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);
  const BarycentricVector lambda = interior_coordinates(s, x);

  const FaceProjection proj = face_projection(s, lambda, opt.vertex);
  Json report = base_report("project-face", args);
  report["status"] = "certified";
  report["values"] = {{"line_parameter", proj.line_parameter},
                      {"vertex_coefficient", lambda[opt.vertex]}};
  report["vectors"] = {
      {"point", cli::vector_to_json(proj.point)},
      {"face_weights", cli::vector_to_json(proj.face_weights.coeffs())}};
  report["provenance"] = {
      {"point",
       "intersection of the vertex-through-point line with the opposite "
       "face"},
      {"line_parameter", "1 / (1 - vertex coefficient)"}};
  return {report, 0};
}

Outcome run_net(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);

  NetOptions net_options;
  net_options.max_points = opt.max_points;
  const NetPointSet net = epsilon_net(s, opt.epsilon, net_options);

  Json report = base_report("net", args);
  report["status"] = "certified";
  report["values"] = {{"size", static_cast<std::int64_t>(net.points.cols())},
                      {"epsilon", net.epsilon}};
  int exit_code = 0;
  if (opt.validate) {
    oracle::OracleConfig cfg;
    cfg.seed = opt.seed;
    cfg.samples = opt.samples;
    const auto coverage = oracle::coverage_check(net, s, cfg);
    report["values"]["worst_gap"] = coverage.worst_gap;
    report["values"]["samples"] =
        static_cast<std::int64_t>(cfg.samples);
    report["values"]["seed"] = static_cast<std::int64_t>(cfg.seed);
    report["validated"] = coverage.ok;
    if (!coverage.ok) {
      report["status"] = "cannot-certify";
      report["reason"] = "sampled coverage check failed";
      exit_code = 2;
    }
  }
  if (!opt.no_points) {
    report["vectors"] = {
        {"points", cli::columns_to_json(net.points)},
        {"coordinates", cli::columns_to_json(net.coordinates)}};
  }
  report["provenance"] = {
      {"size",
       "cone-construction grid on the coefficient simplex, mapped through "
       "the coordinate evaluation"}};
  return {report, exit_code};
}

Outcome run_perturbation_delta(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const Eigen::VectorXd x = cli::resolve_point(file, opt.point);

  const PerturbationCertificate cert = vertex_perturbation_delta(s, x);
  Json report = base_report("perturbation-delta", args);
  report["status"] = "certified";
  Json values;
  for (const auto& [name, value] : cert.chain) values[name] = value;
  report["values"] = values;
  report["provenance"] = {
      {"margin_c", kMarginProvenance},
      {"min_coeff_m", "smallest coordinate of the interior point"},
      {"kappa", "max-entry to induced-L1 conversion factor (matrix size)"},
      {"delta_affine",
       "half the linear perturbation radius of the vertex differences"},
      {"delta_inversion",
       "Neumann-series radius keeping the coordinate system invertible "
       "with determinant above one half"},
      {"delta_modulus",
       "coordinate modulus forcing per-coordinate deviations below the "
       "inversion radius"},
      {"delta", "minimum of every stage; the certified tolerance"}};
  return {report, 0};
}

Outcome run_recoordinate(const Options& opt, const Json& args) {
  const auto file = cli::load_vertex_file(opt.file);
  const double tol = resolve_tolerance(opt, file);
  const Simplex s = load_simplex(file, tol);
  const auto replacement = cli::load_vertex_file(opt.new_vertices);
  if (replacement.dimension != file.dimension ||
      replacement.vertices.cols() != file.vertices.cols()) {
    throw InvalidInputError(
        "new vertices must match the original dimension and count");
  }

  BarycentricVector lambda = [&] {
    if (!opt.lambda.empty()) {
      return BarycentricVector::affine(cli::parse_coordinates(opt.lambda),
                                       tol);
    }
    const Eigen::VectorXd x = cli::resolve_point(file, opt.point);
    return barycentric(s.vertices(), x, s.constants()).lambda;
  }();

  const BarycentricVector gamma =
      recoordinate(s, replacement.vertices, lambda);
  Json report = base_report("recoordinate", args);
  report["status"] = "certified";
  report["values"] = {
      {"deviation_l1", (gamma.coeffs() - lambda.coeffs()).lpNorm<1>()},
      {"min_gamma", gamma.min_coeff()}};
  report["vectors"] = {{"gamma", cli::vector_to_json(gamma.coeffs())},
                       {"lambda", cli::vector_to_json(lambda.coeffs())}};
  report["provenance"] = {
      {"gamma",
       "solution of the transposed coordinate system over the new "
       "vertices, checked to reproduce the point"}};
  return {report, 0};
}

Outcome run_regular_simplex(const Options& opt, const Json& args) {
  const double tol = opt.tolerance.value_or(kPositivityTolerance);
  const Simplex s = regular_simplex(opt.n, tol);
  const auto [centre, centre_lambda] = barycentre(s);

  Json report = base_report("regular-simplex", args);
  report["status"] = "certified";
  report["values"] = {
      {"n", s.n()},
      {"dimension", s.ambient_dim()},
      {"edge_length", (s.vertex(0) - s.vertex(s.n())).norm()},
      {"margin_c", s.constants().margin_c},
      {"lip_forward", s.constants().lip_forward}};
  report["vectors"] = {{"vertices", cli::columns_to_json(s.vertices())},
                       {"barycentre", cli::vector_to_json(centre)}};
  report["provenance"] = {{"margin_c", kMarginProvenance}};
  return {report, 0};
}

int emit_and_exit(const Outcome& outcome) {
  cli::write_report(std::cout, outcome.report);
  return outcome.exit_code;
}

int fail(const std::string& command, const Json& args,
         const std::string& type, const std::string& message,
         const Json& extra = Json::object()) {
  Json report = base_report(command, args);
  report["status"] = "error";
  Json error = {{"type", type}, {"message", message}};
  for (const auto& [key, value] : extra.items()) error[key] = value;
  report["error"] = error;
  cli::write_report(std::cout, report);
  std::cerr << "error: " << message << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified simplex geometry toolkit"};
  app.require_subcommand(1);
  Options opt;

  if (const char* env_seed = std::getenv("SIMPLEX_CERT_SEED")) {
    opt.seed = std::strtoull(env_seed, nullptr, 10);
  }

  const auto add_common = [&](CLI::App* cmd, bool with_point) {
    cmd->add_option("file", opt.file, "vertex file (JSON)")->required();
    cmd->add_option("--tolerance", opt.tolerance,
                    "positivity tolerance override");
    if (with_point) {
      cmd->add_option("--point", opt.point,
                      "query point: a name from the file or a "
                      "comma-separated coordinate list")
          ->required();
    }
  };

  auto* certify = app.add_subcommand("certify-independence",
                                     "certify affine independence");
  add_common(certify, false);

  auto* bary = app.add_subcommand("barycentric",
                                  "affine coordinates and hull residual");
  add_common(bary, true);

  auto* cls = app.add_subcommand("classify", "tri-state membership verdict");
  add_common(cls, true);

  auto* interior = app.add_subcommand("interior",
                                      "relative-interior ball certificate");
  add_common(interior, true);

  auto* fdist = app.add_subcommand("face-distance",
                                   "certified distance floor to a face");
  add_common(fdist, true);
  fdist->add_option("--vertex", opt.vertex, "opposite vertex index (0-based)")
      ->required();

  auto* pface = app.add_subcommand("project-face",
                                   "radial projection onto a face");
  add_common(pface, true);
  pface->add_option("--vertex", opt.vertex, "projection vertex index "
                    "(0-based)")
      ->required();

  auto* net = app.add_subcommand("net", "epsilon-cover of the simplex");
  add_common(net, false);
  net->add_option("--epsilon", opt.epsilon, "covering radius")->required();
  net->add_flag("--validate", opt.validate, "run the sampled coverage check");
  net->add_option("--samples", opt.samples, "validation sample count");
  net->add_option("--seed", opt.seed, "validation seed (flag wins over "
                  "SIMPLEX_CERT_SEED)");
  net->add_option("--max-points", opt.max_points, "net size cap");
  net->add_flag("--no-points", opt.no_points, "omit point arrays");

  auto* pdelta = app.add_subcommand("perturbation-delta",
                                    "vertex perturbation tolerance");
  add_common(pdelta, true);

  auto* reco = app.add_subcommand("recoordinate",
                                  "coordinates over moved vertices");
  add_common(reco, false);
  reco->add_option("--new-vertices", opt.new_vertices,
                   "vertex file with the replacement vertices")
      ->required();
  reco->add_option("--point", opt.point, "query point");
  reco->add_option("--lambda", opt.lambda,
                   "comma-separated coefficients (alternative to --point)");

  auto* regular = app.add_subcommand("regular-simplex",
                                     "the unit-edge regular simplex");
  regular->add_option("--n", opt.n, "simplex dimension")->required();
  regular->add_option("--tolerance", opt.tolerance,
                      "positivity tolerance override");

  std::string command = argc > 1 ? argv[1] : "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::stringstream devnull;
    app.exit(e, devnull, devnull);
    return fail(command, Json::object(), "usage", e.what());
  }

  Json args;
  for (const CLI::App* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (const CLI::Option* option : sub->get_options()) {
      if (option->count() == 0 || option->get_name().empty()) continue;
      const auto& results = option->results();
      if (results.empty()) {
        args[option->get_name()] = true;
      } else if (results.size() == 1) {
        args[option->get_name()] = results.front();
      } else {
        args[option->get_name()] = results;
      }
    }
  }

  try {
    if (command == "certify-independence") {
      return emit_and_exit(run_certify_independence(opt, args));
    }
    if (command == "barycentric") {
      return emit_and_exit(run_barycentric(opt, args));
    }
    if (command == "classify") return emit_and_exit(run_classify(opt, args));
    if (command == "interior") return emit_and_exit(run_interior(opt, args));
    if (command == "face-distance") {
      return emit_and_exit(run_face_distance(opt, args));
    }
    if (command == "project-face") {
      return emit_and_exit(run_project_face(opt, args));
    }
    if (command == "net") return emit_and_exit(run_net(opt, args));
    if (command == "perturbation-delta") {
      return emit_and_exit(run_perturbation_delta(opt, args));
    }
    if (command == "recoordinate") {
      if (opt.point.empty() == opt.lambda.empty()) {
        throw InvalidInputError(
            "recoordinate needs exactly one of --point or --lambda");
      }
      return emit_and_exit(run_recoordinate(opt, args));
    }
    if (command == "regular-simplex") {
      return emit_and_exit(run_regular_simplex(opt, args));
    }
    return fail(command, args, "usage", "unknown subcommand: " + command);
  } catch (const CannotCertifyError& e) {
    Json report = base_report(command, args);
    report["status"] = "cannot-certify";
    report["reason"] = e.what();
    cli::write_report(std::cout, report);
    std::cerr << "cannot certify: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    return fail(command, args, "resource-limit", e.what(),
                {{"required", static_cast<std::int64_t>(e.required)}});
  } catch (const InvalidInputError& e) {
    return fail(command, args, "invalid-input", e.what());
  } catch (const std::exception& e) {
    return fail(command, args, "internal", e.what());
  }
}
