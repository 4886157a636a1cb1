#include "cvxtomo/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "cvxtomo/body.hpp"
#include "cvxtomo/body_json.hpp"
#include "cvxtomo/errors.hpp"
#include "cvxtomo/lemma_lab.hpp"
#include "cvxtomo/random.hpp"
#include "cvxtomo/tomography.hpp"
#include "cvxtomo/weingarten.hpp"

namespace cvxtomo::cli {

using nlohmann::json;

namespace {

const json& require(const json& config, const char* key) {
  if (!config.contains(key)) throw ConfigError(std::string("config: missing \"") + key + "\"");
  return config.at(key);
}

int get_int(const json& config, const char* key, std::optional<int> fallback = std::nullopt) {
  if (!config.contains(key)) {
    if (fallback) return *fallback;
    require(config, key);
  }
  const json& v = config.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config: \"") + key + "\" must be an integer");
  return v.get<int>();
}

double get_double(const json& config, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!config.contains(key)) {
    if (fallback) return *fallback;
    require(config, key);
  }
  const json& v = config.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: \"") + key + "\" must be a number");
  return v.get<double>();
}

ConvexBody get_body(const json& config, const char* key) {
  try {
    return body_from_json(require(config, key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: \"") + key + "\": " + e.what());
  }
}

std::uint64_t get_seed(const json& config, const RunOptions& options) {
  if (options.seed) return *options.seed;
  if (config.contains("seed")) {
    const json& v = config.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError("config: \"seed\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  throw ConfigError("a seed is required: pass --seed or set \"seed\" in the config");
}

double get_tol(const json& config, const RunOptions& options, double fallback) {
  if (options.tolerance) return *options.tolerance;
  return get_double(config, "tolerance", fallback);
}

Quadrature get_quadrature(const json& config, std::uint64_t seed) {
  return {get_int(config, "nodes", 256), seed};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
  return out;
}

ScenarioResult verify_wedge(const json& config, const RunOptions& options) {
  const ConvexBody body = get_body(config, "body");
  const ConvexBody base = get_body(config, "base");
  const std::uint64_t seed = get_seed(config, options);
  const int samples = get_int(config, "samples", 100);
  const double tol = get_tol(config, options, 1e-8);
  const json& grades = require(config, "grades");
  const json& betas = require(config, "betas");
  if (!grades.is_array() || !betas.is_array() || grades.size() != betas.size() || grades.empty())
    throw ConfigError("config: \"grades\" and \"betas\" must be arrays of equal nonzero length");
  if (body.dim() != base.dim()) throw ConfigError("config: body and base differ in dimension");

  ScenarioResult out;
  out.csv_header = {"grade", "sample", "defect"};
  for (std::size_t g = 0; g < grades.size(); ++g) {
    if (!grades[g].is_number_integer() || !betas[g].is_number()) throw ConfigError("config: bad grade or beta");
    const int k = grades[g].get<int>();
    const double beta = betas[g].get<double>();
    if (k < 1 || k > body.dim() - 1) throw ConfigError("config: grade out of range 1..n-1");
    Rng rng(stream_seed(seed, g));
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double d = wedge_identity_defect(body, base, k, beta, Direction(random_direction(body.dim(), rng)));
      worst = std::max(worst, d);
      out.csv_rows.push_back({std::to_string(k), std::to_string(s), fmt(d)});
    }
    out.checks.push_back(make_check("wedge_defect_k" + std::to_string(k), worst, tol));
  }
  return out;
}

ScenarioResult brightness(const json& config, const RunOptions& options) {
  const ConvexBody body = get_body(config, "body");
  const std::uint64_t seed = get_seed(config, options);
  const int k = get_int(config, "k", body.dim() - 1);
  const int frames = get_int(config, "frames", 20);
  if (k < 1 || k > body.dim() - 1) throw ConfigError("config: k out of range 1..n-1");
  const auto values = projection_function(body, k, frames, seed, get_quadrature(config, seed), options.threads);

  ScenarioResult out;
  out.csv_header = {"frame", "volume"};
  double lowest = std::numeric_limits<double>::infinity();
  json list = json::array();
  for (std::size_t s = 0; s < values.size(); ++s) {
    lowest = std::min(lowest, values[s].volume);
    list.push_back(values[s].volume);
    out.csv_rows.push_back({std::to_string(s), fmt(values[s].volume)});
  }
  out.results["volumes"] = list;
  out.checks.push_back(make_check("negative_volume", std::max(0.0, -lowest), 0.0));
  if (config.contains("expected")) {
    const double expected = get_double(config, "expected");
    double err = 0.0;
    for (const auto& v : values) err = std::max(err, std::abs(v.volume - expected));
    out.checks.push_back(make_check("max_abs_error_vs_expected", err, get_tol(config, options, 1e-9)));
  }
  return out;
}

ScenarioResult proportionality(const json& config, const RunOptions& options) {
  const ConvexBody body = get_body(config, "body");
  const ConvexBody base = get_body(config, "base");
  if (body.dim() != base.dim()) throw ConfigError("config: body and base differ in dimension");
  const std::uint64_t seed = get_seed(config, options);
  const int k = get_int(config, "k");
  if (k < 1 || k > body.dim() - 1) throw ConfigError("config: k out of range 1..n-1");
  const double tol = get_tol(config, options, 1e-5);
  const auto report = proportionality_test(body, base, k, get_int(config, "frames", 50), seed,
                                           get_quadrature(config, seed), options.threads);
  ScenarioResult out;
  out.results["alpha"] = report.alpha;
  out.results["ratios"] = report.ratios;
  out.results["excluded"] = report.excluded;
  out.results["warnings"] = report.warnings;
  out.csv_header = {"frame", "ratio"};
  for (std::size_t s = 0; s < report.ratios.size(); ++s)
    out.csv_rows.push_back({std::to_string(s), fmt(report.ratios[s])});
  out.checks.push_back(make_check("max_relative_deviation", report.max_relative_deviation, tol));
  if (config.contains("expected_alpha"))
    out.checks.push_back(
        make_check("alpha_error", std::abs(report.alpha - get_double(config, "expected_alpha")), tol));
  return out;
}

ScenarioResult umbilic(const json& config, const RunOptions& options) {
  const ConvexBody body = get_body(config, "body");
  const ConvexBody base = get_body(config, "base");
  if (body.dim() != base.dim()) throw ConfigError("config: body and base differ in dimension");
  SearchOptions search;
  search.seed = get_seed(config, options);
  search.budget = get_int(config, "budget", 2000);
  search.refine_starts = get_int(config, "refine_starts", 4);
  search.tol = get_tol(config, options, 1e-6);
  search.threads = options.threads;
  const std::string objective = config.value("objective", std::string("umbilic_pair"));
  if (objective == "antipodal") search.objective = SearchObjective::antipodal;
  else if (objective != "umbilic_pair") throw ConfigError("config: objective must be umbilic_pair or antipodal");
  if (search.budget < 1) throw ConfigError("config: budget must be positive");

  const UmbilicResult r = antipodal_search(body, base, search);
  ScenarioResult out;
  out.results["u0"] = to_json(r.u0.vec());
  out.results["r0"] = r.r0;
  out.results["evaluations"] = r.evaluations;
  out.results["boundary_plus"] = to_json(r.boundary_plus);
  out.results["boundary_minus"] = to_json(r.boundary_minus);
  out.results["separation"] = r.separation;
  out.results["converged"] = r.converged;
  out.checks.push_back(make_check("antipodal_defect", r.r_defect, search.tol));
  if (search.objective == SearchObjective::umbilic_pair)
    out.checks.push_back(make_check("umbilic_defect", r.defect, search.tol));
  if (config.contains("expected_r0"))
    out.checks.push_back(make_check("r0_error", std::abs(r.r0 - get_double(config, "expected_r0")), search.tol));
  if (config.contains("expected_axis")) {
    Eigen::VectorXd axis;
    try {
      axis = vector_from_json(config.at("expected_axis")).normalized();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: expected_axis: ") + e.what());
    }
    if (axis.size() != body.dim()) throw ConfigError("config: expected_axis has the wrong dimension");
    const double c = std::min(1.0, std::abs(axis.dot(r.u0.vec())));
    out.checks.push_back(make_check("axis_angle", std::acos(c), get_double(config, "axis_tolerance", 1e-3)));
  }
  return out;
}

ScenarioResult lemma_campaign(const json& config, const RunOptions& options) {
  const std::uint64_t seed = get_seed(config, options);
  ScenarioResult out;
  out.csv_header = {"kind", "seed", "residual", "status"};
  if (config.contains("candidates")) {
    const json& c = config.at("candidates");
    const double a = get_double(c, "a"), b = get_double(c, "b");
    const int k = get_int(c, "k"), n = get_int(c, "n"), m = get_int(c, "m", n - 1);
    const double match_tol = get_double(c, "match_tolerance", 1e-6);
    CandidateSet set;
    try {
      set = enumerate_candidates(a, b, k, m, n);
    } catch (const PreconditionError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: candidates: ") + e.what());
    }
    json members = json::array();
    for (const auto& mbr : set.members) members.push_back({{"y", mbr.y}, {"x", mbr.x}, {"branch", mbr.branch}});
    out.results["candidates"] = members;

    SolverOptions solver;
    solver.seed = stream_seed(seed, 0);
    solver.wanted = get_int(c, "solutions", 200);
    solver.restarts = get_int(c, "restarts", 20 * solver.wanted);
    const auto campaign = solve_hypotheses(a, b, k, m, n, solver);
    double worst = 0.0;
    long unmatched = 0;
    for (std::size_t s = 0; s < campaign.solutions.size(); ++s) {
      double dist = 0.0;
      for (double y : campaign.solutions[s].y) dist = std::max(dist, set.distance(y));
      worst = std::max(worst, dist);
      if (dist > match_tol) ++unmatched;
      out.csv_rows.push_back({"solution", std::to_string(s), fmt(hypothesis_residual(campaign.solutions[s]).max()),
                              dist <= match_tol ? "matched" : "unmatched"});
    }
    out.results["solutions_found"] = campaign.solutions.size();
    out.results["restarts_used"] = campaign.restarts_used;
    out.checks.push_back(make_check("unmatched_solutions", static_cast<double>(unmatched), 0.0));
    out.checks.push_back(make_check(
        "solution_shortfall",
        static_cast<double>(std::max<long>(0, solver.wanted - static_cast<long>(campaign.solutions.size()))), 0.0));
    out.checks.push_back(make_check("max_candidate_distance", worst, match_tol));
  }
  if (config.contains("antipodal")) {
    const json& c = config.at("antipodal");
    const int M = get_int(c, "M"), k = get_int(c, "k");
    const long trials = get_int(c, "trials", 1000000);
    const double tol = get_tol(c, options, 1e-9);
    if (M < 4 || k < 2 || k > M - 2 || trials < 1) throw ConfigError("config: antipodal needs M >= 4, 2 <= k <= M-2");
    const auto campaign = antipodal_campaign(M, k, trials, stream_seed(seed, 1), tol, options.threads, true);
    for (const auto& row : campaign.rows)
      out.csv_rows.push_back({"antipodal", std::to_string(row.seed), fmt(row.residual),
                              row.constant ? "constant" : (row.residual < tol ? "counterexample" : "infeasible")});
    out.results["best_nonconstant_residual"] = campaign.best_nonconstant;
    out.results["best_nonconstant_seed"] = campaign.best_seed;
    out.results["constant_trials"] = campaign.constant_trials;
    out.checks.push_back(make_check("antipodal_counterexamples", static_cast<double>(campaign.counterexamples), 0.0));
    out.checks.push_back(make_check("constant_failures", static_cast<double>(campaign.constant_failures), 0.0));
  }
  if (out.checks.empty()) throw ConfigError("config: lemma-campaign needs \"candidates\" and/or \"antipodal\"");
  return out;
}

ScenarioResult ratio_consistency(const json& config, const RunOptions& options) {
  const ConvexBody body = get_body(config, "body");
  const ConvexBody base = get_body(config, "base");
  if (body.dim() != base.dim()) throw ConfigError("config: body and base differ in dimension");
  const std::uint64_t seed = get_seed(config, options);
  const int i = get_int(config, "i"), j = get_int(config, "j");
  if (!(1 <= i && i < j && j <= body.dim() - 1)) throw ConfigError("config: needs 1 <= i < j <= n-1");
  const double defect = ratio_consistency_check(body, base, i, j, get_int(config, "frames", 20), seed,
                                                get_quadrature(config, seed));
  ScenarioResult out;
  out.checks.push_back(make_check("ratio_defect", defect, get_tol(config, options, 1e-6)));
  return out;
}

ScenarioResult gallery(const json& config, const RunOptions& options) {
  const double tol = get_tol(config, options, 1e-10);
  ScenarioResult out;
  json list = json::array();
  auto entry = [&](const std::string& name, const ConvexBody& body, const std::string& property, double value,
                   double expected) {
    list.push_back({{"family", body.family_name()},
                    {"example", name},
                    {"body", body_to_json(body)},
                    {"property", property},
                    {"value", value},
                    {"closed_form", expected}});
    out.checks.push_back(make_check(name + ": " + property, std::abs(value - expected), tol));
  };
  const Eigen::Vector3d e1(1, 0, 0), e3(0, 0, 1);
  const Direction d1 = Direction::axis(3, 0), d3 = Direction::axis(3, 2);
  const Direction diag(Eigen::Vector3d(1, 2, 3));

  const ConvexBody ball = ConvexBody::ball(3, 1.5);
  entry("ball r=1.5", ball, "width = 2r", width(ball, diag), 3.0);
  const ConvexBody ell = ConvexBody::ellipsoid(Eigen::Vector3d(1, 4, 9).asDiagonal());
  entry("ellipsoid diag(1,4,9)", ell, "h(e3) = 3", ell.support(e3), 3.0);
  const ConvexBody sph = ConvexBody::spheroid(e3, 1.0, 1.4);
  entry("spheroid a=1 b=1.4", sph, "pole radius a^2/b", radii_of_curvature(sph, d3)(0), 1.0 / 1.4);
  entry("spheroid a=1 b=1.4", sph, "equator radius a", radii_of_curvature(sph, d1)(0), 1.0);
  entry("spheroid a=1 b=1.4", sph, "meridian radius b^2/a", radii_of_curvature(sph, d1)(1), 1.96);
  const ConvexBody rev = ConvexBody::revolution(e3, Profile::from_polynomial({1.0, 0.0, 0.1}));
  entry("revolution g=1+0.1t^2", rev, "h(e3) = g(1)", rev.support(e3), 1.1);
  const ConvexBody cw = ConvexBody::harmonic_perturbation(ConvexBody::ball(3, 1.0), e3, {-1.5, 2.5}, 0.1);
  entry("ball + 0.1 P3", cw, "width = 2", width(cw, diag), 2.0);
  const ConvexBody sum = ConvexBody::minkowski_sum({ConvexBody::ball(3, 1.0), ell});
  entry("ball + ellipsoid", sum, "h(e3) = 1 + 3", sum.support(e3), 4.0);
  const ConvexBody hom = ConvexBody::homothet(ConvexBody::ball(3, 1.0), 2.0, e1);
  entry("2 ball + e1", hom, "h(e1) = 2 + 1", hom.support(e1), 3.0);
  const ConvexBody ero = ConvexBody::erosion(ConvexBody::ball(3, 2.0), 0.5);
  entry("ball r=2 eroded by 0.5", ero, "h = 1.5", ero.support(diag.vec()), 1.5);
  const ConvexBody proj = project(ConvexBody::ball(3, 1.0), coordinate_subspace(3, {0, 1}));
  entry("unit ball | span(e1,e2)", proj, "area = pi", volume_from_support(proj), std::numbers::pi);
  out.results["gallery"] = list;
  return out;
}

std::string base_name_csv(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".csv");
  return p.string();
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"verify-wedge",  "brightness", "proportionality", "umbilic-search",
                                              "lemma-campaign", "gallery",    "ratio-consistency"};
  return names;
}

ScenarioResult run_scenario(const std::string& command, const json& config, const RunOptions& options) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (command == "verify-wedge") return verify_wedge(config, options);
  if (command == "brightness") return brightness(config, options);
  if (command == "proportionality") return proportionality(config, options);
  if (command == "umbilic-search") return umbilic(config, options);
  if (command == "lemma-campaign") return lemma_campaign(config, options);
  if (command == "gallery") return gallery(config, options);
  if (command == "ratio-consistency") return ratio_consistency(config, options);
  throw ConfigError("unknown command \"" + command + "\"");
}

json make_report(const std::string& scenario, const std::string& command, const json& inputs,
                 const ScenarioResult& result, std::optional<std::uint64_t> seed, double wall_time_s) {
  json report;
  report["schema"] = kSchemaVersion;
  report["scenario"] = scenario;
  report["command"] = command;
  report["checks"] = checks_json(result.checks);
  report["seed"] = seed ? json(*seed) : json(nullptr);
  report["pass"] = result.passed();
  report["inputs"] = inputs;
  report["results"] = result.results;
  report["wall_time_s"] = wall_time_s;
  report["version"] = kVersion;
  return report;
}

std::string csv_text(const ScenarioResult& result) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(result.csv_header);
  for (const auto& row : result.csv_rows) line(row);
  return os.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Support-function tomography checks"};
  app.name("cvxtomo");
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  unsigned threads = 1;
  bool csv = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "seed for randomized scenarios");
  app.add_option("--out", out_path, "report path (default: stdout)");
  app.add_flag("--csv", csv, "also write per-sample rows as CSV next to the report");
  app.add_option("--tolerance", tolerance, "override the check tolerance");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.add_subcommand("run", "run the command named in the config");
  for (const auto& name : commands()) app.add_subcommand(name, "run " + name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  if (command.empty()) command = "run";

  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      err << "error: cannot open config " << config_path << '\n';
      return 2;
    }
    try {
      config = json::parse(f);
    } catch (const json::exception& e) {
      err << "error: config is not valid JSON: " << e.what() << '\n';
      return 2;
    }
    if (!config.is_object()) {
      err << "error: config must be a JSON object\n";
      return 2;
    }
  }
  if (command == "run") {
    if (!config.contains("command") || !config.at("command").is_string()) {
      err << "error: \"run\" needs a config with a string \"command\"\n";
      return 2;
    }
    command = config.at("command").get<std::string>();
  }
  const std::string scenario =
      config.contains("scenario") && config.at("scenario").is_string() ? config.at("scenario").get<std::string>()
                                                                       : command;

  RunOptions options{seed, tolerance, threads};
  json inputs = config;
  if (seed) inputs["seed_override"] = *seed;
  if (tolerance) inputs["tolerance_override"] = *tolerance;

  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  std::string failure;
  try {
    result = run_scenario(command, config, options);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    failure = e.what();
  } catch (const InconsistencyError& e) {
    failure = e.what();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::optional<std::uint64_t> used_seed = seed;
  if (!used_seed && config.contains("seed") && config.at("seed").is_number_unsigned())
    used_seed = config.at("seed").get<std::uint64_t>();
  json report = make_report(scenario, command, inputs, result, used_seed, wall);
  if (!failure.empty()) {
    report["pass"] = false;
    report["error"] = failure;
  }
  const bool pass = failure.empty() && result.passed();

  try {
    if (command == "gallery")
      for (const auto& g : result.results["gallery"])
        out << std::left << std::setw(22) << g["family"].get<std::string>() << std::setw(28)
            << g["example"].get<std::string>() << g["property"].get<std::string>() << ": "
            << fmt(g["value"].get<double>()) << '\n';
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
      if (csv) out << csv_text(result);
    } else {
      write_atomically(out_path, text);
      if (csv) write_atomically(base_name_csv(out_path), csv_text(result));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!failure.empty()) err << "precondition failed: " << failure << '\n';
  for (const auto& c : result.checks)
    if (!c.pass) err << "check failed: " << c.name << " = " << c.value << " > " << c.tol << '\n';
  return pass ? 0 : 1;
}

}  // namespace cvxtomo::cli
