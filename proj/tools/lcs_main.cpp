// Command-line front end: scenario analysis, trajectory simulation, the
// verification suites, and the built-in catalog listing.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcs/catalog.hpp"
#include "lcs/errors.hpp"
#include "lcs/json_io.hpp"
#include "lcs/simulator.hpp"
#include "lcs/verify.hpp"

namespace {

using lcs::Json;

struct ScenarioSource {
  lcs::ScenarioFixture fixture;
  std::optional<std::uint64_t> file_seed;
};

/// Catalog names take priority; anything else is treated as a file path.
ScenarioSource resolve_scenario(const std::string& ref) {
  ScenarioSource out{lcs::ScenarioFixture{}, std::nullopt};
  for (const std::string& name : lcs::catalog_scenario_names())
    if (name == ref) {
      out.fixture = lcs::catalog_scenario(ref);
      return out;
    }
  Json j;
  try {
    j = Json::parse(lcs::read_text_file(ref));
  } catch (const nlohmann::json::parse_error& e) {
    throw lcs::ValidationError(ref + ": " + e.what());
  }
  out.fixture = lcs::scenario_from_json(j);
  if (j.contains("seed")) out.file_seed = j.at("seed").get<std::uint64_t>();
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
  } else {
    lcs::write_text_file(out_path, text);
  }
}

lcs::ControlSignal control_from_file(const std::string& path, const lcs::OmegaBox& omega) {
  Json j;
  try {
    j = Json::parse(lcs::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw lcs::ValidationError(path + ": " + e.what());
  }
  std::vector<double> breakpoints = j.at("breakpoints").get<std::vector<double>>();
  std::vector<lcs::Vector> values;
  for (const Json& row : j.at("values")) values.push_back(lcs::vector_from_json(row));
  for (const lcs::Vector& v : values)
    if (!omega.contains(v)) throw lcs::ValidationError(path + ": control value outside omega");
  return lcs::ControlSignal::piecewise(std::move(breakpoints), std::move(values));
}

lcs::ControlSignal make_control(const std::string& choice, const lcs::LCSSpec& spec,
                                std::uint64_t seed, double horizon) {
  if (choice == "zero") return lcs::ControlSignal::zero(spec.omega.dim());
  if (choice.rfind("random:", 0) == 0) {
    int pieces = 0;
    try {
      pieces = std::stoi(choice.substr(7));
    } catch (const std::exception&) {
      throw lcs::ValidationError("--control random:<pieces> needs an integer piece count");
    }
    if (pieces < 1) throw lcs::ValidationError("--control random:<pieces> needs pieces >= 1");
    lcs::Rng rng(seed);
    return lcs::sample_control(rng, spec.omega, horizon, pieces);
  }
  return control_from_file(choice, spec.omega);
}

lcs::GroupElement make_start(const std::string& choice, const lcs::LCSSpec& spec) {
  if (choice == "identity") return spec.realization->identity();
  lcs::Vector y(spec.algebra().dim());
  std::size_t pos = 0;
  for (lcs::Index i = 0; i < y.size(); ++i) {
    std::size_t used = 0;
    try {
      y(i) = std::stod(choice.substr(pos), &used);
    } catch (const std::exception&) {
      throw lcs::ValidationError("--x0 must be 'identity' or comma-separated algebra coordinates");
    }
    pos += used;
    if (i + 1 < y.size()) {
      if (pos >= choice.size() || choice[pos] != ',')
        throw lcs::ValidationError("--x0 needs " + std::to_string(y.size()) + " coordinates");
      ++pos;
    }
  }
  if (pos != choice.size())
    throw lcs::ValidationError("--x0 needs exactly " + std::to_string(y.size()) + " coordinates");
  return spec.realization->exp(y);
}

int print_suite(const std::vector<lcs::CriterionResult>& results, std::uint64_t seed,
                const std::string& out_path) {
  int passed = 0;
  for (const lcs::CriterionResult& r : results) {
    std::printf("[%s] %2d %-28s %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    if (r.passed) ++passed;
  }
  std::printf("%d/%zu passed\n", passed, results.size());
  if (!out_path.empty())
    lcs::write_text_file(out_path, lcs::criteria_report(results, seed).dump(2) + "\n");
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}

int cmd_analyze(const std::string& scenario, std::optional<std::uint64_t> seed_arg,
                const std::string& out_path) {
  if (scenario.empty()) throw lcs::ValidationError("analyze requires --scenario");
  ScenarioSource src = resolve_scenario(scenario);
  std::uint64_t seed = seed_arg ? *seed_arg : src.file_seed.value_or(42);
  emit(lcs::analyze_report(src.fixture, seed).dump(2) + "\n", out_path);
  return 0;
}

int cmd_simulate(const std::string& scenario, std::optional<std::uint64_t> seed_arg,
                 const std::string& control_choice, const std::string& x0_choice, double horizon,
                 double dt_out, const std::string& out_path) {
  if (scenario.empty()) throw lcs::ValidationError("simulate requires --scenario");
  if (!(horizon > 0.0)) throw lcs::ValidationError("--horizon must be positive");
  if (!(dt_out > 0.0)) throw lcs::ValidationError("--dt-out must be positive");
  ScenarioSource src = resolve_scenario(scenario);
  const lcs::LCSSpec& spec = src.fixture.lcs;
  std::uint64_t seed = seed_arg ? *seed_arg : src.file_seed.value_or(42);
  lcs::ControlSignal u = make_control(control_choice, spec, seed, horizon);
  lcs::GroupElement g0 = make_start(x0_choice, spec);
  lcs::IntegrateOptions options;
  options.dt_out = dt_out;
  lcs::Trajectory traj = lcs::integrate(spec, g0, u, horizon, options);
  emit(lcs::trajectory_csv(spec, traj), out_path);
  return 0;
}

int cmd_verify(const std::string& scenario, bool all_catalog, std::optional<std::uint64_t> seed_arg,
               const std::string& out_path) {
  std::uint64_t seed = seed_arg.value_or(42);
  if (all_catalog) return print_suite(lcs::run_catalog_criteria(seed), seed, out_path);
  if (!scenario.empty()) return print_suite(lcs::run_scenario_suites(scenario, seed), seed, out_path);
  std::fprintf(stderr, "error: verify needs --all-catalog or --scenario\n");
  return 2;
}

int cmd_catalog(const std::string& dump_dir) {
  for (const std::string& name : lcs::catalog_group_names()) {
    auto group = lcs::catalog_group(name);
    std::string line = name + ": dim " + std::to_string(group->algebra().dim());
    const lcs::GroupMetadata& meta = group->metadata();
    if (meta.is_nilpotent) line += ", nilpotent";
    else if (meta.is_solvable) line += ", solvable";
    if (meta.g0_compact_declared) line += ", G0 compact (declared)";
    std::printf("%s\n", line.c_str());
  }
  std::printf("derivation fixtures:\n");
  for (const lcs::DerivationFixture& fixture : lcs::catalog_derivation_fixtures())
    std::printf("  %s: %s, drift %s\n", fixture.name.c_str(), fixture.algebra.name().c_str(),
                lcs::to_string(lcs::classify_operator(fixture.derivation)));
  if (!dump_dir.empty())
    for (const std::string& name : lcs::catalog_scenario_names()) {
      lcs::ScenarioFixture fixture = lcs::catalog_scenario(name);
      Json j = lcs::scenario_to_json(fixture);
      j["seed"] = 42;
      lcs::write_text_file(dump_dir + "/" + name + ".json", j.dump(2) + "\n");
    }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear control systems on Lie groups"};
  app.require_subcommand(1);

  std::string scenario;
  std::uint64_t seed_value = 0;
  std::string out_path;
  double horizon = 10.0;
  double dt_out = 0.05;
  app.add_option("--scenario", scenario, "catalog scenario name or scenario JSON path");
  auto* seed_opt = app.add_option("--seed", seed_value, "random seed (default: file seed, then 42)");
  app.add_option("--out", out_path, "write the result to this path instead of stdout");
  app.add_option("--horizon", horizon, "simulation horizon")->capture_default_str();
  app.add_option("--dt-out", dt_out, "output sampling step")->capture_default_str();

  CLI::App* analyze = app.add_subcommand("analyze", "full algebraic analysis report (JSON)");
  analyze->fallthrough();

  std::string control_choice = "zero";
  std::string x0_choice = "identity";
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory (CSV)");
  simulate->fallthrough();
  simulate->add_option("--control", control_choice, "zero | random:<pieces> | control JSON path")
      ->capture_default_str();
  simulate->add_option("--x0", x0_choice, "identity | comma-separated algebra coordinates")
      ->capture_default_str();

  bool all_catalog = false;
  CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
  verify->fallthrough();
  verify->add_flag("--all-catalog", all_catalog, "run the graded criteria over the whole catalog");

  std::string dump_dir;
  CLI::App* catalog = app.add_subcommand("catalog", "list built-in groups and fixtures");
  catalog->fallthrough();
  catalog->add_option("--dump-scenarios", dump_dir, "also write scenario JSON files to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::optional<std::uint64_t> seed_arg;
  if (seed_opt->count() > 0) seed_arg = seed_value;

  try {
    if (analyze->parsed()) return cmd_analyze(scenario, seed_arg, out_path);
    if (simulate->parsed())
      return cmd_simulate(scenario, seed_arg, control_choice, x0_choice, horizon, dt_out, out_path);
    if (verify->parsed()) return cmd_verify(scenario, all_catalog, seed_arg, out_path);
    if (catalog->parsed()) return cmd_catalog(dump_dir);
  } catch (const lcs::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const lcs::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  }
  return 2;
}
