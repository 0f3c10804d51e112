// stratwave: kernels, simulations, decay fits, experiments and the acceptance suite.
//
// Exit codes: 0 success or pass, 1 error, 2 assertion failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "stratwave/config.hpp"
#include "stratwave/error.hpp"
#include "stratwave/field_io.hpp"
#include "stratwave/kernel.hpp"
#include "stratwave/manifest.hpp"
#include "stratwave/runner.hpp"

#ifndef STRATWAVE_VERSION
#define STRATWAVE_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace stratwave;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

struct Globals {
  std::string out_root;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool quiet = false;
};

Globals g_opts;

void note(const std::string& msg) {
  if (!g_opts.quiet) std::fprintf(stderr, "%s\n", msg.c_str());
}

fs::path output_root() {
  if (!g_opts.out_root.empty()) return g_opts.out_root;
  if (const char* env = std::getenv("STRATWAVE_OUT"); env && *env) return env;
  return ".";
}

// Relative output paths land under the output root.
fs::path resolve_output(const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return path;
  return output_root() / path;
}

unsigned worker_count() {
  if (g_opts.threads > 0) return g_opts.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

json provenance(double wall_seconds) {
  return {{"tool", "stratwave"},
          {"version", STRATWAVE_VERSION},
          {"seed", g_opts.seed},
          {"wall_seconds", wall_seconds}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Model load_model(const std::string& config, const std::string& preset_spec, double eta) {
  if (!config.empty()) return parse_model(load_json_file(config));
  return preset(preset_spec, eta);
}

// --- kernel -----------------------------------------------------------------

struct KernelArgs {
  std::string config;
  std::string preset = "ost";
  double eta = 1.0;
  double t = 1.0;
  std::string grid = "N=65536,L=400";
  std::string window = "20,200";
  std::string out = "kernel.csv";
  bool derivative = false;
};

int cmd_kernel(const KernelArgs& a) {
  const Model model = load_model(a.config, a.preset, a.eta);
  const Grid grid = parse_grid_spec(a.grid);
  const Window window = parse_window_spec(a.window);
  const KernelField kf = kernel_field(a.t, grid, model);
  const Field f = a.derivative ? kernel_derivative_field(a.t, grid, model) : kf.field;

  json report = {{"model", model_to_json(model)}, {"grid", grid_to_json(grid)}, {"t", a.t}};
  report["mass"] = mean(kf.field);
  report["A_predicted"] = asymptotic_coefficient(a.t, model.params);
  report["exponent_predicted"] = model.params.n + (a.derivative ? 2 : 1);
  const BoundReport b = verify_pointwise_bound(kf, window);
  const DecayFitPair tail = a.derivative ? tail_exponent(f, window) : b.tail;
  report["tail_slope_left"] = tail.left.slope;
  report["tail_slope_right"] = tail.right.slope;
  report["tail_exponent"] = tail.mean_exponent();
  report["tail_r_squared"] = {tail.left.r_squared, tail.right.r_squared};
  report["fitted_C"] = b.fitted_C;
  report["refined_C"] = b.refined_C;
  report["image_contamination"] = b.image_contamination;
  report["derivative"] = a.derivative;

  const fs::path csv = resolve_output(a.out);
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  write_file_atomic(csv, field_to_csv(f));
  fs::path sidecar = csv;
  sidecar.replace_extension(".json");
  write_file_atomic(sidecar, report.dump(2) + "\n");
  note("wrote " + csv.string() + " and " + sidecar.string());
  return kExitPass;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string preset = "ost";
  double eta = 1.0;
  std::string datum;
  std::string grid = "N=65536,L=400";
  double T = 1.0;
  double dt = 1e-3;
  std::string mode = "etd";
  std::string snapshots;
  int max_halvings = 0;
  bool linear = false;
  std::string out = "run";
};

std::string snapshot_name(std::size_t i, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu_t%.6f.csv", i, t);
  return buf;
}

int cmd_simulate(const SimulateArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Model model = load_model(a.config, a.preset, a.eta);
  const Grid grid = parse_grid_spec(a.grid);
  const InitialDatum datum = a.datum.empty() ? InitialDatum::gaussian(1.0) : parse_datum(load_json_file(a.datum));
  SolverConfig cfg;
  cfg.T = a.T;
  cfg.dt = a.dt;
  cfg.mode = parse_solver_mode(a.mode);
  cfg.max_halvings = a.max_halvings;
  cfg.nonlinear = !a.linear;
  if (!a.snapshots.empty()) cfg.snapshot_times = parse_number_list(a.snapshots);
  validate(cfg);

  const Field u0 = make_datum(datum, grid);
  RunDirectory dir(resolve_output(a.out));
  json run = {{"model", model_to_json(model)},
              {"grid", grid_to_json(grid)},
              {"datum", datum_to_json(datum)},
              {"solver", solver_to_json(cfg)}};

  if (cfg.mode == SolverMode::etd) {
    const Trajectory tr = solve(model, u0, cfg);
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
      dir.add_file(snapshot_name(i, tr.times[i]), field_to_csv(tr.snapshots[i]));
    }
    std::string energy = "t,l2,dissipation\n";
    char line[128];
    for (std::size_t i = 0; i < tr.step_times.size(); ++i) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", tr.step_times[i], tr.energy_series[i],
                    tr.dissipation_series[i]);
      energy += line;
    }
    dir.add_file("energy.csv", energy);
    run["snapshot_times"] = tr.times;
    run["halvings"] = tr.halvings;
  } else {
    const auto [u, rep] = picard_solve(model, u0, cfg);
    dir.add_file(snapshot_name(0, 0.0), field_to_csv(u0));
    dir.add_file(snapshot_name(1, cfg.T), field_to_csv(u));
    char line[160];
    std::string energy = "t,l2,dissipation\n";
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", 0.0, stratwave::energy(u0), dissipation_rate(to_spectral(u0), model));
    energy += line;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", cfg.T, stratwave::energy(u),
                  dissipation_rate(to_spectral(u), model));
    energy += line;
    dir.add_file("energy.csv", energy);
    run["snapshot_times"] = {0.0, cfg.T};
    run["picard"] = {{"iterations", rep.iterations},
                     {"differences", rep.differences},
                     {"contraction_factors", rep.contraction_factors},
                     {"converged", rep.converged}};
  }
  // outermost sampled point is L/2; contamination of an x^-(n+1) tail there
  run["wrap_contamination"] = image_contamination(0.5 * grid.half_length(), grid.half_length(), model.params.n + 1);
  json files = json::array();
  for (const auto& [name, hash] : dir.files()) files.push_back({{"name", name}, {"sha256", hash}});
  run["files"] = files;
  run["provenance"] = provenance(seconds_since(t0));
  dir.commit("run.json", run.dump(2) + "\n");
  note("wrote " + dir.target().string());
  return kExitPass;
}

// --- decay-fit --------------------------------------------------------------

int cmd_decay_fit(const std::string& in, const std::string& window, const std::string& out) {
  const Field f = read_field_csv(in);
  const DecayFitPair p = tail_exponent(f, parse_window_spec(window));
  auto side = [](const DecayFit& d) {
    return json{{"slope", d.slope},           {"exponent", d.exponent},   {"intercept", d.intercept},
                {"stderr", d.stderr_slope},   {"r_squared", d.r_squared}, {"points", d.points},
                {"valid", d.valid},           {"wrap_ratio", d.wrap_ratio}};
  };
  const json j = {{"window", {p.left.window.a, p.left.window.b}},
                  {"left", side(p.left)},
                  {"right", side(p.right)},
                  {"mean_exponent", p.mean_exponent()},
                  {"valid", p.valid()}};
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file_atomic(resolve_output(out), j.dump(2) + "\n");
  }
  return kExitPass;
}

// --- experiment / run -------------------------------------------------------

json with_kind(json j, const std::string& kind) {
  if (!j.is_object()) return j;
  if (!j.contains("experiment")) {
    j["experiment"] = kind;
  } else if (j["experiment"] != kind) {
    throw Error(ErrorCode::ConfigInvalid,
                "/experiment: config names '" + j["experiment"].dump() + "' but '" + kind + "' was requested");
  }
  return j;
}

int cmd_experiment(const std::string& kind, const std::string& config, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = parse_experiment(with_kind(load_json_file(config), kind));
  ExperimentOutcome o = run_experiment(cfg);
  o.report["config"] = cfg.raw;
  o.report["provenance"] = provenance(seconds_since(t0));
  const fs::path path = resolve_output(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, o.report.dump(2) + "\n");
  note(std::string(o.passed ? "PASS " : "FAIL ") + kind + " -> " + path.string());
  return o.passed ? kExitPass : kExitFail;
}

int cmd_run(const std::string& config, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = parse_experiment(load_json_file(config));
  RunDirectory dir(resolve_output(out));
  ExperimentOutcome o = run_experiment(cfg);
  dir.add_file("report.json", o.report.dump(2) + "\n");
  json files = json::array();
  for (const auto& [name, hash] : dir.files()) files.push_back({{"name", name}, {"sha256", hash}});
  const Grid& g = cfg.setup.grid;
  const json manifest = {
      {"config", cfg.raw},
      {"experiment", to_string(cfg.kind)},
      {"passed", o.passed},
      {"files", files},
      {"wrap_contamination", image_contamination(cfg.setup.window.b, g.half_length(), cfg.model.params.n + 1)},
      {"provenance", provenance(seconds_since(t0))}};
  dir.commit("manifest.json", manifest.dump(2) + "\n");
  note(std::string(o.passed ? "PASS " : "FAIL ") + to_string(cfg.kind) + " -> " + dir.target().string());
  return o.passed ? kExitPass : kExitFail;
}

// --- acceptance -------------------------------------------------------------

int cmd_acceptance(const std::string& suite, const std::vector<std::string>& criteria, const std::string& out) {
  std::vector<std::string> ids = criteria;
  if (!suite.empty()) {
    const auto more = read_suite(suite);
    ids.insert(ids.end(), more.begin(), more.end());
  }
  if (ids.empty()) ids = criterion_ids();
  for (const auto& id : ids) {
    if (!is_known_criterion(id)) std::fprintf(stderr, "warning: unknown criterion '%s' skipped\n", id.c_str());
  }
  const AcceptanceSummary s = run_acceptance(ids, worker_count(), [](const CriterionResult& r) {
    if (!g_opts.quiet) std::fprintf(stderr, "  done %s (%s)\n", r.id.c_str(), r.status.c_str());
  });
  std::cout << format_table(s);
  const fs::path path = resolve_output(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, summary_to_json(s).dump(2) + "\n");
  bool errors = false, failures = false;
  for (const auto& r : s.results) {
    errors = errors || r.status == "error";
    failures = failures || r.status == "fail";
  }
  if (errors) return kExitError;
  return failures ? kExitFail : kExitPass;
}

// --- presets ----------------------------------------------------------------

int cmd_presets() {
  for (const char* name : {"ost", "gost:2", "gost:3", "bo_perturbed", "chen_lee", "dgbo_perturbed:0.5"}) {
    const Model m = preset(name);
    std::printf("%-20s %s\n", name, model_to_json(m).dump().c_str());
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratwave: dissipative dispersive wave kernels, solvers and decay experiments"};
  app.set_version_flag("--version", STRATWAVE_VERSION);
  app.require_subcommand(1);
  app.add_option("--out", g_opts.out_root, "Output root for relative paths (default $STRATWAVE_OUT or .)");
  app.add_option("--threads", g_opts.threads, "Worker threads (default: hardware concurrency)");
  app.add_option("--seed", g_opts.seed, "Seed recorded in reports");
  app.add_flag("--quiet", g_opts.quiet, "Suppress progress messages");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Synthesize K(t, x) and report mass and tail fit");
  kernel->add_option("--config", ka.config, "Model JSON");
  kernel->add_option("--preset", ka.preset, "Preset when no --config");
  kernel->add_option("--eta", ka.eta, "Dissipation strength for --preset");
  kernel->add_option("--t", ka.t, "Time")->check(CLI::PositiveNumber);
  kernel->add_option("--grid", ka.grid, "N=..,L=..");
  kernel->add_option("--window", ka.window, "Tail fitting window a,b");
  kernel->add_option("--out", ka.out, "CSV path; the report goes next to it as .json");
  kernel->add_flag("--derivative", ka.derivative, "Emit d/dx K instead");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Integrate from a datum into a run directory");
  simulate->add_option("--config", sa.config, "Model JSON");
  simulate->add_option("--preset", sa.preset, "Preset when no --config");
  simulate->add_option("--eta", sa.eta, "Dissipation strength for --preset");
  simulate->add_option("--datum", sa.datum, "Datum JSON (default unit Gaussian)");
  simulate->add_option("--grid", sa.grid, "N=..,L=..");
  simulate->add_option("--T", sa.T, "Final time");
  simulate->add_option("--dt", sa.dt, "Step");
  simulate->add_option("--mode", sa.mode, "etd or picard");
  simulate->add_option("--snapshots", sa.snapshots, "Comma separated times");
  simulate->add_option("--max-halvings", sa.max_halvings, "Step halvings allowed on non-finite values");
  simulate->add_flag("--linear", sa.linear, "Drop the nonlinear term");
  simulate->add_option("--out", sa.out, "Run directory");

  std::string fit_in, fit_window = "20,200", fit_out;
  auto* fit = app.add_subcommand("decay-fit", "Fit tail exponents of a field CSV");
  fit->add_option("--in", fit_in, "Field CSV")->required();
  fit->add_option("--window", fit_window, "a,b");
  fit->add_option("--out", fit_out, "JSON path (default stdout)");

  std::string exp_config, exp_out = "report.json";
  auto* experiment = app.add_subcommand("experiment", "Run one experiment and write its report");
  experiment->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> kinds;
  for (const char* k : {"dichotomy", "weighted", "growth", "lowerbound", "energy"}) {
    auto* sub = experiment->add_subcommand(k, std::string(k) + " experiment");
    sub->add_option("--config", exp_config, "Experiment JSON")->required();
    sub->add_option("--out", exp_out, "Report path");
    kinds.emplace_back(k, sub);
  }

  std::string run_config, run_out = "run";
  auto* run = app.add_subcommand("run", "Run the experiment named in a config into a run directory");
  run->add_option("config", run_config, "Experiment JSON")->required();
  run->add_option("--out", run_out, "Run directory");

  std::string suite, acc_out = "summary.json";
  std::vector<std::string> criteria;
  auto* acceptance = app.add_subcommand("acceptance", "Run acceptance criteria");
  acceptance->add_option("--suite", suite, "Suite file (JSON or one id per line)");
  acceptance->add_option("--criteria", criteria, "Criterion ids")->delimiter(',');
  acceptance->add_option("--out", acc_out, "summary.json path");

  auto* presets = app.add_subcommand("presets", "List the named models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitError;
  }

  try {
    if (*kernel) return cmd_kernel(ka);
    if (*simulate) return cmd_simulate(sa);
    if (*fit) return cmd_decay_fit(fit_in, fit_window, fit_out);
    if (*experiment) {
      for (const auto& [k, sub] : kinds) {
        if (*sub) return cmd_experiment(k, exp_config, exp_out);
      }
    }
    if (*run) return cmd_run(run_config, run_out);
    if (*acceptance) return cmd_acceptance(suite, criteria, acc_out);
    if (*presets) return cmd_presets();
  } catch (const NonFiniteError& e) {
    std::fprintf(stderr, "error: %s (t = %g)\n", e.what(), e.time());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
