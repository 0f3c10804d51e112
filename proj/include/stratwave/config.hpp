#pragma once

// JSON configuration for models, grids, data, solver settings and experiments.
// Schema violations raise ConfigInvalid with a JSON-pointer path.
//
// model:  {"symbol": {"kind": "kdv"|"bo"|"dgbo", "a": number?}, "m": int, "n": int,
//          "k": int, "eta": number}   or   {"preset": "gost:2", "eta": number?}
// grid:   {"N": int, "L": number}
// datum:  {"kind": "algebraic", "gamma", "c"?} | {"kind": "zero_mean_algebraic", "gamma", "c"?}
//         | {"kind": "gaussian", "sigma"?, "amplitude"?} | {"kind": "growth", "gamma", "C0"}
// solver: {"dt", "T", "mode"?, "snapshots"?, "picard_tol"?, "picard_max_iter"?,
//          "nonlinear"?, "max_halvings"?}
// experiment: {"experiment": kind, "model", "grid"?, "solver"?, "datum"?,
//              "window"?: [a, b], "params"?: {...}, "seed"?: int}

#include <cstdint>
#include <string>

#include "json.hpp"
#include "stratwave/analysis.hpp"
#include "stratwave/model.hpp"
#include "stratwave/solver.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

using json = nlohmann::json;

Model parse_model(const json& j, const std::string& where = "");
json model_to_json(const Model& m);

Grid parse_grid(const json& j, const std::string& where = "");
/// "N=65536,L=400"
Grid parse_grid_spec(const std::string& s);
json grid_to_json(const Grid& g);

InitialDatum parse_datum(const json& j, const std::string& where = "");
json datum_to_json(const InitialDatum& d);

SolverConfig parse_solver(const json& j, const std::string& where = "");
json solver_to_json(const SolverConfig& c);

Window parse_window(const json& j, const std::string& where = "");
/// "20,200"
Window parse_window_spec(const std::string& s);

std::vector<double> parse_number_list(const std::string& s);

enum class ExperimentKind { dichotomy, weighted, growth, lowerbound, energy };
std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::dichotomy;
  Model model = preset(PresetName::ost);
  ExperimentSetup setup;
  SolverConfig solver;
  InitialDatum datum;
  json params = json::object();
  std::uint64_t seed = 0;
  json raw;  // the document as read
};

/// Parses and checks every cross-field precondition of the named experiment.
ExperimentConfig parse_experiment(const json& j);

json load_json_file(const std::string& path);

}  // namespace stratwave
