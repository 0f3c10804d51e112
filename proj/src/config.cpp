#include "stratwave/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) invalid(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) invalid(where + "/" + key, "missing required field");
  return *it;
}

double number_at(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) invalid(where + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(where + "/" + key, "expected a finite number");
  return d;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number_at(j, key, where);
}

long integer_at(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) invalid(where + "/" + key, "expected an integer");
  return v.get<long>();
}

long integer_or(const json& j, const std::string& key, long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return integer_at(j, key, where);
}

bool bool_or(const json& j, const std::string& key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) invalid(where + "/" + key, "expected a boolean");
  return j[key].get<bool>();
}

std::string string_at(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) invalid(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) invalid(where + "/" + it.key(), "unknown field");
  }
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) invalid(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) invalid(where + "/" + std::to_string(i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

Model parse_model(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "model must be an object");
  if (j.contains("preset")) {
    reject_unknown(j, {"preset", "eta"}, where);
    const double eta = number_or(j, "eta", 1.0, where);
    if (!(eta > 0.0)) invalid(where + "/eta", "eta must be > 0");
    try {
      return preset(string_at(j, "preset", where), eta);
    } catch (const Error& e) {
      invalid(where + "/preset", e.what());
    }
  }
  reject_unknown(j, {"symbol", "m", "n", "k", "eta"}, where);
  const json& sym = require(j, "symbol", where);
  const std::string sw = where + "/symbol";
  if (!sym.is_object()) invalid(sw, "symbol must be an object");
  reject_unknown(sym, {"kind", "a"}, sw);
  const std::string kind = string_at(sym, "kind", sw);
  const long m = integer_at(j, "m", where);
  const long n = integer_at(j, "n", where);
  const long k = integer_or(j, "k", 1, where);
  const double eta = number_or(j, "eta", 1.0, where);
  if (m != 2 && m != 3) invalid(where + "/m", "m must be 2 or 3");
  if (n < 1) invalid(where + "/n", "n must be >= 1");
  if (is_forbidden_n(static_cast<int>(n))) {
    invalid(where + "/n", "n = " + std::to_string(n) + " violates the condition n != 5 + 4d (d >= 0)");
  }
  if (k < 1) invalid(where + "/k", "k must be >= 1");
  if (!(eta > 0.0)) invalid(where + "/eta", "eta must be > 0");
  DispersionSymbol symbol = DispersionSymbol::kdv();
  if (kind == "kdv") {
    if (sym.contains("a")) invalid(sw + "/a", "only dgbo takes an exponent");
  } else if (kind == "bo") {
    if (sym.contains("a")) invalid(sw + "/a", "only dgbo takes an exponent");
    symbol = DispersionSymbol::bo();
  } else if (kind == "dgbo") {
    const double a = number_or(sym, "a", 0.5, sw);
    if (!(a > 0.0 && a < 1.0)) invalid(sw + "/a", "a must lie in (0, 1)");
    symbol = DispersionSymbol::dgbo(a);
  } else {
    invalid(sw + "/kind", "unknown symbol kind '" + kind + "' (expected kdv, bo or dgbo)");
  }
  return {symbol, validate_params(static_cast<int>(m), static_cast<int>(n), static_cast<int>(k), eta)};
}

json model_to_json(const Model& m) {
  json sym = {{"kind", m.symbol.kind() == SymbolKind::dgbo  ? "dgbo"
                       : m.symbol.kind() == SymbolKind::bo  ? "bo"
                       : m.symbol.kind() == SymbolKind::kdv ? "kdv"
                                                            : "custom"}};
  if (m.symbol.kind() == SymbolKind::dgbo) sym["a"] = m.symbol.a();
  return {{"symbol", sym},
          {"m", m.params.m},
          {"n", m.params.n},
          {"k", m.params.k},
          {"eta", m.params.eta},
          {"alpha", m.params.alpha}};
}

Grid parse_grid(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "grid must be an object");
  reject_unknown(j, {"N", "L"}, where);
  const long N = integer_at(j, "N", where);
  const double L = number_at(j, "L", where);
  if (N < 16 || (N & (N - 1)) != 0) invalid(where + "/N", "N must be a power of two >= 16");
  if (!(L > 0.0)) invalid(where + "/L", "L must be > 0");
  return Grid(static_cast<std::size_t>(N), L);
}

Grid parse_grid_spec(const std::string& s) {
  json j = json::object();
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) invalid("/grid", "expected N=<int>,L=<number>, got '" + s + "'");
    const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
    try {
      if (key == "N") {
        j["N"] = std::stol(val);
      } else if (key == "L") {
        j["L"] = std::stod(val);
      } else {
        invalid("/grid/" + key, "unknown grid key");
      }
    } catch (const std::logic_error&) {
      invalid("/grid/" + key, "bad value '" + val + "'");
    }
  }
  return parse_grid(j, "/grid");
}

json grid_to_json(const Grid& g) { return {{"N", g.size()}, {"L", g.half_length()}, {"dx", g.dx()}}; }

InitialDatum parse_datum(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "datum must be an object");
  const std::string kind = string_at(j, "kind", where);
  InitialDatum d;
  if (kind == "algebraic" || kind == "zero_mean_algebraic") {
    reject_unknown(j, {"kind", "gamma", "c"}, where);
    d = kind == "algebraic" ? InitialDatum::algebraic(number_at(j, "gamma", where), number_or(j, "c", 1.0, where))
                            : InitialDatum::zero_mean_algebraic(number_at(j, "gamma", where),
                                                                number_or(j, "c", 1.0, where));
    if (!(d.gamma > 0.0)) invalid(where + "/gamma", "gamma must be > 0");
  } else if (kind == "gaussian") {
    reject_unknown(j, {"kind", "sigma", "amplitude"}, where);
    d = InitialDatum::gaussian(number_or(j, "sigma", 1.0, where), number_or(j, "amplitude", 1.0, where));
    if (!(d.sigma > 0.0)) invalid(where + "/sigma", "sigma must be > 0");
  } else if (kind == "growth") {
    reject_unknown(j, {"kind", "gamma", "C0"}, where);
    d = InitialDatum::growth(number_at(j, "gamma", where), number_at(j, "C0", where));
    if (!(d.gamma > 0.0 && d.gamma < 0.5)) invalid(where + "/gamma", "growth gamma must lie in (0, 1/2)");
    if (!(d.c >= 0.0)) invalid(where + "/C0", "C0 must be >= 0");
  } else {
    invalid(where + "/kind", "unknown datum kind '" + kind + "'");
  }
  return d;
}

json datum_to_json(const InitialDatum& d) {
  using K = InitialDatum::Kind;
  json j = {{"kind", to_string(d.kind)}};
  switch (d.kind) {
    case K::algebraic:
    case K::zero_mean_algebraic:
      j["gamma"] = d.gamma;
      j["c"] = d.c;
      break;
    case K::gaussian:
      j["sigma"] = d.sigma;
      j["amplitude"] = d.c;
      break;
    case K::growth:
      j["gamma"] = d.gamma;
      j["C0"] = d.c;
      break;
  }
  return j;
}

SolverConfig parse_solver(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "solver must be an object");
  reject_unknown(j, {"dt", "T", "mode", "snapshots", "picard_tol", "picard_max_iter", "nonlinear", "max_halvings",
                     "dealias_k"},
                 where);
  SolverConfig c;
  c.dt = number_or(j, "dt", c.dt, where);
  c.T = number_or(j, "T", c.T, where);
  if (j.contains("mode")) {
    const std::string mode = string_at(j, "mode", where);
    if (mode != "etd" && mode != "picard") invalid(where + "/mode", "mode must be etd or picard");
    c.mode = parse_solver_mode(mode);
  }
  if (j.contains("snapshots")) c.snapshot_times = number_array(j["snapshots"], where + "/snapshots");
  c.picard_tol = number_or(j, "picard_tol", c.picard_tol, where);
  c.picard_max_iter = static_cast<int>(integer_or(j, "picard_max_iter", c.picard_max_iter, where));
  c.nonlinear = bool_or(j, "nonlinear", c.nonlinear, where);
  c.max_halvings = static_cast<int>(integer_or(j, "max_halvings", c.max_halvings, where));
  c.dealias_k = static_cast<int>(integer_or(j, "dealias_k", c.dealias_k, where));
  if (!(c.T > 0.0)) invalid(where + "/T", "T must be > 0");
  if (!(c.dt > 0.0) || c.dt > c.T) invalid(where + "/dt", "need 0 < dt <= T");
  if (!(c.picard_tol > 0.0)) invalid(where + "/picard_tol", "picard_tol must be > 0");
  if (c.picard_max_iter < 1) invalid(where + "/picard_max_iter", "must be >= 1");
  if (c.max_halvings < 0) invalid(where + "/max_halvings", "must be >= 0");
  if (c.dealias_k < 0) invalid(where + "/dealias_k", "must be >= 0");
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    const double s = c.snapshot_times[i];
    if (!(s >= 0.0) || s > c.T) invalid(where + "/snapshots/" + std::to_string(i), "snapshot outside [0, T]");
  }
  return c;
}

json solver_to_json(const SolverConfig& c) {
  return {{"dt", c.dt},
          {"T", c.T},
          {"mode", to_string(c.mode)},
          {"snapshots", c.snapshot_times},
          {"picard_tol", c.picard_tol},
          {"picard_max_iter", c.picard_max_iter},
          {"nonlinear", c.nonlinear},
          {"max_halvings", c.max_halvings},
          {"dealias_k", c.dealias_k}};
}

Window parse_window(const json& j, const std::string& where) {
  const auto v = number_array(j, where);
  if (v.size() != 2) invalid(where, "window must be [a, b]");
  if (!(v[0] > 0.0 && v[1] > v[0])) invalid(where, "window needs 0 < a < b");
  return {v[0], v[1]};
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != part.size()) throw Error(ErrorCode::BadParameter, "bad number '" + part + "' in '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Window parse_window_spec(const std::string& s) {
  const auto v = parse_number_list(s);
  if (v.size() != 2 || !(v[0] > 0.0 && v[1] > v[0])) {
    throw Error(ErrorCode::BadParameter, "window must be 'a,b' with 0 < a < b, got '" + s + "'");
  }
  return {v[0], v[1]};
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::dichotomy: return "dichotomy";
    case ExperimentKind::weighted: return "weighted";
    case ExperimentKind::growth: return "growth";
    case ExperimentKind::lowerbound: return "lowerbound";
    case ExperimentKind::energy: return "energy";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "dichotomy") return ExperimentKind::dichotomy;
  if (s == "weighted") return ExperimentKind::weighted;
  if (s == "growth") return ExperimentKind::growth;
  if (s == "lowerbound") return ExperimentKind::lowerbound;
  if (s == "energy") return ExperimentKind::energy;
  invalid("/experiment", "unknown experiment '" + s + "'");
}

ExperimentConfig parse_experiment(const json& j) {
  if (!j.is_object()) invalid("", "experiment config must be an object");
  reject_unknown(j, {"experiment", "model", "grid", "solver", "datum", "window", "params", "seed"}, "");
  ExperimentConfig c;
  c.raw = j;
  c.kind = parse_experiment_kind(string_at(j, "experiment", ""));
  c.model = parse_model(require(j, "model", ""), "/model");
  if (j.contains("grid")) c.setup.grid = parse_grid(j["grid"], "/grid");
  if (j.contains("solver")) c.solver = parse_solver(j["solver"], "/solver");
  c.setup.dt = c.solver.dt;
  if (j.contains("window")) c.setup.window = parse_window(j["window"], "/window");
  if (c.setup.window.b > 0.5 * c.setup.grid.half_length()) {
    invalid("/window", "window edge exceeds L/2 = " + std::to_string(0.5 * c.setup.grid.half_length()));
  }
  if (j.contains("datum")) c.datum = parse_datum(j["datum"], "/datum");
  if (j.contains("params")) {
    if (!j["params"].is_object()) invalid("/params", "params must be an object");
    c.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) invalid("/seed", "seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  const json& p = c.params;
  const int n1 = c.model.params.n + 1;
  switch (c.kind) {
    case ExperimentKind::dichotomy: {
      reject_unknown(p, {"gamma", "amplitude", "check_times"}, "/params");
      require_dichotomy_parameters(c.model.params);
      const double g = number_or(p, "gamma", n1 + 1.0, "/params");
      if (!(g > n1 && g <= n1 + 1.0)) invalid("/params/gamma", "gamma must be n+1+eps with eps in (0, 1]");
      number_or(p, "amplitude", 1.0, "/params");
      if (p.contains("check_times")) {
        for (double t : number_array(p["check_times"], "/params/check_times")) {
          if (!(t > 0.0 && t <= c.solver.T)) invalid("/params/check_times", "times must lie in (0, T]");
        }
      }
      break;
    }
    case ExperimentKind::weighted: {
      reject_unknown(p, {"p", "gamma", "samples", "nonlinear"}, "/params");
      if (!(number_or(p, "p", 2.0, "/params") > 1.0)) invalid("/params/p", "p must be > 1");
      const double g = number_or(p, "gamma", 0.5, "/params");
      if (!(g > 0.0 && g < 1.0)) invalid("/params/gamma", "gamma must lie in (0, 1)");
      if (integer_or(p, "samples", 12, "/params") < 4) invalid("/params/samples", "need at least 4 samples");
      bool_or(p, "nonlinear", true, "/params");
      if (!j.contains("datum")) invalid("/datum", "weighted experiment needs a datum");
      break;
    }
    case ExperimentKind::growth: {
      reject_unknown(p, {"gamma", "C0", "snapshots"}, "/params");
      const double g = number_or(p, "gamma", 0.3, "/params");
      if (!(g > 0.0 && g < 0.5)) invalid("/params/gamma", "gamma must lie in (0, 1/2)");
      if (!(number_or(p, "C0", 1e-2, "/params") >= 0.0)) invalid("/params/C0", "C0 must be >= 0");
      if (integer_or(p, "snapshots", 5, "/params") < 1) invalid("/params/snapshots", "need at least 1 snapshot");
      break;
    }
    case ExperimentKind::lowerbound: {
      reject_unknown(p, {"gamma", "amplitude", "windows"}, "/params");
      if (!(number_or(p, "gamma", n1 + 1.0, "/params") > 1.0)) invalid("/params/gamma", "gamma must be > 1");
      if (number_or(p, "amplitude", 1.0, "/params") == 0.0) invalid("/params/amplitude", "datum must have mass");
      if (p.contains("windows")) {
        const json& ws = p["windows"];
        if (!ws.is_array() || ws.empty()) invalid("/params/windows", "expected a non-empty array of [a, b]");
        for (std::size_t i = 0; i < ws.size(); ++i) {
          const Window w = parse_window(ws[i], "/params/windows/" + std::to_string(i));
          if (w.b > 0.5 * c.setup.grid.half_length()) {
            invalid("/params/windows/" + std::to_string(i), "window edge exceeds L/2");
          }
        }
      }
      break;
    }
    case ExperimentKind::energy:
      reject_unknown(p, {}, "/params");
      if (!j.contains("datum")) invalid("/datum", "energy experiment needs a datum");
      break;
  }
  return c;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path + ": " + e.what());
  }
}

}  // namespace stratwave
