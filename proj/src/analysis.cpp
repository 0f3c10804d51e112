#include "stratwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/kernel.hpp"

namespace stratwave {

double Weight::operator()(double x) const { return std::pow(1.0 + std::abs(x), -gamma); }

std::vector<double> Weight::samples(const Grid& g) const {
  std::vector<double> w(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) w[k] = (*this)(g.x(k));
  return w;
}

double weighted_norm(const Field& u, double p, const Weight& w) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::BadParameter, "weighted_norm needs 1 < p < inf");
  double s = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) s += std::pow(std::abs(u.values[k]), p) * w(u.grid.x(k));
  return std::pow(s * u.grid.dx(), 1.0 / p);
}

double growth_envelope(const Field& u, double gamma) {
  double best = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    best = std::max(best, std::abs(u.values[k]) * std::pow(1.0 + std::abs(u.grid.x(k)), -gamma));
  }
  return best;
}

double mean(const Field& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += v.real();
  return s * u.grid.dx();
}

Field zero_mean_project(const Field& u) {
  const Field psi = Field::sample(u.grid, [](double x) { return std::exp(-0.5 * x * x); });
  const double m = mean(u), mass = mean(psi);
  Field out = u;
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] -= m / mass * psi.values[k];
  return out;
}

LowerBoundReport lower_bound_check(const Field& u, double t, const ModelParams& params, double u0_mean,
                                   const Window& window, double lo, double hi) {
  if (std::abs(u0_mean) <= 1e-12) throw Error(ErrorCode::ZeroMean, "lower bound needs a datum with nonzero mass");
  if (!(window.a > 0.0) || !(window.b > window.a) || window.b > 0.5 * u.grid.half_length()) {
    std::ostringstream msg;
    msg << "window [" << window.a << ", " << window.b << "] is not inside (0, L/2]";
    throw Error(ErrorCode::WindowContaminated, msg.str());
  }
  const double A = asymptotic_coefficient(t, params);
  LowerBoundReport r;
  r.window = window;
  double sum = 0.0;
  for (Side side : {Side::left, Side::right}) {
    for (std::size_t q : log_spaced_nodes(u.grid, window, side, 50.0)) {
      const double ax = std::abs(u.grid.x(q));
      const double ratio = std::pow(ax, params.n + 1) * std::abs(u.values[q]) / (A * std::abs(u0_mean));
      r.xs.push_back(ax);
      r.ratio_series.push_back(ratio);
      sum += ratio;
    }
  }
  if (r.ratio_series.empty()) throw Error(ErrorCode::InsufficientDecades, "no grid nodes in the window");
  r.ratio_min = *std::min_element(r.ratio_series.begin(), r.ratio_series.end());
  r.ratio_max = *std::max_element(r.ratio_series.begin(), r.ratio_series.end());
  r.ratio_mean = sum / static_cast<double>(r.ratio_series.size());
  r.passes = r.ratio_min >= lo && r.ratio_max <= hi;
  return r;
}

void require_dichotomy_parameters(const ModelParams& params) {
  if (params.m == 2 && (params.n == 1 || params.n % 2 == 0)) {
    throw Error(ErrorCode::ExcludedParameters, "(m, n) = (2, " + std::to_string(params.n) +
                                                   ") is outside the range where the improved decay is known");
  }
}

namespace {

SolverConfig config_for(double T, double dt, std::vector<double> snapshots, bool nonlinear = true) {
  SolverConfig cfg;
  cfg.T = T;
  cfg.dt = std::min(dt, T);
  cfg.snapshot_times = std::move(snapshots);
  cfg.nonlinear = nonlinear;
  return cfg;
}

}  // namespace

DichotomyReport dichotomy_experiment(const Model& model, double gamma_datum, double T, const ExperimentSetup& setup,
                                     double amplitude, std::vector<double> check_times) {
  require_dichotomy_parameters(model.params);
  const int n1 = model.params.n + 1;
  DichotomyReport r;
  r.epsilon = gamma_datum - n1;
  if (!(r.epsilon > 0.0 && r.epsilon <= 1.0)) {
    throw Error(ErrorCode::BadParameter, "dichotomy datum needs gamma = n+1+eps with eps in (0, 1]");
  }
  if (!(T > 0.0)) throw Error(ErrorCode::BadParameter, "T must be > 0");
  if (check_times.empty()) check_times = {0.25 * T, 0.5 * T, T};
  std::sort(check_times.begin(), check_times.end());
  if (check_times.back() != T) check_times.push_back(T);

  const Field raw = make_datum(InitialDatum::algebraic(gamma_datum, amplitude), setup.grid);
  const Field zero = zero_mean_project(raw);
  r.mean = mean(raw);
  const SolverConfig cfg = config_for(T, setup.dt, check_times);
  const Trajectory a = solve(model, raw, cfg);
  const Trajectory b = solve(model, zero, cfg);

  r.times = a.times;
  r.ordered = true;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const DecayFitPair fa = tail_exponent(a.snapshots[i], setup.window);
    const DecayFitPair fb = tail_exponent(b.snapshots[i], setup.window);
    const double ea = std::max(fa.left.exponent, fa.right.exponent);
    const double eb = std::min(fb.left.exponent, fb.right.exponent);
    r.exponents_nonzero_mean.push_back(fa.mean_exponent());
    r.exponents_zero_mean.push_back(fb.mean_exponent());
    // side-wise comparison: the slowest zero-mean side against the fastest nonzero-mean side
    r.ordered = r.ordered && eb >= ea - 1e-9;
    if (i + 1 == a.snapshots.size()) {
      r.fit_nonzero_mean = fa;
      r.fit_zero_mean = fb;
    }
  }
  r.exponent_nonzero_mean = r.exponents_nonzero_mean.back();
  r.exponent_zero_mean = r.exponents_zero_mean.back();
  r.passes = r.fit_nonzero_mean.valid() && r.fit_zero_mean.valid() &&
             std::abs(r.exponent_nonzero_mean - n1) <= 0.15 &&
             r.exponent_zero_mean >= n1 + 0.7 * r.epsilon && r.ordered;
  return r;
}

WeightedReport weighted_persistence_experiment(const Model& model, const Field& u0, double p, double gamma, double T,
                                               const ExperimentSetup& setup, bool nonlinear, int samples) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::BadParameter, "weight exponent must lie in (0, 1)");
  if (!(p > 1.0)) throw Error(ErrorCode::BadParameter, "p must be > 1");
  if (samples < 4) throw Error(ErrorCode::BadParameter, "need at least 4 sample times");
  const Weight w{gamma};
  WeightedReport r;
  for (int i = 0; i < samples; ++i) {
    r.times.push_back(T * std::pow(1e-3, 1.0 - static_cast<double>(i) / (samples - 1)));
  }
  r.times.back() = T;
  const Trajectory tr = solve(model, u0, config_for(T, setup.dt, r.times, nonlinear));
  r.initial_norm = weighted_norm(u0, p, w);
  const double alpha = model.params.alpha;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const double nrm = weighted_norm(tr.snapshots[i], p, w);
    r.norms.push_back(nrm);
    r.scaled.push_back(std::pow(tr.times[i], alpha) * nrm);
    r.sup = std::max(r.sup, r.scaled.back());
  }
  r.fitted_C = r.initial_norm > 0.0 ? r.sup / r.initial_norm : 0.0;
  if (r.sup == 0.0) {
    r.log_slope_near_zero = 0.0;
  } else {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < 4; ++i) {
      if (r.scaled[i] <= 0.0) continue;
      lx.push_back(std::log(tr.times[i]));
      ly.push_back(std::log(r.scaled[i]));
    }
    r.log_slope_near_zero = least_squares(lx.data(), ly.data(), lx.size()).slope;
  }
  r.bounded = std::isfinite(r.sup) && r.log_slope_near_zero >= -0.05;
  return r;
}

GrowthReport growth_experiment(const Model& model, double gamma, double C0, double T, const ExperimentSetup& setup,
                               int snapshots) {
  if (snapshots < 1) throw Error(ErrorCode::BadParameter, "need at least one snapshot");
  GrowthReport r;
  r.gamma = gamma;
  r.C0 = C0;
  const Field u0 = make_datum(InitialDatum::growth(gamma, C0), setup.grid);
  std::vector<double> times;
  for (int i = 1; i <= snapshots; ++i) times.push_back(T * i / snapshots);
  const Trajectory tr = solve(model, u0, config_for(T, setup.dt, times));
  r.times.push_back(0.0);
  r.envelopes.push_back(growth_envelope(u0, gamma));
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    r.times.push_back(tr.times[i]);
    r.envelopes.push_back(growth_envelope(tr.snapshots[i], gamma));
  }
  r.max_envelope = *std::max_element(r.envelopes.begin(), r.envelopes.end());
  r.passes = r.max_envelope <= 2.0 * C0;
  return r;
}

NestedLowerBoundReport lowerbound_experiment(const Model& model, double gamma_datum, double amplitude, double t,
                                             const ExperimentSetup& setup, const std::vector<Window>& windows) {
  if (windows.empty()) throw Error(ErrorCode::BadParameter, "need at least one window");
  NestedLowerBoundReport r;
  r.t = t;
  const Field u0 = make_datum(InitialDatum::algebraic(gamma_datum, amplitude), setup.grid);
  r.mean = mean(u0);
  const Trajectory lin = solve(model, u0, config_for(t, setup.dt, {t}, false));
  const Trajectory full = solve(model, u0, config_for(t, setup.dt, {t}, true));
  for (const Window& w : windows) {
    r.linear.push_back(lower_bound_check(lin.snapshots.back(), t, model.params, r.mean, w));
    r.nonlinear.push_back(lower_bound_check(full.snapshots.back(), t, model.params, r.mean, w));
  }
  r.linear_converges = std::abs(r.linear.back().ratio_mean - 1.0) <= 0.05;
  for (std::size_t i = 1; i < r.linear.size(); ++i) {
    const double prev = std::abs(r.linear[i - 1].ratio_mean - 1.0);
    const double cur = std::abs(r.linear[i].ratio_mean - 1.0);
    r.linear_converges = r.linear_converges && cur <= prev + 0.05;
  }
  r.nonlinear_in_band = r.nonlinear.back().passes;
  r.passes = r.linear_converges && r.nonlinear_in_band;
  return r;
}

EnergyReport energy_experiment(const Model& model, const Field& u0, double T, double dt) {
  SolverConfig cfg = config_for(T, dt, {T});
  const Trajectory tr = solve(model, u0, cfg);
  EnergyReport r;
  r.step_times = tr.step_times;
  r.energy_series = tr.energy_series;
  r.dissipation_series = tr.dissipation_series;
  const int n = model.params.n;
  r.regime = n == 1 ? "bounded" : "monotone";
  const double e0 = r.energy_series.front();
  r.max_step_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r.energy_series.size(); ++i) {
    r.max_step_increase = std::max(r.max_step_increase, r.energy_series[i] - r.energy_series[i - 1]);
  }
  for (std::size_t i = 0; i < r.energy_series.size(); ++i) {
    const double bound = e0 * std::exp(model.params.eta * r.step_times[i]);
    r.max_growth_ratio = std::max(r.max_growth_ratio, bound > 0.0 ? r.energy_series[i] / bound : 0.0);
  }
  if (r.regime == "monotone") {
    r.passes = r.max_step_increase <= 1e-10;
  } else {
    r.passes = r.max_growth_ratio <= 1.01;
  }
  return r;
}

}  // namespace stratwave
