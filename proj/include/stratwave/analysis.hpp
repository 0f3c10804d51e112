#pragma once

// Measurements on solutions and the experiment drivers built on them.

#include <string>
#include <vector>

#include "stratwave/fit.hpp"
#include "stratwave/model.hpp"
#include "stratwave/solver.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

/// w(x) = (1 + |x|)^{-gamma}
struct Weight {
  double gamma = 0.5;

  double operator()(double x) const;
  std::vector<double> samples(const Grid& g) const;
};

/// (sum |u|^p w dx)^{1/p}; BadParameter unless 1 < p < inf.
double weighted_norm(const Field& u, double p, const Weight& w);

/// sup_x |u(x)| / (1 + |x|)^gamma.
double growth_envelope(const Field& u, double gamma);

/// Discrete integral sum u dx (real part).
double mean(const Field& u);

/// u - mean(u) psi with psi a unit-mass Gaussian of width 1, renormalized so
/// that the discrete integral of the result vanishes. Subtracting a constant
/// instead would leave a floor of size mean/2L across the whole box.
Field zero_mean_project(const Field& u);

struct LowerBoundReport {
  Window window;
  std::vector<double> xs;            // |x| of the sampled nodes, both sides
  std::vector<double> ratio_series;  // |x|^{n+1} |u| / (A(t) |mean|)
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_mean = 0.0;
  bool passes = false;
};

/// Ratio of the solution tail to the kernel tail times the datum mass.
/// ZeroMean when u0_mean is 0 (within 1e-12).
LowerBoundReport lower_bound_check(const Field& u, double t, const ModelParams& params, double u0_mean,
                                   const Window& window, double lo = 0.5, double hi = 2.0);

/// Grid, step and fitting window shared by the experiment drivers.
struct ExperimentSetup {
  Grid grid{65536, 3200.0};
  double dt = 1e-3;
  Window window{20.0, 400.0};
};

/// Throws ExcludedParameters for (m, n) = (2, 1) and (2, 2d).
void require_dichotomy_parameters(const ModelParams& params);

struct DichotomyReport {
  double mean = 0.0;
  double epsilon = 0.0;
  double exponent_nonzero_mean = 0.0;
  double exponent_zero_mean = 0.0;
  DecayFitPair fit_nonzero_mean;
  DecayFitPair fit_zero_mean;
  std::vector<double> times;  // all tested times, the last is T
  std::vector<double> exponents_nonzero_mean;
  std::vector<double> exponents_zero_mean;
  bool ordered = false;  // zero-mean >= nonzero-mean at every tested time
  bool passes = false;
};

/// Twin runs from c(1+x^2)^{-gamma/2} and its zero-mean projection; gamma =
/// n + 1 + eps with eps in (0, 1]. Passes when the nonzero-mean exponent is
/// n+1 within 0.15, the zero-mean one is >= n+1+0.7 eps, and the ordering holds.
DichotomyReport dichotomy_experiment(const Model& model, double gamma_datum, double T, const ExperimentSetup& setup,
                                     double amplitude = 1.0, std::vector<double> check_times = {});

struct WeightedReport {
  std::vector<double> times;
  std::vector<double> norms;   // ||u(t)||_{L^p_w}
  std::vector<double> scaled;  // t^alpha ||u(t)||_{L^p_w}
  double initial_norm = 0.0;
  double sup = 0.0;
  double fitted_C = 0.0;  // sup / ||u0||_{L^p_w}
  double log_slope_near_zero = 0.0;
  bool bounded = false;
};

/// t^alpha ||u(t)||_{L^p_w} on `samples` log-spaced times in [1e-3 T, T].
/// bounded: finite sup and log-slope over the four earliest times >= -0.05.
WeightedReport weighted_persistence_experiment(const Model& model, const Field& u0, double p, double gamma, double T,
                                               const ExperimentSetup& setup, bool nonlinear = true, int samples = 12);

struct GrowthReport {
  double gamma = 0.0;
  double C0 = 0.0;
  std::vector<double> times;
  std::vector<double> envelopes;
  double max_envelope = 0.0;
  bool passes = false;  // every envelope <= 2 C0
};

GrowthReport growth_experiment(const Model& model, double gamma, double C0, double T, const ExperimentSetup& setup,
                               int snapshots = 5);

struct NestedLowerBoundReport {
  double mean = 0.0;
  double t = 0.0;
  std::vector<LowerBoundReport> linear;     // nested windows, innermost first
  std::vector<LowerBoundReport> nonlinear;  // same windows
  bool linear_converges = false;  // outermost mean ratio within 5% of 1, |r-1| non-increasing within 5%
  bool nonlinear_in_band = false;
  bool passes = false;
};

/// Linear-only and full runs from c(1+x^2)^{-gamma/2}, compared with A(t)
/// times the datum mass on nested windows.
NestedLowerBoundReport lowerbound_experiment(const Model& model, double gamma_datum, double amplitude, double t,
                                             const ExperimentSetup& setup, const std::vector<Window>& windows);

struct EnergyReport {
  std::vector<double> step_times;
  std::vector<double> energy_series;
  std::vector<double> dissipation_series;
  double max_step_increase = 0.0;  // max over steps of e_{i+1} - e_i
  double max_growth_ratio = 0.0;   // max over steps of e_i / (e_0 exp(eta t_i))
  std::string regime;              // "monotone" (n even or n = 3+4d) or "bounded" (n = 1)
  bool passes = false;
};

/// Monotone regime: no step increases ||u|| by more than 1e-10.
/// Bounded regime: ||u(t)|| <= ||u0|| e^{eta t} (1.01).
EnergyReport energy_experiment(const Model& model, const Field& u0, double T, double dt);

}  // namespace stratwave
