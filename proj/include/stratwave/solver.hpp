#pragma once

// Time integration of u_t + D(u_x) + u^k u_x + eta (H d^n_x u + H_m u) = 0.
//
// The linear part is propagated exactly by exp(h L(xi)); the nonlinearity is
// taken in conservative form N(u) = -(1/(k+1)) d_x(u^{k+1}), evaluated
// pseudo-spectrally and dealiased with the 2/(k+2) rule.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stratwave/model.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

enum class SolverMode { etd, picard };

std::string to_string(SolverMode m);
SolverMode parse_solver_mode(const std::string& s);

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  SolverMode mode = SolverMode::etd;
  double picard_tol = 1e-12;
  int picard_max_iter = 60;
  int dealias_k = 0;  // 0: use the model's k
  std::vector<double> snapshot_times;
  bool nonlinear = true;
  /// Retries of a failed step at dt/2, dt/4, ...; 0 fails fast.
  int max_halvings = 0;
};

/// Throws BadParameter unless 0 < dt <= T, picard_tol > 0 and snapshots lie in [0, T].
void validate(const SolverConfig& cfg);

struct Trajectory {
  std::vector<double> times;  // snapshot times, strictly increasing
  std::vector<Field> snapshots;
  std::vector<double> step_times;  // t = 0 and the end of every step
  std::vector<double> energy_series;  // ||u||_2 at step_times
  std::vector<double> dissipation_series;  // dissipation_rate at step_times
  std::size_t halvings = 0;
};

struct InitialDatum {
  enum class Kind { algebraic, zero_mean_algebraic, gaussian, growth };
  Kind kind = Kind::gaussian;
  double gamma = 2.0;
  double c = 1.0;      // algebraic amplitude, growth C0
  double sigma = 1.0;  // gaussian width

  static InitialDatum algebraic(double gamma, double c = 1.0) { return {Kind::algebraic, gamma, c, 1.0}; }
  static InitialDatum zero_mean_algebraic(double gamma, double c = 1.0) {
    return {Kind::zero_mean_algebraic, gamma, c, 1.0};
  }
  static InitialDatum gaussian(double sigma, double amplitude = 1.0) { return {Kind::gaussian, 0.0, amplitude, sigma}; }
  static InitialDatum growth(double gamma, double C0) { return {Kind::growth, gamma, C0, 1.0}; }
};

std::string to_string(InitialDatum::Kind k);
InitialDatum::Kind parse_datum_kind(const std::string& s);

/// algebraic: c (1 + x^2)^{-gamma/2}
/// zero_mean_algebraic: the same with its discrete integral removed
/// gaussian: c exp(-x^2 / (2 sigma^2))
/// growth: C0 (1 + x)^gamma s(x + 1) r(x), with s a C-infinity switch from 0
///   (x <= -1) to 1 (x >= 0) and r a C-infinity roll-off from 1 at 0.75 L to 0
///   at 0.95 L that lets the profile fit in the periodic box.
Field make_datum(const InitialDatum& d, const Grid& grid);

/// Smooth switch: 0 for y <= 0, 1 for y >= 1.
double smooth_step(double y);

/// One-step exponential integrator (Cox-Matthews ETD2) for a fixed grid and
/// model. Holds the phi-function tables for each step size it has seen.
class EtdStepper {
 public:
  EtdStepper(const Model& model, const Grid& grid, int dealias_k, bool nonlinear, bool real_valued);

  /// Advances spectral coefficients (FFT order) by h in place.
  void step(std::vector<cplx>& v, double h);
  /// Dealiased spectrum of N(u) = -(1/(k+1)) d_x(u^{k+1}) for u with spectrum v.
  void nonlinear_term(const std::vector<cplx>& v, std::vector<cplx>& out);
  /// Multiplies v by exp(h L).
  void propagate(std::vector<cplx>& v, double h);

  const Grid& grid() const { return grid_; }
  const Model& model() const { return model_; }
  int dealias_k() const { return k_dealias_; }

 private:
  struct Table {
    double h;
    std::vector<cplx> e, phi1, phi2;
  };
  const Table& table(double h);

  Model model_;
  Grid grid_;
  int k_dealias_;
  bool nonlinear_;
  bool real_;
  std::vector<cplx> lin_;
  std::vector<cplx> nl_mult_;
  std::vector<Table> tables_;
  std::vector<cplx> n0_, n1_, a_, phys_;
};

/// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, series near 0.
std::pair<cplx, cplx> phi_functions(cplx z);

/// One ETD2 step of the physical field.
Field etd_step(const Field& u, double dt, const Model& model, int dealias_k = 0, bool nonlinear = true);

/// Integrates to cfg.T. Throws NonFiniteError carrying the failure time.
Trajectory solve(const Model& model, const Field& u0, const SolverConfig& cfg);

struct PicardReport {
  int iterations = 0;
  std::vector<double> differences;  // max over nodes of ||u^{(j)} - u^{(j-1)}||_2
  std::vector<double> contraction_factors;
  bool converged = false;
};

/// Fixed-point iteration of the mild formulation
///   u(t) = K(t) * u0 + int_0^t K(t - s) * N(u(s)) ds
/// on the dt grid, midpoint rule in s. Throws NoContraction when the
/// contraction factor exceeds 1 on 3 consecutive iterations, when the iterates
/// stop being finite, or when picard_max_iter passes without reaching picard_tol.
std::pair<Field, PicardReport> picard_solve(const Model& model, const Field& u0, const SolverConfig& cfg);

/// Discrete L2 norm.
double energy(const Field& u);
/// sum_j Re phi(xi_j) |c_j|^2 dxi / 2pi, so that d/dt ||u||^2 = 2 dissipation_rate
/// for the linear flow.
double dissipation_rate(const SpectralField& U, const Model& model);
double spectral_l2(const std::vector<cplx>& v, const Grid& g);

}  // namespace stratwave
