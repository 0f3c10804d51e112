#include "stratwave/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

cplx kernel_hat(double t, double xi, const Model& model) { return std::exp(model.multiplier(xi) * t); }

std::complex<long double> kernel_hat_extended(double t, long double xi, const Model& model) {
  return std::exp(linear_multiplier_extended(xi, model.symbol, model.params) * static_cast<long double>(t));
}

std::vector<cplx> kernel_spectrum(double t, const Grid& grid, const Model& model) {
  std::vector<cplx> out(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) out[q] = kernel_hat(t, grid.frequency(q), model);
  return out;
}

void check_resolution(double t, const Grid& grid, const Model& model) {
  if (!(t > 0.0)) throw Error(ErrorCode::BadParameter, "kernel time must be > 0");
  const double scale = std::pow(model.params.eta * t, -1.0 / model.params.m);
  if (grid.nyquist() < 8.0 * scale) {
    std::ostringstream msg;
    msg << "Nyquist frequency " << grid.nyquist() << " < 8 x decay scale " << scale << " at t=" << t
        << "; refine the grid";
    throw Error(ErrorCode::UnderResolved, msg.str());
  }
}

namespace {

Field synthesize(double t, const Grid& grid, const Model& model, bool differentiate) {
  check_resolution(t, grid, model);
  const std::size_t n = grid.size();
  std::vector<cplxl> spec(n);
  const long double dxi = static_cast<long double>(std::numbers::pi) / grid.half_length();
  for (std::size_t q = 0; q < n; ++q) {
    if (q == n / 2) continue;  // unpaired mode, negligible once resolved
    const long double xi = static_cast<long double>(grid.mode(q)) * dxi;
    spec[q] = kernel_hat_extended(t, xi, model);
    if (differentiate) spec[q] *= cplxl(0.0L, xi);
  }
  return Field(grid, to_physical_extended(grid, spec), model.symbol.is_even());
}

}  // namespace

KernelField kernel_field(double t, const Grid& grid, const Model& model) {
  return {synthesize(t, grid, model, false), t, model};
}

Field kernel_derivative_field(double t, const Grid& grid, const Model& model) {
  return synthesize(t, grid, model, true);
}

cplx leading_jump(const ModelParams& params) {
  const double eta = params.eta;
  const int n = params.n;
  if (n == 1) return 2.0 * eta;
  if (n == 2) return cplx(0.0, -4.0 * eta);
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  static const cplx units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double c_m = (n == 3 && params.m == 3) ? 6.0 : 0.0;
  return 2.0 * eta * (units[(n + 1) % 4] * fact + c_m);
}

AsymptoticLaw asymptotic_law(double t, const ModelParams& params) {
  const cplx j = leading_jump(params);
  return {params.n + 1, j, std::abs(j) * t / (2.0 * std::numbers::pi)};
}

double asymptotic_coefficient(double t, const ModelParams& params) { return asymptotic_law(t, params).coefficient; }

double image_contamination(double x_edge, double L, int exponent) {
  const double p = exponent;
  double s = 0.0;
  constexpr int kTerms = 2000;
  for (int j = 1; j <= kTerms; ++j) {
    s += std::pow(2.0 * L * j - x_edge, -p) + std::pow(2.0 * L * j + x_edge, -p);
  }
  // integral bound on the remainder
  if (p > 1.0) s += 2.0 * std::pow(2.0 * L * kTerms, 1.0 - p) / ((p - 1.0) * 2.0 * L);
  return s * std::pow(x_edge, p);
}

namespace {

double bound_constant(const Field& k, double t, const ModelParams& params, const Window& w) {
  const double ta = std::pow(t, params.alpha);
  double best = 0.0;
  for (std::size_t q = 0; q < k.grid.size(); ++q) {
    const double ax = std::abs(k.grid.x(q));
    if (ax < w.a || ax > w.b) continue;
    best = std::max(best, std::abs(k.values[q]) * ta * (1.0 + std::pow(ax, params.n + 1)));
  }
  return best;
}

}  // namespace

BoundReport verify_pointwise_bound(const KernelField& kf, const Window& window) {
  const Grid& g = kf.field.grid;
  if (!(window.a >= 0.0) || !(window.b > window.a) || window.b > 0.5 * g.half_length()) {
    std::ostringstream msg;
    msg << "window [" << window.a << ", " << window.b << "] is not inside [0, L/2] for L=" << g.half_length();
    throw Error(ErrorCode::WindowContaminated, msg.str());
  }
  BoundReport r;
  const ModelParams& p = kf.model.params;
  r.fitted_C = bound_constant(kf.field, kf.t, p, window);
  const KernelField fine = kernel_field(kf.t, Grid(2 * g.size(), g.half_length()), kf.model);
  r.refined_C = bound_constant(fine.field, kf.t, p, window);
  r.refinement_change = r.fitted_C > 0.0 ? std::abs(r.refined_C - r.fitted_C) / r.fitted_C : 0.0;
  r.image_contamination = image_contamination(window.b, g.half_length(), p.n + 1);
  if (window.a > 0.0) r.tail = tail_exponent(kf.field, window);
  r.passes = std::isfinite(r.fitted_C) && r.fitted_C > 0.0 && r.refinement_change <= 0.1;
  return r;
}

}  // namespace stratwave
