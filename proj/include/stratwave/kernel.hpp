#pragma once

// The linear solution operator K_{m,n}(t, .), the inverse transform of
// exp(t L(xi)) with L from model.hpp.

#include <complex>

#include "stratwave/fit.hpp"
#include "stratwave/model.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

struct KernelField {
  Field field;
  double t;
  Model model;
};

/// exp(L(xi) t).
cplx kernel_hat(double t, double xi, const Model& model);
std::complex<long double> kernel_hat_extended(double t, long double xi, const Model& model);

/// Spectrum of K(t) on the grid, in FFT order. Used directly by the solver.
std::vector<cplx> kernel_spectrum(double t, const Grid& grid, const Model& model);

/// Throws UnderResolved unless the Nyquist frequency covers at least eight
/// multiples of the spectral decay scale (eta t)^{-1/m}.
void check_resolution(double t, const Grid& grid, const Model& model);

/// Samples of K(t, x_k), synthesized in extended precision. t > 0.
KernelField kernel_field(double t, const Grid& grid, const Model& model);

/// Samples of d/dx K(t, x_k).
Field kernel_derivative_field(double t, const Grid& grid, const Model& model);

/// Jump J of the (n-1)-th derivative of exp(t phi) at xi = 0 per unit t; it
/// fixes the tail K(t,x) ~ J t / (2 pi (i x)^{n+1}).
///   n = 1: 2 eta;  n = 2: -4 i eta;  n >= 3: 2 eta (i^{n+1} n! + c_m),
/// c_m = 6 for (m, n) = (3, 3), otherwise 0.
cplx leading_jump(const ModelParams& params);

struct AsymptoticLaw {
  int exponent;      // n + 1
  cplx jump;         // leading_jump
  double coefficient;  // |J| t / (2 pi)
};

AsymptoticLaw asymptotic_law(double t, const ModelParams& params);

/// Predicted limit of |x|^{n+1} |K(t, x)|.
double asymptotic_coefficient(double t, const ModelParams& params);

/// Relative size of the periodic images sum_{j != 0} |x + 2 L j|^{-(n+1)}
/// against |x|^{-(n+1)} at |x| = x_edge.
double image_contamination(double x_edge, double L, int exponent);

struct BoundReport {
  double fitted_C = 0.0;   // sup_window |K| t^alpha (1 + |x|^{n+1})
  double refined_C = 0.0;  // same on the grid with 2N points
  double refinement_change = 0.0;
  double image_contamination = 0.0;
  DecayFitPair tail;
  bool passes = false;
};

/// WindowContaminated when the window is not inside [0, L/2].
BoundReport verify_pointwise_bound(const KernelField& kf, const Window& window);

}  // namespace stratwave
