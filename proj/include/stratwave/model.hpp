#pragma once

// Dispersion and dissipation symbols of
//
//   u_t + D(u_x) + u^k u_x + eta (H d^n_x u + H_m u) = 0,
//
// written in the angular Fourier convention u(x) = (1/2pi) int e^{i x xi} u^(xi) dxi,
// where d_x has multiplier i xi and the Hilbert transform H has multiplier
// i sign(xi). Under this pair the whole linear part is the multiplier
//
//   L(xi) = -i p(xi) xi + phi_{m,n}(xi),
//   phi_{m,n}(xi) = -eta (i^{n+1} |xi| xi^{n-1} + |xi|^m).

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace stratwave {

using cplx = std::complex<double>;

enum class SymbolKind { kdv, bo, dgbo, custom };

/// Real dispersion symbol p(xi) with declared growth exponent sigma
/// (|p(xi)| <= c |xi|^sigma) and order of differentiability at the origin.
class DispersionSymbol {
 public:
  static constexpr int kSmooth = std::numeric_limits<int>::max();

  /// p(xi) = -|xi|^2 (D = d^2_x).
  static DispersionSymbol kdv();
  /// p(xi) = |xi| (D = H d_x).
  static DispersionSymbol bo();
  /// p(xi) = |xi|^{1+a}, a in (0,1).
  static DispersionSymbol dgbo(double a);
  /// User symbol. The growth bound is checked empirically on construction; the
  /// declared regularity is trusted.
  static DispersionSymbol custom(std::function<double(double)> p, double sigma,
                                 int origin_regularity, bool even = false);

  double operator()(double xi) const;
  /// Same symbol in extended precision (custom symbols are promoted from double).
  long double extended(long double xi) const;

  SymbolKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double sigma() const noexcept { return sigma_; }
  int origin_regularity() const noexcept { return origin_regularity_; }
  bool is_even() const noexcept { return even_; }
  std::string name() const;

 private:
  DispersionSymbol(SymbolKind kind, double a, double sigma, int regularity, bool even)
      : kind_(kind), a_(a), sigma_(sigma), origin_regularity_(regularity), even_(even) {}

  SymbolKind kind_;
  double a_ = 0.0;
  double sigma_;
  int origin_regularity_;
  bool even_;
  std::function<double(double)> custom_;
};

/// sup over log-sampled |xi| in [1, xi_max], both signs, of |p(xi)| / |xi|^sigma.
double fit_growth_constant(const DispersionSymbol& p, double xi_max = 1e4);

struct ModelParams {
  int m = 3;
  int n = 1;
  int k = 1;
  double eta = 1.0;
  double alpha = 1.0 / 3.0;  // short-time smoothing rate, derived
};

/// True when n = 5 + 4d for some d >= 0; for those n the dissipation symbol
/// grows like exp(eta |xi|^n t) and the linear flow is ill-posed.
bool is_forbidden_n(int n) noexcept;

/// 1/m for n = 1 or n even, 1/n for n = 3 + 4d.
double smoothing_rate(int m, int n);

ModelParams validate_params(int m, int n, int k, double eta);

/// phi_{m,n}(xi) = -eta (i^{n+1} |xi| xi^{n-1} + |xi|^m).
cplx dissipation_symbol(double xi, const ModelParams& params);

/// max over xi of Re phi_{m,n}(xi) / eta: (1/4 for m=2, 2/(3 sqrt 3) for m=3) when
/// n = 1, zero otherwise.
double dissipation_bound(const ModelParams& params);

cplx linear_multiplier(double xi, const DispersionSymbol& p, const ModelParams& params);
std::complex<long double> linear_multiplier_extended(long double xi, const DispersionSymbol& p,
                                                     const ModelParams& params);

struct Model {
  DispersionSymbol symbol;
  ModelParams params;

  cplx multiplier(double xi) const { return linear_multiplier(xi, symbol, params); }
};

enum class PresetName { ost, gost, bo_perturbed, chen_lee, dgbo_perturbed };

/// Named physical models. `k` is used by gost (k in {2,3}), `a` by
/// dgbo_perturbed (a in (0,1)).
Model preset(PresetName name, double eta = 1.0, int k = 2, double a = 0.5);

/// Parses "ost", "gost:<k>", "bo_perturbed", "chen_lee", "dgbo_perturbed:<a>".
Model preset(const std::string& spec, double eta = 1.0);

std::string to_string(PresetName name);

}  // namespace stratwave
