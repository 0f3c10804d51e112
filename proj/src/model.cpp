#include "stratwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

namespace {

// i^e for integer e >= 0.
cplx ipow(int e) {
  switch (e % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double signed_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double max_ratio(const DispersionSymbol& p, double lo, double hi) {
  constexpr int kSamples = 400;
  double best = 0.0;
  const double sigma = p.sigma();
  for (int i = 0; i <= kSamples; ++i) {
    const double xi = lo * std::pow(hi / lo, static_cast<double>(i) / kSamples);
    for (double s : {xi, -xi}) {
      const double v = p(s);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::BadParameter, "dispersion symbol is not finite at xi=" + std::to_string(s));
      }
      best = std::max(best, std::abs(v) / std::pow(xi, sigma));
    }
  }
  return best;
}

}  // namespace

DispersionSymbol DispersionSymbol::kdv() { return {SymbolKind::kdv, 0.0, 2.0, kSmooth, true}; }

DispersionSymbol DispersionSymbol::bo() { return {SymbolKind::bo, 0.0, 1.0, 0, true}; }

DispersionSymbol DispersionSymbol::dgbo(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw Error(ErrorCode::InvalidRange, "dgbo exponent a must lie in (0,1), got " + std::to_string(a));
  }
  return {SymbolKind::dgbo, a, 1.0 + a, 1, true};
}

DispersionSymbol DispersionSymbol::custom(std::function<double(double)> p, double sigma,
                                          int origin_regularity, bool even) {
  if (!p) throw Error(ErrorCode::BadParameter, "custom symbol needs a callable");
  if (!(sigma > 0.0)) throw Error(ErrorCode::BadParameter, "custom symbol sigma must be > 0");
  if (origin_regularity < 0) throw Error(ErrorCode::BadParameter, "origin_regularity must be >= 0");
  DispersionSymbol s{SymbolKind::custom, 0.0, sigma, origin_regularity, even};
  s.custom_ = std::move(p);
  // |p| / |xi|^sigma must stay bounded; a symbol growing faster keeps raising
  // the ratio over the last decade.
  const double inner = max_ratio(s, 1.0, 1e3);
  const double outer = max_ratio(s, 1e3, 1e4);
  if (outer > 2.0 * inner + 1e-12) {
    std::ostringstream msg;
    msg << "custom symbol grows faster than |xi|^" << sigma << " (ratio " << inner << " -> " << outer << ")";
    throw Error(ErrorCode::BadParameter, msg.str());
  }
  return s;
}

double DispersionSymbol::operator()(double xi) const {
  switch (kind_) {
    case SymbolKind::kdv: return -xi * xi;
    case SymbolKind::bo: return std::abs(xi);
    case SymbolKind::dgbo: return std::pow(std::abs(xi), 1.0 + a_);
    case SymbolKind::custom: return custom_(xi);
  }
  return 0.0;
}

long double DispersionSymbol::extended(long double xi) const {
  switch (kind_) {
    case SymbolKind::kdv: return -xi * xi;
    case SymbolKind::bo: return std::fabs(xi);
    case SymbolKind::dgbo: return std::pow(std::fabs(xi), 1.0L + static_cast<long double>(a_));
    case SymbolKind::custom: return custom_(static_cast<double>(xi));
  }
  return 0.0L;
}

std::string DispersionSymbol::name() const {
  switch (kind_) {
    case SymbolKind::kdv: return "kdv";
    case SymbolKind::bo: return "bo";
    case SymbolKind::dgbo: {
      std::ostringstream os;
      os << "dgbo(" << a_ << ")";
      return os.str();
    }
    case SymbolKind::custom: return "custom";
  }
  return "?";
}

double fit_growth_constant(const DispersionSymbol& p, double xi_max) { return max_ratio(p, 1.0, xi_max); }

bool is_forbidden_n(int n) noexcept { return n >= 5 && (n - 5) % 4 == 0; }

double smoothing_rate(int m, int n) {
  if (n == 1 || n % 2 == 0) return 1.0 / m;
  return 1.0 / n;
}

ModelParams validate_params(int m, int n, int k, double eta) {
  if (m != 2 && m != 3) throw Error(ErrorCode::InvalidRange, "m must be 2 or 3, got " + std::to_string(m));
  if (n < 1) throw Error(ErrorCode::InvalidRange, "n must be >= 1, got " + std::to_string(n));
  if (k < 1) throw Error(ErrorCode::InvalidRange, "k must be >= 1, got " + std::to_string(k));
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidRange, "eta must be finite and > 0, got " + std::to_string(eta));
  }
  if (is_forbidden_n(n)) {
    throw Error(ErrorCode::InvalidN, "n = " + std::to_string(n) +
                                         " is of the form 5+4d; |K^| grows like exp(eta |xi|^n t)");
  }
  return ModelParams{m, n, k, eta, smoothing_rate(m, n)};
}

cplx dissipation_symbol(double xi, const ModelParams& params) {
  const double a = std::abs(xi);
  const cplx disp = ipow(params.n + 1) * (a * signed_pow(xi, params.n - 1));
  return -params.eta * (disp + std::pow(a, params.m));
}

double dissipation_bound(const ModelParams& params) {
  if (params.n != 1) return 0.0;
  // max_r (r - r^m) at r = m^{-1/(m-1)}
  const double r = std::pow(static_cast<double>(params.m), -1.0 / (params.m - 1));
  return r - std::pow(r, params.m);
}

cplx linear_multiplier(double xi, const DispersionSymbol& p, const ModelParams& params) {
  return cplx(0.0, -p(xi) * xi) + dissipation_symbol(xi, params);
}

std::complex<long double> linear_multiplier_extended(long double xi, const DispersionSymbol& p,
                                                     const ModelParams& params) {
  using cl = std::complex<long double>;
  const long double a = std::fabs(xi);
  long double odd = 1.0L;
  for (int i = 0; i < params.n - 1; ++i) odd *= xi;
  static const cl units[4] = {cl(1, 0), cl(0, 1), cl(-1, 0), cl(0, -1)};
  const cl disp = units[(params.n + 1) % 4] * (a * odd);
  long double am = 1.0L;
  for (int i = 0; i < params.m; ++i) am *= a;
  const long double eta = params.eta;
  return cl(0.0L, -p.extended(xi) * xi) - eta * (disp + am);
}

Model preset(PresetName name, double eta, int k, double a) {
  switch (name) {
    case PresetName::ost: return {DispersionSymbol::kdv(), validate_params(3, 1, 1, eta)};
    case PresetName::gost:
      if (k != 2 && k != 3) throw Error(ErrorCode::InvalidRange, "gost needs k in {2,3}, got " + std::to_string(k));
      return {DispersionSymbol::kdv(), validate_params(3, 1, k, eta)};
    case PresetName::bo_perturbed: return {DispersionSymbol::bo(), validate_params(3, 1, 1, eta)};
    case PresetName::chen_lee: return {DispersionSymbol::bo(), validate_params(2, 1, 1, eta)};
    case PresetName::dgbo_perturbed: return {DispersionSymbol::dgbo(a), validate_params(3, 2, 1, eta)};
  }
  throw Error(ErrorCode::UnknownPreset, "unknown preset");
}

Model preset(const std::string& spec, double eta) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto parse_number = [&](double fallback) {
    if (arg.empty()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) throw Error(ErrorCode::UnknownPreset, "bad preset argument in '" + spec + "'");
    return v;
  };
  if (head == "ost" && arg.empty()) return preset(PresetName::ost, eta);
  if (head == "gost") {
    const double kv = parse_number(2.0);
    if (kv != std::floor(kv)) throw Error(ErrorCode::InvalidRange, "gost k must be an integer");
    return preset(PresetName::gost, eta, static_cast<int>(kv));
  }
  if (head == "bo_perturbed" && arg.empty()) return preset(PresetName::bo_perturbed, eta);
  if (head == "chen_lee" && arg.empty()) return preset(PresetName::chen_lee, eta);
  if (head == "dgbo_perturbed") return preset(PresetName::dgbo_perturbed, eta, 1, parse_number(0.5));
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + spec + "'");
}

std::string to_string(PresetName name) {
  switch (name) {
    case PresetName::ost: return "ost";
    case PresetName::gost: return "gost";
    case PresetName::bo_perturbed: return "bo_perturbed";
    case PresetName::chen_lee: return "chen_lee";
    case PresetName::dgbo_perturbed: return "dgbo_perturbed";
  }
  return "?";
}

}  // namespace stratwave
