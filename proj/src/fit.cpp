#include "stratwave/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

LineFit least_squares(const double* x, const double* y, std::size_t n) {
  LineFit fit;
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) fit.stderr_slope = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  return fit;
}

namespace {

void check_window(const Grid& g, const Window& w) {
  const double L = g.half_length();
  std::ostringstream msg;
  if (!(w.a > 0.0) || !(w.b > w.a)) {
    msg << "window [" << w.a << ", " << w.b << "] must satisfy 0 < a < b";
    throw Error(ErrorCode::WindowContaminated, msg.str());
  }
  if (w.b > 0.5 * L) {
    msg << "window edge " << w.b << " exceeds half the box half-length " << 0.5 * L;
    throw Error(ErrorCode::WindowContaminated, msg.str());
  }
  const double decades = std::log10(w.b / w.a);
  if (decades < kMinDecades) {
    msg << "window spans " << decades << " decades, need " << kMinDecades;
    throw Error(ErrorCode::InsufficientDecades, msg.str());
  }
  // distinct nodes in the first (sparsest) decade-fraction of the window
  const double a_hi = std::min(w.b, w.a * std::pow(10.0, std::min(1.0, decades)));
  const double per_decade = (a_hi - w.a) / g.dx() / std::log10(a_hi / w.a);
  if (per_decade < kMinPointsPerDecade) {
    msg << "only " << per_decade << " grid points per decade near |x|=" << w.a << ", need " << kMinPointsPerDecade;
    throw Error(ErrorCode::InsufficientDecades, msg.str());
  }
}

}  // namespace

std::vector<std::size_t> log_spaced_nodes(const Grid& g, const Window& w, Side side, double per_decade) {
  const double decades = std::log10(w.b / w.a);
  const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade)) + 1;
  std::vector<std::size_t> idx;
  idx.reserve(count);
  const double L = g.half_length(), dx = g.dx();
  for (std::size_t i = 0; i < count; ++i) {
    const double r = w.a * std::pow(w.b / w.a, static_cast<double>(i) / static_cast<double>(count - 1));
    const double x = side == Side::right ? r : -r;
    auto q = static_cast<long>(std::llround((x + L) / dx));
    q = std::clamp(q, 0L, static_cast<long>(g.size()) - 1);
    const double ax = std::abs(g.x(static_cast<std::size_t>(q)));
    if (ax < w.a * (1.0 - 1e-12) || ax > w.b * (1.0 + 1e-12)) continue;
    if (idx.empty() || idx.back() != static_cast<std::size_t>(q)) idx.push_back(static_cast<std::size_t>(q));
  }
  return idx;
}

DecayFit fit_side(const Field& f, const Window& w, Side side) {
  check_window(f.grid, w);
  const auto nodes = log_spaced_nodes(f.grid, w, side);
  std::vector<double> lx, ly;
  lx.reserve(nodes.size());
  ly.reserve(nodes.size());
  for (std::size_t q : nodes) {
    const double v = std::abs(f.values[q]);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    lx.push_back(std::log(std::abs(f.grid.x(q))));
    ly.push_back(std::log(v));
  }
  DecayFit out;
  out.side = side;
  out.window = w;
  out.points = lx.size();
  if (lx.size() < 3) return out;
  const LineFit lf = least_squares(lx.data(), ly.data(), lx.size());
  out.slope = lf.slope;
  out.exponent = -lf.slope;
  out.intercept = lf.intercept;
  out.stderr_slope = lf.stderr_slope;
  out.r_squared = lf.r_squared;
  out.valid = lf.r_squared >= kMinRSquared && std::isfinite(lf.slope);
  const double L = f.grid.half_length();
  out.wrap_ratio = out.exponent > 0.0 ? std::pow(w.b / (2.0 * L - w.b), out.exponent) : 1.0;
  return out;
}

DecayFitPair tail_exponent(const Field& f, const Window& w) {
  return {fit_side(f, w, Side::left), fit_side(f, w, Side::right)};
}

}  // namespace stratwave
