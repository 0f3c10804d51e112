#pragma once

// Log-log tail fitting on the two half-lines of a sampled field.

#include <cstddef>
#include <string>
#include <vector>

#include "stratwave/spectral.hpp"

namespace stratwave {

enum class Side { left, right };

std::string to_string(Side s);

/// Distance range a <= |x| <= b measured from the origin.
struct Window {
  double a = 20.0;
  double b = 200.0;
};

struct DecayFit {
  Side side = Side::right;
  Window window;
  double slope = 0.0;     // d log|f| / d log|x|
  double exponent = 0.0;  // -slope
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  bool valid = false;  // r_squared >= 0.98
  /// Power-law estimate of the periodic image at the outer edge relative to
  /// the value there, (b / (2L - b))^exponent. Diagnostic only.
  double wrap_ratio = 0.0;
};

struct DecayFitPair {
  DecayFit left;
  DecayFit right;

  double mean_exponent() const { return 0.5 * (left.exponent + right.exponent); }
  bool valid() const { return left.valid && right.valid; }
};

inline constexpr double kMinRSquared = 0.98;
inline constexpr double kMinDecades = 0.3;
inline constexpr double kMinPointsPerDecade = 30.0;

/// Least-squares slope of log|f| against log|x| on log-spaced grid nodes in
/// the window, each half-line separately.
/// WindowContaminated when the window is empty, starts at 0, or reaches past
/// L/2; InsufficientDecades when it spans < 0.3 decades or the grid holds
/// fewer than 30 distinct nodes per decade in it.
DecayFitPair tail_exponent(const Field& f, const Window& w);

/// Single-side version of tail_exponent.
DecayFit fit_side(const Field& f, const Window& w, Side side);

/// Plain least-squares line y = intercept + slope x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 0.0;
};
LineFit least_squares(const double* x, const double* y, std::size_t n);

/// Grid indices whose |x| lands nearest to log-spaced targets in [a, b] on
/// one side, deduplicated, ordered by distance.
std::vector<std::size_t> log_spaced_nodes(const Grid& g, const Window& w, Side side, double per_decade = 100.0);

}  // namespace stratwave
