#include <cmath>

#include "doctest.h"
#include "stratwave/error.hpp"
#include "stratwave/fit.hpp"

using namespace stratwave;

namespace {

ErrorCode fit_error(const Field& f, const Window& w) {
  try {
    tail_exponent(f, w);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("least squares recovers an exact line") {
  const double x[] = {0, 1, 2, 3, 4};
  double y[5];
  for (int i = 0; i < 5; ++i) y[i] = 2.5 - 1.5 * x[i];
  const LineFit f = least_squares(x, y, 5);
  CHECK(f.slope == doctest::Approx(-1.5));
  CHECK(f.intercept == doctest::Approx(2.5));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.stderr_slope < 1e-12);
}

TEST_CASE("rational tail (1 + x^2)^-1") {
  const Grid g(65536, 400.0);
  const Field f = Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
  const DecayFitPair p = tail_exponent(f, {20.0, 200.0});
  CHECK(p.valid());
  CHECK(p.left.exponent == doctest::Approx(2.0).epsilon(0.01));
  CHECK(p.right.exponent == doctest::Approx(2.0).epsilon(0.01));
  CHECK(p.left.side == Side::left);
  CHECK(p.right.side == Side::right);
  CHECK(p.right.wrap_ratio == doctest::Approx(std::pow(200.0 / 600.0, p.right.exponent)).epsilon(1e-9));
}

TEST_CASE("exact power laws over one decade") {
  const Grid g(65536, 400.0);
  for (double e : {0.5, 1.0, 2.0, 3.3, 5.0}) {
    const Field f = Field::sample(g, [e](double x) { return std::pow(std::abs(x) + 1e-300, -e); });
    const DecayFitPair p = tail_exponent(f, {15.0, 150.0});
    CHECK(std::abs(p.left.exponent - e) <= 0.02);
    CHECK(std::abs(p.right.exponent - e) <= 0.02);
  }
}

TEST_CASE("asymmetric tails are reported per side") {
  const Grid g(65536, 400.0);
  const Field f = Field::sample(g, [](double x) { return x < 0 ? std::pow(1 + x * x, -1.0) : std::pow(1 + x * x, -1.5); });
  const DecayFitPair p = tail_exponent(f, {20.0, 200.0});
  CHECK(p.left.exponent == doctest::Approx(2.0).epsilon(0.01));
  CHECK(p.right.exponent == doctest::Approx(3.0).epsilon(0.01));
  CHECK(fit_side(f, {20.0, 200.0}, Side::right).exponent == doctest::Approx(p.right.exponent));
}

TEST_CASE("scale equivariance") {
  const Grid g(65536, 400.0);
  const Field f = Field::sample(g, [](double x) { return std::exp(-std::abs(x) / 300.0) / (1.0 + x * x); });
  Field h = f;
  for (auto& v : h.values) v *= -37.5;
  const DecayFitPair a = tail_exponent(f, {20.0, 200.0});
  const DecayFitPair b = tail_exponent(h, {20.0, 200.0});
  CHECK(b.right.slope == doctest::Approx(a.right.slope).epsilon(1e-12));
  CHECK(b.left.slope == doctest::Approx(a.left.slope).epsilon(1e-12));
  CHECK(b.right.intercept - a.right.intercept == doctest::Approx(std::log(37.5)));
}

TEST_CASE("oscillating fields fail the r-squared gate") {
  const Grid g(65536, 400.0);
  const Field f = Field::sample(g, [](double x) { return std::cos(x) + 1.05; });
  CHECK_FALSE(tail_exponent(f, {20.0, 200.0}).valid());
}

TEST_CASE("window preconditions") {
  const Grid g(65536, 400.0);
  const Field f = Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
  CHECK(fit_error(f, {0.0, 100.0}) == ErrorCode::WindowContaminated);
  CHECK(fit_error(f, {50.0, 40.0}) == ErrorCode::WindowContaminated);
  CHECK(fit_error(f, {20.0, 201.0}) == ErrorCode::WindowContaminated);
  CHECK(fit_error(f, {100.0, 150.0}) == ErrorCode::InsufficientDecades);
  const Grid coarse(64, 400.0);
  const Field fc = Field::sample(coarse, [](double x) { return 1.0 / (1.0 + x * x); });
  CHECK(fit_error(fc, {20.0, 200.0}) == ErrorCode::InsufficientDecades);
}

TEST_CASE("log-spaced nodes stay inside the window on one side") {
  const Grid g(65536, 400.0);
  const auto r = log_spaced_nodes(g, {20.0, 200.0}, Side::right);
  const auto l = log_spaced_nodes(g, {20.0, 200.0}, Side::left);
  CHECK(r.size() >= 90);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(g.x(r[i]) >= 20.0 - g.dx());
    CHECK(g.x(r[i]) <= 200.0 + g.dx());
    if (i > 0) CHECK(g.x(r[i]) > g.x(r[i - 1]));
  }
  for (std::size_t i : l) CHECK(g.x(i) < 0.0);
}
