#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stratwave/analysis.hpp"
#include "stratwave/error.hpp"
#include "stratwave/kernel.hpp"

using namespace stratwave;

namespace {

Model kdv(int m, int n, double eta = 1.0) { return {DispersionSymbol::kdv(), validate_params(m, n, 1, eta)}; }

double max_imag(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v.imag()));
  return m;
}

}  // namespace

TEST_CASE("kernel_hat") {
  const Model ost = preset("ost");
  for (double t : {0.1, 1.0, 4.0}) CHECK(kernel_hat(t, 0.0, ost) == cplx(1.0, 0.0));
  const Model m22 = kdv(2, 2);
  for (double xi = -12.0; xi <= 12.0; xi += 0.01) {
    CHECK(std::abs(kernel_hat(0.5, xi, m22)) == doctest::Approx(std::exp(-0.5 * xi * xi)).epsilon(1e-12));
  }
  // odd n = 3: dissipation is real, the phase comes from dispersion alone
  const Model m23 = kdv(2, 3);
  for (double xi = -3.0; xi <= 3.0; xi += 0.05) {
    const double a = std::abs(xi);
    const cplx want = std::exp(-(a * a * a + a * a)) * std::exp(cplx(0.0, xi * xi * xi));
    CHECK(std::abs(kernel_hat(1.0, xi, m23) - want) < 1e-14);
    CHECK(std::abs(cplx(kernel_hat_extended(1.0, xi, m23)) - want) < 1e-14);
  }
}

TEST_CASE("mass is one") {
  const Grid g(16384, 400.0);
  for (const char* name : {"ost", "gost:2", "gost:3", "bo_perturbed", "chen_lee", "dgbo_perturbed:0.5"}) {
    for (double t : {0.1, 0.5, 2.0, 5.0}) {
      CHECK(std::abs(mean(kernel_field(t, g, preset(name)).field) - 1.0) <= 1e-8);
    }
  }
  for (auto [m, n] : {std::pair{2, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 6}}) {
    CHECK(std::abs(mean(kernel_field(1.0, g, kdv(m, n)).field) - 1.0) <= 1e-8);
  }
}

TEST_CASE("even symbols give real kernels") {
  const Grid g(16384, 400.0);
  for (const char* name : {"ost", "bo_perturbed", "dgbo_perturbed:0.5"}) {
    const Field k = kernel_field(1.0, g, preset(name)).field;
    CHECK(k.is_real);
    CHECK(max_imag(k) <= 1e-10 * max_abs(k));
  }
}

TEST_CASE("semigroup") {
  const Grid g(16384, 400.0);
  for (const char* name : {"ost", "chen_lee", "dgbo_perturbed:0.5"}) {
    const Model md = preset(name);
    const Field a = kernel_field(0.4, g, md).field;
    const Field b = kernel_field(1.1, g, md).field;
    const Field c = kernel_field(1.5, g, md).field;
    CHECK(max_abs_diff(convolve(a, b), c) <= 1e-8 * max_abs(c));
  }
}

TEST_CASE("resolution precondition") {
  const Grid coarse(64, 400.0);
  try {
    kernel_field(1.0, coarse, preset("ost"));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnderResolved);
  }
  CHECK_THROWS_AS(kernel_field(0.0, Grid(1024, 10.0), preset("ost")), Error);
  CHECK_NOTHROW(check_resolution(1.0, Grid(4096, 400.0), preset("ost")));
}

TEST_CASE("leading jump and asymptotic coefficient") {
  CHECK(std::abs(leading_jump(validate_params(3, 1, 1, 0.5)) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(leading_jump(validate_params(3, 3, 1, 1.0)) - cplx(24.0, 0.0)) < 1e-12);
  CHECK(std::abs(leading_jump(validate_params(2, 2, 1, 1.0)) - cplx(0.0, -4.0)) < 1e-14);
  const ModelParams ost = validate_params(3, 1, 1, 1.0);
  CHECK(asymptotic_coefficient(1.0, ost) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(asymptotic_coefficient(2.0, ost) == doctest::Approx(2.0 / std::numbers::pi));
  CHECK(asymptotic_coefficient(1.0, validate_params(2, 2, 1, 1.0)) == doctest::Approx(2.0 / std::numbers::pi));
  const AsymptoticLaw law = asymptotic_law(1.0, validate_params(2, 4, 1, 1.0));
  CHECK(law.exponent == 5);
}

TEST_CASE("image contamination estimate") {
  // all periodic images of |x|^-2 at the window edge, summed directly
  double s = 0.0;
  for (int j = 1; j <= 1000000; ++j) s += std::pow(800.0 * j - 200.0, -2) + std::pow(800.0 * j + 200.0, -2);
  CHECK(image_contamination(200.0, 400.0, 2) == doctest::Approx(s * 200.0 * 200.0).epsilon(1e-5));
  CHECK(image_contamination(50.0, 4096.0, 2) < 1e-3);
  CHECK(image_contamination(100.0, 400.0, 4) < image_contamination(100.0, 400.0, 2));
}

TEST_CASE("tail exponent n + 1") {
  struct Case {
    int m, n;
    double t;
    Grid grid;
    Window w;
  };
  const Case cases[] = {
      {3, 1, 1.0, Grid(65536, 4096.0), {20.0, 200.0}},
      {2, 2, 1.0, Grid(65536, 4096.0), {50.0, 500.0}},
      {3, 2, 1.0, Grid(65536, 4096.0), {50.0, 500.0}},
      {2, 3, 1.0, Grid(65536, 4096.0), {50.0, 500.0}},
      {2, 4, 1.0, Grid(131072, 16384.0), {1500.0, 4000.0}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.m);
    CAPTURE(c.n);
    const DecayFitPair p = tail_exponent(kernel_field(c.t, c.grid, kdv(c.m, c.n)).field, c.w);
    CHECK(p.valid());
    CHECK(std::abs(p.left.exponent - (c.n + 1)) <= 0.1);
    CHECK(std::abs(p.right.exponent - (c.n + 1)) <= 0.1);
  }
}

TEST_CASE("asymptotic constant") {
  const Grid g(65536, 4096.0);
  for (auto [m, n, a, b] : {std::tuple{3, 1, 50.0, 200.0}, std::tuple{2, 2, 50.0, 500.0}}) {
    const Model md = kdv(m, n);
    const Field k = kernel_field(1.0, g, md).field;
    const double A = asymptotic_coefficient(1.0, md.params);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double ax = std::abs(g.x(q));
      if (ax < a || ax > b) continue;
      CHECK(std::abs(std::pow(ax, n + 1) * std::abs(k.values[q]) / A - 1.0) <= 0.05);
    }
  }
}

TEST_CASE("pointwise bound report") {
  const KernelField kf = kernel_field(1.0, Grid(65536, 4096.0), preset("ost"));
  const BoundReport r = verify_pointwise_bound(kf, {20.0, 200.0});
  CHECK(r.passes);
  CHECK(std::isfinite(r.fitted_C));
  CHECK(r.refinement_change <= 0.1);
  CHECK(r.tail.mean_exponent() == doctest::Approx(2.0).epsilon(0.05));

  const KernelField k4 = kernel_field(0.5, Grid(131072, 16384.0), kdv(2, 4));
  const BoundReport r4 = verify_pointwise_bound(k4, {1500.0, 4000.0});
  CHECK(r4.passes);
  CHECK(std::abs(r4.tail.left.slope + 5.0) <= 0.2);
  CHECK(std::abs(r4.tail.right.slope + 5.0) <= 0.2);

  try {
    verify_pointwise_bound(kf, {20.0, 3000.0});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowContaminated);
  }
}

TEST_CASE("kernel derivative") {
  const Grid g(65536, 400.0);
  const Model ost = preset("ost");
  const Field k = kernel_field(1.0, g, ost).field;
  const Field dk = kernel_derivative_field(1.0, g, ost);
  CHECK(std::abs(mean(dk)) < 1e-10);
  // fourth-order central differences in the interior
  const double h = g.dx();
  double worst = 0.0;
  for (std::size_t q = 2; q + 2 < g.size(); ++q) {
    if (std::abs(g.x(q)) > 100.0) continue;
    const cplx fd = (-k.values[q + 2] + 8.0 * k.values[q + 1] - 8.0 * k.values[q - 1] + k.values[q - 2]) / (12.0 * h);
    worst = std::max(worst, std::abs(fd - dk.values[q]));
  }
  CHECK(worst <= 1e-6);

  const Field dk_far = kernel_derivative_field(1.0, Grid(65536, 4096.0), ost);
  const DecayFitPair p = tail_exponent(dk_far, {20.0, 200.0});
  CHECK(std::abs(p.left.slope + 3.0) <= 0.15);
  CHECK(std::abs(p.right.slope + 3.0) <= 0.15);
}
