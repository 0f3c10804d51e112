#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stratwave/error.hpp"
#include "stratwave/spectral.hpp"

using namespace stratwave;

namespace {

Field random_field(const Grid& g, unsigned seed, bool real) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Field f(g, real);
  for (auto& v : f.values) v = real ? cplx(d(rng), 0.0) : cplx(d(rng), d(rng));
  return f;
}

double rel_diff(const Field& a, const Field& b) { return max_abs_diff(a, b) / std::max(max_abs(b), 1e-300); }

// Field built from modes |j| <= jmax only, so derivative and Hilbert act exactly.
Field band_limited(const Grid& g, long jmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  SpectralField F(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const long j = g.mode(q);
    if (j > 0 && j <= jmax) {
      F.coeffs[q] = cplx(d(rng), d(rng));
      F.coeffs[g.size() - q] = std::conj(F.coeffs[q]);
    }
  }
  return to_physical(F, true);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(64, 3.0);
  CHECK(g.dx() * 64 == doctest::Approx(6.0));
  CHECK(g.dxi() == doctest::Approx(std::numbers::pi / 3.0));
  CHECK(g.x(0) == -3.0);
  CHECK(g.nyquist() == doctest::Approx(std::numbers::pi / g.dx()));
  CHECK(g.mode(31) == 31);
  CHECK(g.mode(32) == -32);
  CHECK(g.mode(63) == -1);
  CHECK(g.xs().size() == 64);
  CHECK_THROWS_AS(Grid(48, 1.0), Error);
  CHECK_THROWS_AS(Grid(8, 1.0), Error);
  CHECK_THROWS_AS(Grid(64, -1.0), Error);
}

TEST_CASE("constant field has its spectrum at zero") {
  const Grid g(128, 10.0);
  const Field one = Field::sample(g, [](double) { return 1.0; });
  const SpectralField F = to_spectral(one);
  CHECK(F.coeffs[0].real() == doctest::Approx(20.0));
  for (std::size_t q = 1; q < g.size(); ++q) CHECK(std::abs(F.coeffs[q]) < 1e-12);
}

TEST_CASE("cosine gives two symmetric coefficients") {
  const Grid g(128, 10.0);
  const double w = 3.0 * g.dxi();
  const SpectralField F = to_spectral(Field::sample(g, [&](double x) { return std::cos(w * x); }));
  for (std::size_t q = 0; q < g.size(); ++q) {
    const long j = g.mode(q);
    if (j == 3 || j == -3) {
      CHECK(std::abs(F.coeffs[q]) == doctest::Approx(10.0));
    } else {
      CHECK(std::abs(F.coeffs[q]) < 1e-12);
    }
  }
  CHECK(std::abs(F.coeffs[3] - F.coeffs[125]) < 1e-12);
}

TEST_CASE("round trip is the identity for N from 2^4 to 2^20") {
  for (std::size_t N = 16; N <= (1u << 20); N *= 2) {
    const Grid g(N, 7.0);
    for (bool real : {true, false}) {
      const Field f = random_field(g, static_cast<unsigned>(N), real);
      CHECK(rel_diff(to_physical(to_spectral(f), real), f) <= 1e-12);
    }
  }
}

TEST_CASE("Parseval") {
  const Grid g(1024, 12.0);
  const Field f = random_field(g, 5, false);
  const SpectralField F = to_spectral(f);
  double s = 0.0;
  for (const auto& c : F.coeffs) s += std::norm(c);
  CHECK(std::sqrt(s * g.dxi() / (2.0 * std::numbers::pi)) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("raw transforms allow aliasing input and output") {
  const Grid g(256, 4.0);
  const Field f = random_field(g, 9, false);
  std::vector<cplx> v = f.values;
  forward_transform(g, v, v);
  inverse_transform(g, v, v);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - f.values[i]) < 1e-12);
}

TEST_CASE("extended inverse matches the double one") {
  const Grid g(512, 6.0);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
  const SpectralField F = to_spectral(f);
  std::vector<cplxl> cl(F.coeffs.begin(), F.coeffs.end());
  const std::vector<cplx> back = to_physical_extended(g, cl);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(std::abs(back[i] - f.values[i]) < 1e-14);
}

TEST_CASE("derivative") {
  const Grid g(256, 5.0);
  const double w = std::numbers::pi / 5.0;
  const Field s = Field::sample(g, [&](double x) { return std::sin(w * x); });
  const Field ds = derivative(s);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(ds.values[k] - w * std::cos(w * g.x(k))) < 1e-10);

  const Field c = Field::sample(g, [](double) { return 3.0; });
  CHECK(max_abs(derivative(c)) < 1e-12);

  Field e(g, false);
  const double w4 = 4.0 * w;
  for (std::size_t k = 0; k < g.size(); ++k) e.values[k] = std::exp(cplx(0, w4 * g.x(k)));
  const Field de = derivative(e);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(de.values[k] - cplx(0, w4) * e.values[k]) < 1e-10);
}

TEST_CASE("hilbert") {
  const Grid g(256, 5.0);
  const double w = 2.0 * std::numbers::pi / 5.0;
  // i sign(xi) sends cos to -sin
  const Field h = hilbert(Field::sample(g, [&](double x) { return std::cos(w * x); }));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(h.values[k] + std::sin(w * g.x(k))) < 1e-12);
  CHECK(max_abs(hilbert(Field::sample(g, [](double) { return 2.0; }))) < 1e-12);
}

TEST_CASE("hilbert squared is minus the identity on mean-zero fields") {
  for (std::size_t N : {16u, 256u, 4096u}) {
    const Grid g(N, 3.0);
    Field f = random_field(g, 11, true);
    cplx m = 0.0;
    for (const auto& v : f.values) m += v;
    m /= static_cast<double>(N);
    for (auto& v : f.values) v -= m;
    const Field hh = hilbert(hilbert(f));
    for (std::size_t i = 0; i < N; ++i) CHECK(std::abs(hh.values[i] + f.values[i]) < 1e-10);
  }
}

TEST_CASE("derivative commutes with hilbert on band-limited fields") {
  const Grid g(512, 8.0);
  const Field f = band_limited(g, 100, 3);
  CHECK(max_abs_diff(derivative(hilbert(f)), hilbert(derivative(f))) <= 1e-10 * max_abs(derivative(f)));
}

TEST_CASE("dealias rule arithmetic") {
  CHECK(dealias_cutoff(16, 1) == 5);
  CHECK(dealias_cutoff(32, 3) == 6);
  const Grid g(16, 1.0);
  SpectralField F(g);
  for (auto& c : F.coeffs) c = 1.0;
  const SpectralField D = dealias(F, 1);
  for (std::size_t q = 0; q < 16; ++q) CHECK(std::abs(D.coeffs[q]) == (std::abs(g.mode(q)) > 5 ? 0.0 : 1.0));
  const Grid g32(32, 1.0);
  SpectralField G(g32);
  for (auto& c : G.coeffs) c = 1.0;
  const SpectralField D3 = dealias(G, 3);
  for (std::size_t q = 0; q < 32; ++q) CHECK(std::abs(D3.coeffs[q]) == (std::abs(g32.mode(q)) > 6 ? 0.0 : 1.0));
}

TEST_CASE("dealias is an idempotent projection") {
  const Grid g(1024, 4.0);
  const SpectralField F = to_spectral(random_field(g, 21, false));
  for (int k : {1, 2, 3}) {
    const SpectralField once = dealias(F, k);
    const SpectralField twice = dealias(once, k);
    CHECK(once.coeffs == twice.coeffs);
    CHECK(l2_norm(to_physical(once)) <= l2_norm(to_physical(F)) + 1e-12);
    std::vector<cplx> raw = F.coeffs;
    dealias_inplace(raw, g.size(), k);
    CHECK(raw == once.coeffs);
  }
}

TEST_CASE("convolution of Gaussians") {
  const Grid g(4096, 40.0);
  auto gauss = [](double s) {
    return [s](double x) { return std::exp(-x * x / (2 * s * s)) / (s * std::sqrt(2 * std::numbers::pi)); };
  };
  const Field a = Field::sample(g, gauss(1.0));
  const Field b = Field::sample(g, gauss(2.0));
  const Field want = Field::sample(g, gauss(std::sqrt(5.0)));
  CHECK(max_abs_diff(convolve(a, b), want) < 1e-12);
}

TEST_CASE("grid mismatches are rejected") {
  const Field a(Grid(64, 1.0));
  const Field b(Grid(64, 2.0));
  try {
    convolve(a, b);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
  CHECK_THROWS_AS(max_abs_diff(a, b), Error);
}

TEST_CASE("norms") {
  const Grid g(1024, 10.0);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(l2_norm(f) == doctest::Approx(std::pow(std::numbers::pi / 2.0, 0.25)).epsilon(1e-12));
  CHECK(max_abs(f) == doctest::Approx(1.0));
}
