#include "stratwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "stratwave/error.hpp"

namespace stratwave {

namespace {

// FFTW planning is not thread-safe, execution on fresh arrays is. Plans are
// made once per (N, direction) for unaligned out-of-place use and reused via
// the new-array execute interface.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = plans_[{n, sign}];
    if (!slot) {
      std::vector<cplx> a(n), b(n);
      slot = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return slot;
  }

  fftwl_plan get_long(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = plans_l_[{n, sign}];
    if (!slot) {
      std::vector<cplxl> a(n), b(n);
      slot = fftwl_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftwl_complex*>(a.data()),
                               reinterpret_cast<fftwl_complex*>(b.data()), sign,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return slot;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
  std::map<std::pair<std::size_t, int>, fftwl_plan> plans_l_;
};

void fft(std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
  fftw_plan p = PlanCache::instance().get(in.size(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::size_t N, double L) : n_(N), l_(L) {
  if (!power_of_two(N) || N < 16) {
    throw Error(ErrorCode::BadParameter, "grid size must be a power of two >= 16, got " + std::to_string(N));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::BadParameter, "grid half-length must be finite and > 0");
  }
}

double Grid::dxi() const noexcept { return std::numbers::pi / l_; }

std::vector<double> Grid::xs() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = x(k);
  return out;
}

Field::Field(const Grid& g, std::vector<cplx> v, bool real) : grid(g), values(std::move(v)), is_real(real) {
  if (values.size() != g.size()) throw Error(ErrorCode::GridMismatch, "sample count does not match grid");
}

Field Field::sample(const Grid& g, const std::function<double(double)>& f) {
  Field out(g, true);
  for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = f(g.x(k));
  return out;
}

SpectralField::SpectralField(const Grid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != g.size()) throw Error(ErrorCode::GridMismatch, "coefficient count does not match grid");
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::GridMismatch, "grids differ: (N=" + std::to_string(a.size()) + ", L=" +
                                             std::to_string(a.half_length()) + ") vs (N=" +
                                             std::to_string(b.size()) + ", L=" +
                                             std::to_string(b.half_length()) + ")");
  }
}

void forward_transform(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  if (in.size() != g.size()) throw Error(ErrorCode::GridMismatch, "field length does not match grid");
  if (&in == &out) {
    std::vector<cplx> copy = in;
    forward_transform(g, copy, out);
    return;
  }
  out.resize(g.size());
  // out-of-place complex transforms leave the input untouched
  fft(const_cast<std::vector<cplx>&>(in), out, FFTW_FORWARD);
  const double dx = g.dx();
  for (std::size_t q = 0; q < g.size(); ++q) out[q] *= (q % 2 == 0 ? dx : -dx);
}

void inverse_transform(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  if (in.size() != g.size()) throw Error(ErrorCode::GridMismatch, "spectrum length does not match grid");
  thread_local std::vector<cplx> scratch;
  scratch.resize(g.size());
  const double s = 1.0 / (2.0 * g.half_length());
  for (std::size_t q = 0; q < g.size(); ++q) scratch[q] = in[q] * (q % 2 == 0 ? s : -s);
  out.resize(g.size());
  fft(scratch, out, FFTW_BACKWARD);
}

SpectralField to_spectral(const Field& f) {
  SpectralField out(f.grid);
  forward_transform(f.grid, f.values, out.coeffs);
  return out;
}

Field to_physical(const SpectralField& F, bool is_real) {
  Field out(F.grid, is_real);
  inverse_transform(F.grid, F.coeffs, out.values);
  return out;
}

std::vector<cplx> to_physical_extended(const Grid& g, const std::vector<cplxl>& coeffs) {
  if (coeffs.size() != g.size()) throw Error(ErrorCode::GridMismatch, "spectrum length does not match grid");
  const std::size_t n = g.size();
  std::vector<cplxl> in(n), out(n);
  const long double s = 1.0L / (2.0L * static_cast<long double>(g.half_length()));
  for (std::size_t q = 0; q < n; ++q) in[q] = coeffs[q] * (q % 2 == 0 ? s : -s);
  fftwl_plan p = PlanCache::instance().get_long(n, FFTW_BACKWARD);
  fftwl_execute_dft(p, reinterpret_cast<fftwl_complex*>(in.data()), reinterpret_cast<fftwl_complex*>(out.data()));
  std::vector<cplx> res(n);
  for (std::size_t k = 0; k < n; ++k) res[k] = cplx(static_cast<double>(out[k].real()), static_cast<double>(out[k].imag()));
  return res;
}

SpectralField derivative(const SpectralField& F) {
  SpectralField out = F;
  const std::size_t n = F.grid.size();
  for (std::size_t q = 0; q < n; ++q) {
    out.coeffs[q] = q == n / 2 ? cplx(0.0) : F.coeffs[q] * cplx(0.0, F.grid.frequency(q));
  }
  return out;
}

Field derivative(const Field& f) { return to_physical(derivative(to_spectral(f)), f.is_real); }

SpectralField hilbert(const SpectralField& F) {
  SpectralField out = F;
  for (std::size_t q = 0; q < F.grid.size(); ++q) {
    const long j = F.grid.mode(q);
    const double sgn = j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0);
    out.coeffs[q] = F.coeffs[q] * cplx(0.0, sgn);
  }
  return out;
}

Field hilbert(const Field& f) {
  const SpectralField F = to_spectral(f);
  double peak = 0.0;
  for (const auto& c : F.coeffs) peak = std::max(peak, std::abs(c));
  // The unpaired Nyquist mode turns imaginary under i sign(xi).
  const bool real = f.is_real && std::abs(F.coeffs[f.grid.size() / 2]) <= 1e-10 * peak;
  return to_physical(hilbert(F), real);
}

long dealias_cutoff(std::size_t N, int k) {
  if (k < 1) throw Error(ErrorCode::BadParameter, "dealias order k must be >= 1");
  return static_cast<long>(N) / (k + 2);
}

void dealias_inplace(std::vector<cplx>& coeffs, std::size_t N, int k) {
  const long cut = dealias_cutoff(N, k);
  for (std::size_t q = 0; q < N; ++q) {
    const long j = q < N / 2 ? static_cast<long>(q) : static_cast<long>(q) - static_cast<long>(N);
    if (std::labs(j) > cut) coeffs[q] = 0.0;
  }
}

SpectralField dealias(const SpectralField& F, int k) {
  SpectralField out = F;
  dealias_inplace(out.coeffs, F.grid.size(), k);
  return out;
}

Field convolve(const Field& f, const Field& g) {
  require_same_grid(f.grid, g.grid);
  SpectralField F = to_spectral(f);
  const SpectralField G = to_spectral(g);
  for (std::size_t q = 0; q < F.coeffs.size(); ++q) F.coeffs[q] *= G.coeffs[q];
  return to_physical(F, f.is_real && g.is_real);
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid.dx());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid);
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace stratwave
