#pragma once

// Periodic box [-L, L) standing in for the real line.
//
// Samples sit at x_k = -L + k dx, k = 0..N-1. Spectral coefficients
// approximate the continuous transform u^(xi) = int u(x) e^{-i x xi} dx at
// xi_j = (pi/L) j and are stored in FFT order (index q holds mode j = q for
// q < N/2 and j = q - N otherwise). With that scaling
//
//   c_j = dx (-1)^j sum_k f_k e^{-2 pi i j k / N},
//   f_k = (1/2L) sum_j c_j (-1)^j e^{2 pi i j k / N},
//
// and Parseval reads  sum_k |f_k|^2 dx = (dxi / 2pi) sum_j |c_j|^2, dxi = pi/L.
// Products of coefficients are transforms of continuous convolutions, so a
// kernel is applied by pointwise multiplication with no extra factors.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace stratwave {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

class Grid {
 public:
  /// N must be a power of two >= 16 and L > 0; otherwise BadParameter.
  Grid(std::size_t N, double L);

  std::size_t size() const noexcept { return n_; }
  double half_length() const noexcept { return l_; }
  double dx() const noexcept { return 2.0 * l_ / static_cast<double>(n_); }
  double dxi() const noexcept;
  double x(std::size_t k) const noexcept { return -l_ + static_cast<double>(k) * dx(); }
  /// Signed mode number j of FFT-order index q.
  long mode(std::size_t q) const noexcept {
    return q < n_ / 2 ? static_cast<long>(q) : static_cast<long>(q) - static_cast<long>(n_);
  }
  double frequency(std::size_t q) const noexcept { return static_cast<double>(mode(q)) * dxi(); }
  double nyquist() const noexcept { return static_cast<double>(n_ / 2) * dxi(); }
  std::vector<double> xs() const;

  bool operator==(const Grid& o) const noexcept { return n_ == o.n_ && l_ == o.l_; }

 private:
  std::size_t n_;
  double l_;
};

struct Field {
  Grid grid;
  std::vector<cplx> values;
  bool is_real = true;

  explicit Field(const Grid& g, bool real = true) : grid(g), values(g.size()), is_real(real) {}
  Field(const Grid& g, std::vector<cplx> v, bool real);
  /// Samples f(x_k).
  static Field sample(const Grid& g, const std::function<double(double)>& f);
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;

  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}
  SpectralField(const Grid& g, std::vector<cplx> c);
};

SpectralField to_spectral(const Field& f);
/// is_real of the result is a hint; pass true when the spectrum is known to be
/// conjugate symmetric.
Field to_physical(const SpectralField& F, bool is_real = false);

/// Same transforms on raw arrays in FFT order; `out` is resized as needed.
void forward_transform(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out);
void inverse_transform(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out);

/// Inverse transform evaluated in extended precision. Used where the field
/// spans more decades than double-precision FFT roundoff allows.
std::vector<cplx> to_physical_extended(const Grid& g, const std::vector<cplxl>& coeffs);

/// Multiplier i xi; the Nyquist mode is dropped so real fields stay real.
Field derivative(const Field& f);
SpectralField derivative(const SpectralField& F);

/// Multiplier i sign(xi), sign(0) = 0. The Nyquist mode (xi = -N/2 dxi) has
/// sign -1, which keeps hilbert(hilbert(f)) = -f exact on mean-zero fields.
Field hilbert(const Field& f);
SpectralField hilbert(const SpectralField& F);

/// Zeroes modes with |j| > N/(k+2); keeps the fraction 2/(k+2) of the band.
SpectralField dealias(const SpectralField& F, int k);
void dealias_inplace(std::vector<cplx>& coeffs, std::size_t N, int k);
/// Largest retained |j| for the given (N, k).
long dealias_cutoff(std::size_t N, int k);

/// Continuous convolution (f * g)(x) = int f(x-y) g(y) dy on the periodic box.
Field convolve(const Field& f, const Field& g);

/// sqrt(sum |f|^2 dx)
double l2_norm(const Field& f);
double max_abs(const Field& f);
double max_abs_diff(const Field& a, const Field& b);

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace stratwave
