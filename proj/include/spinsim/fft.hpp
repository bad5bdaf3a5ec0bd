#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

// In-place radix-2 complex FFT with precomputed twiddles and bit-reversal
// table. Unitary normalization: both directions carry a 1/sqrt(n) factor, so
// forward followed by inverse is the identity and Parseval holds without
// extra weights. Grid sizes are powers of two by construction, so radix-2 is
// all we need. A plan instance is not meant to be shared between concurrently
// running pipelines.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw ValidationError("FftPlan size must be a power of two >= 2");
    scale_ = 1.0 / std::sqrt(static_cast<double>(n));
    bitrev_.resize(n);
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n; ++b)
        if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
      bitrev_[i] = r;
    }
    // Twiddles for all stages, flattened: stage with block length `len`
    // contributes len/2 roots exp(-2 pi i j / len).
    twiddle_fwd_.reserve(n - 1);
    for (int len = 2; len <= n; len <<= 1) {
      for (int j = 0; j < len / 2; ++j) {
        const double ang = -2.0 * constants::pi * j / len;
        twiddle_fwd_.emplace_back(std::cos(ang), std::sin(ang));
      }
    }
  }

  int size() const { return n_; }

  void forward(Complex* a) const { transform(a, false); }
  void inverse(Complex* a) const { transform(a, true); }
  void forward(Field& a) const { check(a); transform(a.data(), false); }
  void inverse(Field& a) const { check(a); transform(a.data(), true); }

 private:
  void check(const Field& a) const {
    if (static_cast<int>(a.size()) != n_)
      throw ValidationError("field length does not match FFT plan size");
  }

  void transform(Complex* a, bool inverse) const {
    for (int i = 0; i < n_; ++i) {
      const int j = bitrev_[i];
      if (j > i) std::swap(a[i], a[j]);
    }
    const Complex* tw = twiddle_fwd_.data();
    const double conj_sign = inverse ? -1.0 : 1.0;
    for (int len = 2; len <= n_; len <<= 1) {
      const int half = len >> 1;
      for (int base = 0; base < n_; base += len) {
        for (int j = 0; j < half; ++j) {
          const double wr = tw[j].real();
          const double wi = conj_sign * tw[j].imag();
          Complex& lo = a[base + j];
          Complex& hi = a[base + j + half];
          const double hr = hi.real(), hx = hi.imag();
          const double vr = hr * wr - hx * wi;
          const double vi = hr * wi + hx * wr;
          const double lr = lo.real(), lx = lo.imag();
          lo = Complex(lr + vr, lx + vi);
          hi = Complex(lr - vr, lx - vi);
        }
      }
      tw += half;
    }
    for (int i = 0; i < n_; ++i) a[i] *= scale_;
  }

  int n_;
  double scale_;
  std::vector<int> bitrev_;
  std::vector<Complex> twiddle_fwd_;
};

}  // namespace spinsim
