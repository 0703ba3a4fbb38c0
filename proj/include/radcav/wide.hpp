#pragma once

// Quad-precision complex arithmetic for the noise-moment series. The chain
// series for a detuned CW pump has terms up to ~1e20 times larger than its
// sum, so the moments and the summation carry 113-bit mantissas.

#include <complex>

namespace radcav {

using wide_real = __float128;

struct wide_complex {
  wide_real re = 0;
  wide_real im = 0;

  wide_complex() = default;
  constexpr wide_complex(wide_real r, wide_real i) : re(r), im(i) {}
  explicit wide_complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_double() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  wide_real norm() const { return re * re + im * im; }

  friend wide_complex operator+(wide_complex a, wide_complex b) { return {a.re + b.re, a.im + b.im}; }
  friend wide_complex operator*(wide_complex a, wide_complex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend wide_complex operator*(wide_complex a, wide_real s) { return {a.re * s, a.im * s}; }
  wide_complex& operator+=(wide_complex b) {
    re += b.re;
    im += b.im;
    return *this;
  }
};

inline wide_real wide_abs(wide_real x) { return x < 0 ? -x : x; }

}  // namespace radcav
