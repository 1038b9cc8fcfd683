#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace pinnlab::vmath {

// Branch-free tanh that the compiler can vectorise. Rational approximation
// for |z| < 0.625, 1 - 2 / (exp(2|z|) + 1) above, with exp evaluated by a
// Pade form after reduction by powers of two (Cephes coefficients). Agrees
// with std::tanh to a few ulp.

inline double tanh_small(double z) {
  const double s = z * z;
  const double p = (-9.64399179425052238628e-1 * s - 9.92877231001918586564e1) * s - 1.61468768441708447952e3;
  const double q = ((s + 1.12811678491632931402e2) * s + 2.23548839060100448583e3) * s + 4.84406305325125486048e3;
  return z + z * s * (p / q);
}

// exp(x) for 0 <= x <= 45.
inline double exp_bounded(double x) {
  const double k = std::floor(1.4426950408889634073599 * x + 0.5);
  double r = x - k * 6.93145751953125e-1;
  r = r - k * 1.42860682030941723212e-6;
  const double rr = r * r;
  const double p = r * ((1.26177193074810590878e-4 * rr + 3.02994407707441961300e-2) * rr + 9.99999999999999999910e-1);
  const double q = ((3.00198505138664455042e-6 * rr + 2.52448340349684104192e-3) * rr + 2.27265548208155028766e-1) * rr +
                   2.00000000000000000009e0;
  const double e = 1.0 + 2.0 * (p / (q - p));
  // 2^k from the exponent bits; k + 2^52 holds k in its low mantissa bits.
  const std::uint64_t kbits = std::bit_cast<std::uint64_t>(k + 0x1p52) - std::bit_cast<std::uint64_t>(0x1p52);
  return e * std::bit_cast<double>((kbits + 1023u) << 52);
}

inline double tanh(double z) {
  const double a = std::fmin(std::fabs(z), 22.0);
  const double big = 1.0 - 2.0 / (exp_bounded(2.0 * a) + 1.0);
  const double mag = a < 0.625 ? tanh_small(a) : big;
  return std::copysign(mag, z);
}

inline void tanh(const double* in, double* out, std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) out[i] = vmath::tanh(in[i]);
}

}  // namespace pinnlab::vmath
