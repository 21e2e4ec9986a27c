#pragma once

// Complex log-Gamma and the Hurwitz zeta function, with the branch convention
// -pi < Arg <= pi throughout (so z^{-s} = |z|^{-s} exp(-i s Arg z)).

#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hasse_forge/error.hpp"

namespace hasse_forge {

using Complex = std::complex<double>;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr double kPi = std::numbers::pi;

/// Principal logarithm with Arg in (-pi, pi]; a negative real with a signed
/// zero imaginary part is put on the +pi side.
inline Complex principal_log(Complex z) {
  if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
  return std::log(z);
}

inline double principal_arg(Complex z) { return principal_log(z).imag(); }

/// z^{-s} with the principal branch.
inline Complex principal_pow_neg(Complex z, Complex s) { return std::exp(-s * principal_log(z)); }

/// Exact Bernoulli numbers B_0, ..., B_n with B_1 = -1/2.
inline std::vector<BigRational> bernoulli_numbers(unsigned n) {
  std::vector<BigRational> b(n + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    // sum_{k=0}^{m} C(m+1, k) B_k = 0
    BigRational acc = 0;
    boost::multiprecision::cpp_int binom = 1;  // C(m+1, 0)
    for (unsigned k = 0; k < m; ++k) {
      acc += BigRational(binom) * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -acc / BigRational(binom);
  }
  return b;
}

namespace detail {

inline constexpr unsigned kBernoulliTableSize = 90;

inline const std::vector<double>& bernoulli_table() {
  static const std::vector<double> table = [] {
    std::vector<double> out;
    for (const auto& r : bernoulli_numbers(kBernoulliTableSize)) out.push_back(r.convert_to<double>());
    return out;
  }();
  return table;
}

inline bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

}  // namespace detail

/// log Gamma(z), holomorphic on C minus (-inf, 0] and real on the positive
/// axis. Recurrence shifts Re(z) up to 15, then the Stirling series with
/// twelve Bernoulli terms.
inline Complex log_gamma(Complex z) {
  if (detail::is_nonpositive_integer(z)) {
    throw Error(ErrorKind::Pole, "log_gamma pole at " + std::to_string(z.real()));
  }
  constexpr double kShiftTarget = 15.0;
  Complex shift_sum = 0.0;
  Complex w = z;
  while (w.real() < kShiftTarget) {
    shift_sum += principal_log(w);
    w += 1.0;
  }
  const auto& bern = detail::bernoulli_table();
  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex power = inv;
  for (unsigned k = 1; k <= 12; ++k) {
    series += bern[2 * k] / (2.0 * k * (2.0 * k - 1.0)) * power;
    power *= inv2;
  }
  const Complex stirling = (w - 0.5) * principal_log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
  return stirling - shift_sum;
}

/// zeta_H(z, a) = sum_{k >= 0} (k + a)^{-z}, analytically continued in z.
/// Terms with Re(k + a) < 1 are summed directly; the rest by Euler-Maclaurin.
inline Complex hurwitz_zeta(Complex z, Complex a) {
  if (z == Complex(1.0, 0.0)) throw Error(ErrorKind::Pole, "hurwitz_zeta pole at z = 1");
  if (detail::is_nonpositive_integer(a)) throw Error(ErrorKind::BadParameter, "hurwitz_zeta needs a not in {0, -1, ...}");
  Complex head = 0.0;
  while (a.real() < 1.0) {
    head += principal_pow_neg(a, z);
    a += 1.0;
  }
  // The correction terms shrink while 2j < 2 pi |a + N|, so |a + N| ~ 6 + |z|
  // reaches double precision well before j = 40; a larger cut-off only adds
  // cancellation when Re(z) < 0.
  const double target = 6.0 + std::abs(z);
  unsigned n_direct = 0;
  while (std::abs(a + static_cast<double>(n_direct)) < target) ++n_direct;
  Complex direct = 0.0;
  for (unsigned k = 0; k < n_direct; ++k) direct += principal_pow_neg(a + static_cast<double>(k), z);
  const Complex x = a + static_cast<double>(n_direct);
  const Complex log_x = principal_log(x);
  const Complex x_neg_z = std::exp(-z * log_x);
  Complex tail = x * x_neg_z / (z - 1.0) + 0.5 * x_neg_z;
  const auto& bern = detail::bernoulli_table();
  // term_j = B_{2j} / (2j)! * z (z+1) ... (z+2j-2) * x^{-z-2j+1}
  Complex rising = z;       // z (z+1) ... (z + 2j - 2)
  Complex x_pow = x_neg_z / x;  // x^{-z-2j+1}
  double factorial = 2.0;   // (2j)!
  const Complex inv_x2 = 1.0 / (x * x);
  for (unsigned j = 1; j <= 40; ++j) {
    const Complex term = bern[2 * j] / factorial * rising * x_pow;
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(tail) + 1e-300) break;
    rising *= (z + (2.0 * j - 1.0)) * (z + 2.0 * j);
    x_pow *= inv_x2;
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return head + direct + tail;
}

/// d/dz zeta_H(z, a) at z = 0, by Lerch's formula log Gamma(a) - log(2 pi) / 2.
/// With the branch above this agrees with -sum Log(k + a) + zeta'_H(0, a + K)
/// for every shift K, so no restriction on Re(a) is needed.
inline Complex hurwitz_zeta_deriv0(Complex a) {
  if (detail::is_nonpositive_integer(a)) {
    throw Error(ErrorKind::BadParameter, "hurwitz_zeta_deriv0 needs a not in {0, -1, ...}");
  }
  return log_gamma(a) - 0.5 * std::log(2.0 * kPi);
}

}  // namespace hasse_forge
