#ifndef SUPERHAM_RATIONAL_HPP
#define SUPERHAM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace superham {

/// Scalar field of every coefficient in the library.
///
/// All arithmetic is exact. The type is referenced only through this alias,
/// so a Gaussian-rational type with the same value semantics (construction
/// from integers, + - * /, ==, sgn, get_str) can be substituted here without
/// touching any algorithm.
using Rational = mpq_class;
using Integer = mpz_class;

inline Integer factorial(std::uint64_t n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Binomial coefficient, zero outside 0 <= k <= n.
inline Integer binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    return 0;
  }
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// x (x-1) ... (x-k+1); the empty product for k == 0.
inline Integer fallingFactorial(std::int64_t x, std::int64_t k) {
  Integer r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= Integer(static_cast<long>(x - i));
  }
  return r;
}

inline Rational makeRational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Canonical surface form: "4", "-3/2".
inline std::string toString(const Rational& q) { return q.get_str(); }

/// Parses "4", "-3/2". Throws std::invalid_argument on malformed input
/// or a zero denominator.
inline Rational parseRational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
  if (r.get_den() == 0) {
    throw std::invalid_argument("zero denominator in '" + text + "'");
  }
  r.canonicalize();
  return r;
}

inline int signPower(std::int64_t exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace superham

#endif  // SUPERHAM_RATIONAL_HPP
