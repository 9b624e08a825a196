#pragma once

// Value-semantic wrappers over MPFR floats and GMP rationals.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "pipowers/errors.hpp"

namespace pipowers {

using Rational = mpq_class;
using Integer = mpz_class;

/// Arbitrary-precision binary float with an explicit precision in bits.
/// Every arithmetic result is correctly rounded to nearest; binary operators
/// produce a value at the larger of the two operand precisions.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits = 64) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_zero(v_, 1);
  }
  BigReal(long value, mpfr_prec_t bits) : BigReal(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }
  BigReal(const Integer& value, mpfr_prec_t bits) : BigReal(bits) {
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  BigReal(const Rational& value, mpfr_prec_t bits) : BigReal(bits) {
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  /// Rounds `value` (at any precision) to `bits`.
  BigReal(const BigReal& value, mpfr_prec_t bits) : BigReal(bits) {
    mpfr_set(v_, value.v_, MPFR_RNDN);
  }

  BigReal(const BigReal& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigReal& operator=(const BigReal& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  /// Parses a decimal (or "inf"/"nan") literal, correctly rounded to `bits`.
  static BigReal parse(std::string_view text, mpfr_prec_t bits) {
    BigReal r(bits);
    std::string s(text);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw ParameterError("not a decimal number: '" + s + "'");
    return r;
  }

  static BigReal pow2(long exponent, mpfr_prec_t bits) {
    BigReal r(1, bits);
    mpfr_mul_2si(r.v_, r.v_, exponent, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact value as a dyadic rational; throws for non-finite values.
  Rational to_rational() const {
    if (!is_finite()) throw ParameterError("cannot convert a non-finite value to a rational");
    Integer mantissa;
    mpfr_exp_t e = mpfr_get_z_2exp(mantissa.get_mpz_t(), v_);
    Rational r(mantissa);
    if (e >= 0)
      mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
      mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    r.canonicalize();
    return r;
  }

  /// Shortest decimal string that reads back to the same value at this precision.
  std::string to_string() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
    if (is_zero()) return "0";
    mpfr_exp_t exp10 = 0;
    char* raw_digits = mpfr_get_str(nullptr, &exp10, 10, 0, v_, MPFR_RNDN);
    std::string digits(raw_digits);
    mpfr_free_str(raw_digits);
    std::string out;
    if (digits.front() == '-') {
      out.push_back('-');
      digits.erase(0, 1);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    // value = 0.DIGITS * 10^exp10
    if (exp10 > 0 && exp10 <= 40) {
      auto point = static_cast<std::size_t>(exp10);
      if (digits.size() <= point) {
        out += digits + std::string(point - digits.size(), '0');
      } else {
        out += digits.substr(0, point) + "." + digits.substr(point);
      }
    } else if (exp10 <= 0 && exp10 > -6) {
      out += "0." + std::string(static_cast<std::size_t>(-exp10), '0') + digits;
    } else {
      out += digits.substr(0, 1);
      if (digits.size() > 1) out += "." + digits.substr(1);
      out += "e" + std::to_string(static_cast<long>(exp10) - 1);
    }
    return out;
  }

  /// log10|x| as a double (for digit counts); -inf for zero.
  double log10_abs() const {
    if (is_zero()) return -INFINITY;
    BigReal t(64);
    mpfr_abs(t.v_, v_, MPFR_RNDN);
    mpfr_log10(t.v_, t.v_, MPFR_RNDN);
    return t.to_double();
  }

  BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
  BigReal& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }
  BigReal& operator*=(const Integer& o) { mpfr_mul_z(v_, v_, o.get_mpz_t(), MPFR_RNDN); return *this; }
  BigReal& operator*=(const Rational& o) { mpfr_mul_q(v_, v_, o.get_mpq_t(), MPFR_RNDN); return *this; }

  friend BigReal operator-(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.precision(), b.precision()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.precision(), b.precision()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.precision(), b.precision()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(BigReal a, long b) { return a *= b; }
  friend BigReal operator*(long b, BigReal a) { return a *= b; }
  friend BigReal operator/(BigReal a, long b) { return a /= b; }
  friend BigReal operator*(BigReal a, const Rational& b) { return a *= b; }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  static mpfr_prec_t clamp(mpfr_prec_t bits) { return std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN); }
  mpfr_t v_;
};

inline BigReal abs(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline BigReal pow(const BigReal& x, long n) {
  BigReal r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

inline BigReal sqrt(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline BigReal sin(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sin(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline BigReal max(const BigReal& a, const BigReal& b) { return (a < b) ? b : a; }

/// pi, correctly rounded to `bits`.
inline BigReal const_pi(mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

/// Parses "p/q" or "p" (integers only; decimals are rejected).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid = !s.empty() && s.find_first_not_of("+-0123456789/") == std::string::npos &&
               s.find('/') == s.rfind('/');
  Rational r;
  if (!valid || r.set_str(s, 10) != 0) throw ParameterError("not a rational literal p/q: '" + s + "'");
  if (r.get_den() == 0) throw ParameterError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& x) { return x.get_str(10); }

/// sin(pi x) and cos(pi x) for rational x: exact reduction modulo 2, then
/// evaluation with 64 extra bits before the final rounding to `bits`.
struct SinCosPi {
  BigReal sin;
  BigReal cos;
};

inline SinCosPi sin_cos_pi(const Rational& x, mpfr_prec_t bits) {
  // x = p/q, reduce p mod 2q so the angle lies in [0, 2pi).
  Integer p = x.get_num(), q = x.get_den();
  Integer two_q = 2 * q;
  Integer r = p % two_q;
  if (r < 0) r += two_q;
  const mpfr_prec_t inner = bits + 64;
  BigReal angle = const_pi(inner);
  angle *= Rational(r, q);
  BigReal s(inner), c(inner);
  mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
  // Exact zeros where the reduced argument is a multiple of pi/2.
  Integer two_r = 2 * r;
  if (mpz_divisible_p(two_r.get_mpz_t(), q.get_mpz_t())) {
    long quarter = Integer(two_r / q).get_si();  // angle = pi r/q = quarter * pi/2
    static constexpr long sin_table[4] = {0, 1, 0, -1};
    static constexpr long cos_table[4] = {1, 0, -1, 0};
    return {BigReal(sin_table[quarter % 4], bits), BigReal(cos_table[quarter % 4], bits)};
  }
  return {BigReal(s, bits), BigReal(c, bits)};
}

}  // namespace pipowers
