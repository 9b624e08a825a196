#pragma once

// Closed-form derivatives of g(y) = 1/y and h(x) = sin^2(pi x), the
// trigonometric prefactor A_k(x), and the k-th derivative of pi^2/sin^2(pi x)
// assembled from them.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pipowers/bigreal.hpp"
#include "pipowers/combinatorics.hpp"
#include "pipowers/errors.hpp"

namespace pipowers {

/// Guard bits for an order-k evaluation at target precision T: T + 32 + 4k.
/// The 4k term covers cancellation among the signed terms of A_k(x).
inline mpfr_prec_t working_precision(mpfr_prec_t target_bits, unsigned k) {
  return target_bits + 32 + 4 * static_cast<mpfr_prec_t>(k);
}

/// A rational evaluation point x (never an integer) and a target precision.
struct EvalPoint {
  Rational x;
  mpfr_prec_t precision_bits;

  EvalPoint(Rational x_, mpfr_prec_t bits) : x(std::move(x_)), precision_bits(bits) {
    x.canonicalize();
    if (is_integer(x))
      throw PoleError("sin(pi x) vanishes at integer x = " + to_string(x));
    if (bits < 64) throw ParameterError("precision must be at least 64 bits");
  }

  EvalPoint at_precision(mpfr_prec_t bits) const { return EvalPoint(x, bits); }
};

/// sin(2 pi x), cos(2 pi x), sin^2(pi x) and pi at one (x, precision).
struct TrigValues {
  BigReal pi;
  BigReal sin_2pix;
  BigReal cos_2pix;
  BigReal sin_sq;  // sin^2(pi x)
};

/// Cached per (x, bits); entries are immutable once published.
inline std::shared_ptr<const TrigValues> trig_values(const Rational& x, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, mpfr_prec_t>, std::shared_ptr<const TrigValues>> cache;
  auto key = std::make_pair(to_string(x), bits);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto half = sin_cos_pi(x, bits + 8);
  auto full = sin_cos_pi(Rational(2 * x), bits);
  auto values = std::make_shared<TrigValues>(
      TrigValues{const_pi(bits), full.sin, full.cos, BigReal(half.sin * half.sin, bits)});
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(values)).first->second;
}

/// cos(2 pi x + j pi/2) reduced by j mod 4 to +-cos(2 pi x) or +-sin(2 pi x).
inline BigReal shifted_cosine(unsigned j, const TrigValues& t) {
  switch (j % 4) {
    case 0: return t.cos_2pix;
    case 1: return -t.sin_2pix;
    case 2: return -t.cos_2pix;
    default: return t.sin_2pix;
  }
}

/// g^(p)(y) = (-1)^p p! / y^(p+1) for g(y) = 1/y, at the precision of y.
inline BigReal g_derivative(unsigned p, const BigReal& y) {
  if (y.is_zero()) throw PoleError("g(y) = 1/y has a pole at y = 0");
  BigReal r = pow(y, -static_cast<long>(p) - 1);
  r *= factorial(p);
  return (p % 2) ? -r : r;
}

/// h(x) = sin^2(pi x) at the point's precision.
inline BigReal h_value(const EvalPoint& pt) {
  return trig_values(pt.x, pt.precision_bits)->sin_sq;
}

/// h^(p)(x) = -2^(p-1) pi^p cos(2 pi x + p pi/2), valid for p >= 1 only
/// (at p = 0 the expression is -cos(2 pi x)/2, not sin^2(pi x)).
inline BigReal h_derivative(unsigned p, const EvalPoint& pt) {
  if (p == 0) throw ParameterError("h_derivative requires p >= 1; use h_value for p = 0");
  auto t = trig_values(pt.x, pt.precision_bits);
  BigReal r = pow(t->pi, static_cast<long>(p));
  mpfr_mul_2si(r.raw(), r.raw(), static_cast<long>(p) - 1, MPFR_RNDN);
  r *= shifted_cosine(p, *t);
  return -r;
}

/// Multi-index terms of A_k grouped by (S, cosine power a, sine power b):
///   A_k = sum coef * cos(2 pi x)^a * sin(2 pi x)^b / sin^2(pi x)^(S+1)
/// with coef = +-S! / (2^S prod m_j! prod (j!)^m_j), exact.
struct PrefactorTerm {
  unsigned weight;  // S
  unsigned cos_power;
  unsigned sin_power;
  Rational coefficient;
};

inline std::shared_ptr<const std::vector<PrefactorTerm>> prefactor_terms(unsigned k) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const std::vector<PrefactorTerm>>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> grouped;
  for (const auto& entry : coefficient_table(k)->entries) {
    auto m = entry.index.multiplicities();
    unsigned cos_power = 0, sin_power = 0, negatives = 0;
    Integer denominator = 1;
    for (unsigned j = 1; j <= k; ++j) {
      unsigned mj = m[j - 1];
      if (mj == 0) continue;
      (j % 2 ? sin_power : cos_power) += mj;
      if (j % 4 == 1 || j % 4 == 2) negatives += mj;
      Integer jf;
      mpz_pow_ui(jf.get_mpz_t(), factorial(j).get_mpz_t(), mj);
      denominator *= factorial(mj) * jf;
    }
    denominator <<= entry.weight;  // 2^S
    Rational coef(factorial(entry.weight), denominator);
    coef.canonicalize();
    if (negatives % 2) coef = -coef;
    grouped[{entry.weight, cos_power, sin_power}] += coef;
  }
  auto terms = std::make_shared<std::vector<PrefactorTerm>>();
  for (auto& [key, coef] : grouped)
    if (coef != 0) terms->push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), coef});
  std::lock_guard lock(mutex);
  return cache.emplace(k, std::move(terms)).first->second;
}

struct PrefactorValue {
  BigReal value;
  unsigned k = 0;
  /// sum of |terms|; value/magnitude measures cancellation.
  BigReal magnitude;
  std::size_t term_count = 0;
};

/// A_k(x) at working_precision(T, k). A_0(x) = 1/sin^2(pi x).
inline PrefactorValue prefactor(unsigned k, const EvalPoint& pt, unsigned k_max = default_k_max) {
  if (k > k_max)
    throw BoundsError("order " + std::to_string(k) + " exceeds K_max = " + std::to_string(k_max));
  const mpfr_prec_t bits = working_precision(pt.precision_bits, k);
  auto t = trig_values(pt.x, bits);
  BigReal inv_sin_sq = BigReal(1L, bits) / t->sin_sq;

  // Power tables up to the largest exponents that can occur.
  auto powers = [&](const BigReal& base, unsigned n) {
    std::vector<BigReal> p{BigReal(1L, bits)};
    for (unsigned i = 1; i <= n; ++i) p.push_back(p.back() * base);
    return p;
  };
  auto cos_pow = powers(t->cos_2pix, k);
  auto sin_pow = powers(t->sin_2pix, k);
  auto inv_pow = powers(inv_sin_sq, k + 1);

  PrefactorValue out{BigReal(bits), k, BigReal(bits), 0};
  auto terms = prefactor_terms(k);
  for (const auto& term : *terms) {
    BigReal v = cos_pow[term.cos_power] * sin_pow[term.sin_power];
    v *= inv_pow[term.weight + 1];
    v *= term.coefficient;
    out.value += v;
    out.magnitude += abs(v);
  }
  out.term_count = terms->size();
  return out;
}

/// pi^2 d^k/dx^k [1/sin^2(pi x)] = pi^(k+2) 2^k k! A_k(x), the left side of
/// the k-times differentiated cosecant-squared series.
inline BigReal lhs_value(unsigned k, const EvalPoint& pt) {
  PrefactorValue a = prefactor(k, pt);
  const mpfr_prec_t bits = a.value.precision();
  BigReal r = pow(const_pi(bits), static_cast<long>(k) + 2);
  r *= factorial(k);
  mpfr_mul_2si(r.raw(), r.raw(), static_cast<long>(k), MPFR_RNDN);
  return r * a.value;
}

/// (1/g)^(p)(x) = p!/g^(p+1) sum_m (-1)^S S! / prod_{j>=1} ((j!)^m_j m_j!)
///                 * g^m_0 prod_{j>=1} (g^(j))^m_j,
/// summed over (m_1..m_p) with sum j m_j = p, S = sum_{j>=1} m_j, and
/// m_0 = p - S (so that p - p_0 = S). g_derivs[j] = g^(j)(x), j = 0..p.
inline BigReal inverse_derivative(unsigned p, std::span<const BigReal> g_derivs) {
  if (g_derivs.size() < p + 1)
    throw ArityError("inverse_derivative(p=" + std::to_string(p) + ") needs " +
                     std::to_string(p + 1) + " derivative values");
  if (g_derivs[0].is_zero()) throw PoleError("1/g has a pole where g(x) = 0");
  mpfr_prec_t bits = 0;
  for (unsigned j = 0; j <= p; ++j) bits = std::max(bits, g_derivs[j].precision());

  BigReal sum(bits);
  for (const auto& entry : coefficient_table(p)->entries) {
    auto m = entry.index.multiplicities();
    const unsigned s = entry.weight;
    Integer denominator = 1;
    BigReal product = pow(BigReal(g_derivs[0], bits), static_cast<long>(p - s));
    for (unsigned j = 1; j <= p; ++j) {
      unsigned mj = m[j - 1];
      if (mj == 0) continue;
      Integer jf;
      mpz_pow_ui(jf.get_mpz_t(), factorial(j).get_mpz_t(), mj);
      denominator *= jf * factorial(mj);
      product *= pow(BigReal(g_derivs[j], bits), static_cast<long>(mj));
    }
    Rational coef(factorial(s), denominator);
    coef.canonicalize();
    if (s % 2) coef = -coef;
    sum += product * coef;
  }
  BigReal scale = pow(BigReal(g_derivs[0], bits), -static_cast<long>(p) - 1);
  scale *= factorial(p);
  return scale * sum;
}

}  // namespace pipowers
