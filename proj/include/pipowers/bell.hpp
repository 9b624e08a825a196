#pragma once

// Exponential Bell polynomials over exact rationals. This module is the
// rounding-free reference for the Faa di Bruno machinery: nothing inside it
// is evaluated in floating point.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "pipowers/bigreal.hpp"
#include "pipowers/combinatorics.hpp"
#include "pipowers/report.hpp"

namespace pipowers {

/// Arguments x_1, x_2, ... of a Bell polynomial (index 0 holds x_1).
using BellArguments = std::vector<Rational>;

/// One monomial c * prod_i x_i^{j_i} of a partial Bell polynomial.
struct BellMonomial {
  MultiIndex exponents;  // (j_1, ..., j_k), a multi-index of order k
  Integer coefficient;   // k! / prod_i (j_i! (i!)^{j_i})
};

/// Monomials of B_{k,l}: the multi-indices of order k with exactly l parts.
inline std::vector<BellMonomial> partial_bell_monomials(unsigned k, unsigned l) {
  std::vector<BellMonomial> out;
  if (l > k) return out;
  for (const auto& entry : coefficient_table(k)->entries)
    if (entry.weight == l) out.push_back({entry.index, entry.coefficient});
  return out;
}

/// B_{k,l}(x_1, ..., x_{k-l+1}); B_{0,0} = 1 and B_{k,0} = 0 for k >= 1.
inline Rational partial_bell(unsigned k, unsigned l, std::span<const Rational> args) {
  if (l > k) throw ParameterError("partial Bell polynomial needs l <= k");
  if (l == 0) return k == 0 ? Rational(1) : Rational(0);
  const std::size_t needed = k - l + 1;
  if (args.size() < needed)
    throw ArityError("B_{" + std::to_string(k) + "," + std::to_string(l) + "} needs " +
                     std::to_string(needed) + " arguments, got " + std::to_string(args.size()));
  Rational sum = 0;
  for (const auto& mono : partial_bell_monomials(k, l)) {
    Rational term = mono.coefficient;
    auto j = mono.exponents.multiplicities();
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i] == 0) continue;
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), args[i].get_num_mpz_t(), j[i]);
      mpz_pow_ui(p.get_den_mpz_t(), args[i].get_den_mpz_t(), j[i]);
      term *= p;
    }
    sum += term;
  }
  return sum;
}

/// B_k(x_1, ..., x_k) = sum_{l=1}^k B_{k,l}; B_0 = 1.
inline Rational complete_bell(unsigned k, std::span<const Rational> args) {
  if (k == 0) return 1;
  if (args.size() < k)
    throw ArityError("B_" + std::to_string(k) + " needs " + std::to_string(k) +
                     " arguments, got " + std::to_string(args.size()));
  Rational sum = 0;
  for (unsigned l = 1; l <= k; ++l) sum += partial_bell(k, l, args);
  return sum;
}

/// Compares exp(sum_i a_i t^i / i!) with sum_n B_n(a) t^n / n! coefficient by
/// coefficient through t^order. The exponential is expanded independently via
/// n e_n = sum_{i=1}^n i (a_i/i!) e_{n-i}, e_0 = 1. Passes only on exact equality.
inline VerificationReport egf_check(std::span<const Rational> args, unsigned order) {
  if (order == 0 || order > args.size())
    throw ParameterError("EGF check needs 1 <= order <= number of arguments");
  std::vector<Rational> a_over_fact(order + 1);
  for (unsigned i = 1; i <= order; ++i) a_over_fact[i] = args[i - 1] / Rational(factorial(i));

  std::vector<Rational> e(order + 1);
  e[0] = 1;
  for (unsigned n = 1; n <= order; ++n) {
    Rational acc = 0;
    for (unsigned i = 1; i <= n; ++i) acc += Rational(i) * a_over_fact[i] * e[n - i];
    e[n] = acc / Rational(n);
  }

  unsigned mismatches = 0;
  Rational worst_diff = 0;
  unsigned worst_n = order;
  for (unsigned n = 0; n <= order; ++n) {
    Rational bell = complete_bell(n, args) / Rational(factorial(n));
    Rational d = abs(bell - e[n]);
    if (d != 0) ++mismatches;
    if (d > worst_diff) {
      worst_diff = d;
      worst_n = n;
    }
  }
  const mpfr_prec_t bits = 256;
  VerificationReport r = make_report(
      "bell_egf", BigReal(e[worst_n], bits),
      BigReal(complete_bell(worst_n, args) / Rational(factorial(worst_n)), bits), BigReal(0L, bits),
      ToleranceKind::absolute, "exact rational comparison",
      {{"order", std::to_string(order)}, {"diag.mismatches", std::to_string(mismatches)},
       {"diag.compared_coefficient", std::to_string(worst_n)}});
  // The verdict is the exact comparison, not the rounded one.
  r.pass = mismatches == 0;
  return r;
}

/// k-th derivative of g(h(x)) as sum_{l=0}^k g^(l)(h) B_{k,l}(h', h'', ...).
/// Inputs are converted exactly to dyadic rationals, the sum is formed without
/// rounding, and the result is rounded once to the widest input precision.
/// g_derivs[l] = g^(l)(h(x)) for l = 0..k; h_derivs[j-1] = h^(j)(x) for j = 1..k.
inline BigReal faa_di_bruno_via_bell(std::span<const BigReal> g_derivs,
                                     std::span<const BigReal> h_derivs, unsigned k) {
  if (k < 1) throw ParameterError("faa_di_bruno_via_bell needs k >= 1");
  if (g_derivs.size() < k + 1 || h_derivs.size() < k)
    throw ArityError("faa_di_bruno_via_bell(k=" + std::to_string(k) + ") needs " +
                     std::to_string(k + 1) + " outer and " + std::to_string(k) +
                     " inner derivatives");
  mpfr_prec_t bits = 0;
  BellArguments inner;
  for (unsigned j = 0; j < k; ++j) {
    inner.push_back(h_derivs[j].to_rational());
    bits = std::max(bits, h_derivs[j].precision());
  }
  Rational total = 0;
  for (unsigned l = 1; l <= k; ++l) {  // B_{k,0} = 0 for k >= 1
    bits = std::max(bits, g_derivs[l].precision());
    total += g_derivs[l].to_rational() * partial_bell(k, l, inner);
  }
  return BigReal(total, bits);
}

}  // namespace pipowers
