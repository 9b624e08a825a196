#pragma once

// pi^(k+2) = (-1)^k (k+1) / (2^k A_k(x)) * sum_n 1/(x-n)^(k+2), assembled from
// the prefactor and a truncated bilateral sum, with an a-priori error bound.

#include <cmath>
#include <cstdint>
#include <string>

#include "pipowers/analytic_kernel.hpp"
#include "pipowers/report.hpp"
#include "pipowers/series_sum.hpp"

namespace pipowers {

struct PiComputation {
  unsigned k = 0;
  Rational x;
  std::uint64_t N = 0;
  mpfr_prec_t precision_bits = 0;
  /// Computed pi^(k+2), rounded to precision_bits.
  BigReal value;
  /// pi^(k+2) from the library constant, rounded to precision_bits.
  BigReal reference;
  BigReal abs_error;
  BigReal guaranteed_bound;
  unsigned correct_digits = 0;
  /// abs_error <= guaranteed_bound.
  bool pass = false;

  /// (-1)^k (k+1) / (2^k A_k(x)).
  BigReal factor;
  PrefactorValue prefactor;
  SeriesResult series;
  /// guaranteed_bound minus its series-tail share; see bound_with_tail().
  BigReal bound_without_tail;

  /// Digits certified by the bound alone: floor(-log10(bound / reference)).
  unsigned guaranteed_digits() const {
    if (guaranteed_bound.is_zero()) return correct_digits;
    double d = -(guaranteed_bound.log10_abs() - reference.log10_abs());
    return d > 0 ? static_cast<unsigned>(std::floor(d)) : 0u;
  }

  /// The guaranteed bound with the series tail bound replaced by `tail`.
  BigReal bound_with_tail(const BigReal& tail) const {
    BigReal t = abs(factor) * tail;
    t *= 2L;
    return ReciprocalSeries::inflate(bound_without_tail + t, 64);
  }
};

/// |A| within 2^-(T+16) of the size of its terms counts as zero.
inline bool is_degenerate(const PrefactorValue& a, mpfr_prec_t target_bits) {
  if (a.value.is_zero()) return true;
  BigReal threshold = a.magnitude;
  mpfr_mul_2si(threshold.raw(), threshold.raw(), -(target_bits + 16), MPFR_RNDN);
  return abs(a.value) <= threshold;
}

inline unsigned digits_of_agreement(const BigReal& abs_error, const BigReal& reference,
                                    mpfr_prec_t precision_bits) {
  if (abs_error.is_zero())
    return static_cast<unsigned>(std::floor(static_cast<double>(precision_bits) * std::log10(2.0)));
  double d = -(abs_error.log10_abs() - reference.log10_abs());
  return d > 0 ? static_cast<unsigned>(std::floor(d)) : 0u;
}

/// pi^(k+2) from an already summed series (params must match k and x).
inline PiComputation assemble_pi_power(unsigned k, const Rational& x, SeriesResult series,
                                       mpfr_prec_t precision_bits) {
  EvalPoint pt(x, precision_bits);
  if (series.params.k != k || series.params.x != pt.x)
    throw ParameterError("series parameters do not match k and x");
  PrefactorValue a = prefactor(k, pt);
  if (is_degenerate(a, precision_bits))
    throw DegeneratePointError("prefactor A_" + std::to_string(k) + "(" + to_string(pt.x) +
                               ") vanishes; the identity cannot be solved for pi^" +
                               std::to_string(k + 2) + " at this x");
  const mpfr_prec_t wp = std::max(a.value.precision(), series.working_bits);

  PiComputation out;
  out.k = k;
  out.x = pt.x;
  out.N = series.params.N;
  out.precision_bits = precision_bits;

  BigReal factor(static_cast<long>(k + 1), wp);
  mpfr_div_2si(factor.raw(), factor.raw(), static_cast<long>(k), MPFR_RNDN);
  factor /= a.value;
  if (k % 2) factor = -factor;
  BigReal value = factor * series.partial_sum;
  BigReal reference = pow(const_pi(wp), static_cast<long>(k) + 2);
  out.value = BigReal(value, precision_bits);
  out.reference = BigReal(reference, precision_bits);
  out.abs_error = abs(out.value - out.reference);
  mpfr_prec_round(out.abs_error.raw(), precision_bits, MPFR_RNDU);

  // First-order propagation, doubled:
  //   |factor| (tail + series rounding) + |value| (A's relative error)
  //   + reference rounding + output rounding of value and reference.
  auto ulp_scale = [](const BigReal& v, long count, mpfr_prec_t bits) {
    BigReal r = abs(BigReal(v, 64));
    r *= count;
    mpfr_mul_2si(r.raw(), r.raw(), -(bits - 1), MPFR_RNDN);
    return r;
  };
  BigReal a_rel = ulp_scale(a.magnitude, static_cast<long>(a.term_count + 4 * k + 12),
                            a.value.precision());
  a_rel /= abs(BigReal(a.value, 64));
  BigReal non_tail = abs(BigReal(factor, 64)) * series.rounding_bound;
  non_tail += abs(BigReal(value, 64)) * a_rel;
  non_tail += ulp_scale(value, 6, wp);              // factor and product
  non_tail += ulp_scale(reference, k + 4, wp);      // pi and its power
  non_tail += ulp_scale(out.value, 1, precision_bits);
  non_tail += ulp_scale(out.reference, 1, precision_bits);
  non_tail *= 2L;
  out.bound_without_tail = ReciprocalSeries::inflate(non_tail, 64);
  out.factor = std::move(factor);
  out.guaranteed_bound = out.bound_with_tail(series.tail_bound);

  out.pass = out.abs_error <= out.guaranteed_bound;
  out.correct_digits = digits_of_agreement(out.abs_error, out.reference, precision_bits);
  out.prefactor = std::move(a);
  out.series = std::move(series);
  return out;
}

inline PiComputation compute_pi_power(unsigned k, const Rational& x, std::uint64_t N,
                                      mpfr_prec_t precision_bits,
                                      const SummationOptions& options = {}) {
  EvalPoint pt(x, precision_bits);
  // Fail on degenerate points before paying for the series.
  if (is_degenerate(prefactor(k, pt), precision_bits))
    throw DegeneratePointError("prefactor A_" + std::to_string(k) + "(" + to_string(pt.x) +
                               ") vanishes; the identity cannot be solved for pi^" +
                               std::to_string(k + 2) + " at this x");
  SeriesResult s = bilateral_sum(SeriesParams{pt.x, k, N, precision_bits}, options);
  return assemble_pi_power(k, pt.x, std::move(s), precision_bits);
}

/// Trigonometric pieces of the k = 2 worked example at x, with s = sin^2(pi x):
///   T1 = 4 pi^4 s (1 - s) / s^3,   T2 = pi^4 (-1/s^2 + 2/s),
///   T1 + T2 = 3 pi^4 (cosec^4 - (2/3) cosec^2) = 3 sum_n 1/(x-n)^4.
/// T2_literal = pi^4 (-1/s^2 + 2/s^2) is the variant with s^2 in both
/// denominators; it does not satisfy the identity.
struct WorkedExampleTerms {
  BigReal t1, t2, t2_literal, cosec_form;
};

inline WorkedExampleTerms worked_example_terms(const Rational& x, mpfr_prec_t bits) {
  EvalPoint pt(x, bits);
  auto t = trig_values(pt.x, bits);
  const BigReal& s = t->sin_sq;
  BigReal pi4 = pow(t->pi, 4);
  BigReal one(1L, bits);
  BigReal inv_s = one / s, inv_s2 = inv_s * inv_s;
  WorkedExampleTerms w;
  w.t1 = pi4 * 4L * s * (one - s) / pow(s, 3);
  w.t2 = pi4 * (inv_s * 2L - inv_s2);
  w.t2_literal = pi4 * (inv_s2 * 2L - inv_s2);
  w.cosec_form = pi4 * 3L * (inv_s2 - inv_s * Rational(2, 3));
  return w;
}

/// Checks T1 + T2 against 3 * sum_{|n|<=N} 1/(x-n)^4, and against the cosecant
/// form. Tolerance (relative): 3 (tail + rounding) of the series plus the
/// rounding of the trigonometric side.
inline VerificationReport worked_example_k2(const Rational& x, const SeriesResult& series) {
  if (series.params.k != 2) throw ParameterError("worked_example_k2 needs a k = 2 series");
  const mpfr_prec_t bits = series.params.precision_bits;
  const mpfr_prec_t wp = series.working_bits;
  WorkedExampleTerms w = worked_example_terms(x, wp);
  BigReal lhs = w.t1 + w.t2;
  BigReal rhs = series.partial_sum * 3L;

  BigReal trig_rounding = abs(BigReal(w.t1, 64)) + abs(BigReal(w.t2, 64));
  trig_rounding *= 40L;
  mpfr_mul_2si(trig_rounding.raw(), trig_rounding.raw(), -(wp - 1), MPFR_RNDN);
  BigReal series_err = series.total_bound() * 3L;
  BigReal tol = ReciprocalSeries::inflate(series_err + trig_rounding, 64) / abs(BigReal(rhs, 64));
  mpfr_prec_round(tol.raw(), 64, MPFR_RNDU);

  auto rel = [](const BigReal& a, const BigReal& b) { return abs(a - b) / abs(b); };
  BigReal cosec_rel = rel(lhs, w.cosec_form);
  BigReal literal_lhs = w.t1 + w.t2_literal;
  BigReal literal_rel = rel(literal_lhs, rhs);
  BigReal rounding_rel = trig_rounding / abs(BigReal(lhs, 64));

  VerificationReport r = make_report(
      "worked_example_k2", lhs, rhs, tol, ToleranceKind::relative,
      "3*(tail bound + rounding bound) of the k=2 series plus trigonometric rounding",
      {{"k", "2"},
       {"x", to_string(series.params.x)},
       {"N", std::to_string(series.params.N)},
       {"precision_bits", std::to_string(bits)},
       {"diag.cosec_form_rel_diff", BigReal(cosec_rel, 64).to_string()},
       {"diag.literal_t2", BigReal(w.t2_literal, bits).to_string()},
       {"diag.literal_form_rel_diff", BigReal(literal_rel, 64).to_string()}});
  r.pass = r.pass && cosec_rel <= rounding_rel;
  return r;
}

inline VerificationReport worked_example_k2(const Rational& x, mpfr_prec_t precision_bits,
                                            const BigReal& target_abs_error,
                                            const SummationOptions& options = {}) {
  std::uint64_t N = choose_truncation(x, 2, target_abs_error);
  return worked_example_k2(x, bilateral_sum(SeriesParams{x, 2, N, precision_bits}, options));
}

}  // namespace pipowers
