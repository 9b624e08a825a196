#pragma once

// Truncated bilateral sums  sum_{n=-N}^{N} prod_i (x_i - n)^(-e_i)  with a
// rigorous integral-test tail bound and an explicit rounding bound.
//
// Terms are evaluated in three tiers by distance from the origin:
//   |n| <= M1        MPFR at the working precision,
//   M1 < |n| <= M2   double-double (~106 bits),
//   M2 < |n| <= N    double with Newton-refined reciprocals.
// M1 and M2 are placed so that each fast tier's rounding bound is at most
// 2^-margin times the truncation bound at N. All three contributions enter
// the reported rounding_bound.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pipowers/bigreal.hpp"
#include "pipowers/double_double.hpp"
#include "pipowers/errors.hpp"
#include "pipowers/parallel.hpp"

namespace pipowers {

/// One factor (x - n)^(-exponent) of a series term.
struct ReciprocalFactor {
  Rational point;
  unsigned exponent = 1;
};

/// term(n) = prod_i (x_i - n)^(-e_i) with total exponent E = sum e_i >= 2.
class ReciprocalSeries {
 public:
  explicit ReciprocalSeries(std::vector<ReciprocalFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ParameterError("a series needs at least one factor");
    scale_ = 1;
    for (auto& f : factors_) {
      f.point.canonicalize();
      if (is_integer(f.point))
        throw PoleError("series term has a pole at integer x = " + to_string(f.point));
      if (f.exponent == 0) throw ParameterError("factor exponents must be positive");
      total_exponent_ += f.exponent;
      Rational a = abs(f.point);
      if (a > max_abs_point_) max_abs_point_ = a;
      Integer qe;
      mpz_pow_ui(qe.get_mpz_t(), f.point.get_den_mpz_t(), f.exponent);
      scale_ *= qe;
    }
    if (total_exponent_ < 2) throw ParameterError("series with total exponent < 2 diverges");
  }

  const std::vector<ReciprocalFactor>& factors() const { return factors_; }
  unsigned total_exponent() const { return total_exponent_; }
  /// X = max_i |x_i|.
  const Rational& max_abs_point() const { return max_abs_point_; }
  /// prod_i q_i^{e_i}: term(n) = scale * prod_i (p_i - n q_i)^(-e_i).
  const Integer& scale() const { return scale_; }

  /// prod_i (p_i - n q_i)^(-e_i) (the term without the scale), at `bits`.
  BigReal core_term(std::int64_t n, mpfr_prec_t bits) const {
    BigReal t(bits), f(bits);
    bool first = true;
    Integer nz = static_cast<long>(n);
    for (const auto& fac : factors_) {
      Integer d = fac.point.get_num() - nz * fac.point.get_den();
      mpfr_set_z(f.raw(), d.get_mpz_t(), MPFR_RNDN);
      mpfr_pow_si(f.raw(), f.raw(), -static_cast<long>(fac.exponent), MPFR_RNDN);
      if (first) {
        t = f;
        first = false;
      } else {
        t *= f;
      }
    }
    return t;
  }

  BigReal term(std::int64_t n, mpfr_prec_t bits) const {
    BigReal t = core_term(n, bits + 8);
    t *= scale_;
    return BigReal(t, bits);
  }

  /// Integral-test bound on sum_{|n| > R} |term(n)|:
  ///   2 / ((E-1) (R - X - 1)^(E-1)),  requires R > X + 1.
  BigReal tail_bound(std::uint64_t radius, mpfr_prec_t bits = 64) const {
    Rational gap = Rational(Integer(std::to_string(radius))) - max_abs_point_ - 1;
    if (gap <= 0)
      throw ParameterError("truncation radius " + std::to_string(radius) +
                           " must exceed max|x| + 1");
    BigReal g(gap, bits + 16);
    BigReal r = pow(g, -static_cast<long>(total_exponent_ - 1));
    r *= 2L;
    r /= static_cast<long>(total_exponent_ - 1);
    return inflate(r, bits);
  }

  /// Rounds up by a relative 2^-(bits-8) so a value computed in round-to-
  /// nearest stays an upper bound.
  static BigReal inflate(const BigReal& v, mpfr_prec_t bits) {
    BigReal r(v, bits);
    BigReal bump = r;
    mpfr_mul_2si(bump.raw(), bump.raw(), -(bits - 8), MPFR_RNDN);
    return r + abs(bump);
  }

 private:
  std::vector<ReciprocalFactor> factors_;
  unsigned total_exponent_ = 0;
  Rational max_abs_point_ = 0;
  Integer scale_;
};

struct SummationOptions {
  /// Use the double-double and double tiers where their bounds allow.
  bool fast_tiers = true;
  /// 0 = PIPOWERS_THREADS or hardware concurrency.
  unsigned threads = 0;
  /// Fast-tier rounding must stay below 2^-margin_log2 * tail_bound(N).
  int margin_log2 = 24;
};

/// A truncated sum with its absolute rounding bound and tier statistics.
struct TieredSum {
  BigReal sum;
  BigReal rounding_bound;
  std::uint64_t mpfr_terms = 0;
  std::uint64_t double_double_terms = 0;
  std::uint64_t double_terms = 0;
  double max_newton_residual = 0.0;
};

namespace detail {

inline constexpr std::uint64_t chunk_terms = std::uint64_t{1} << 16;
inline constexpr int double_lanes = 32;
inline constexpr int dd_lanes = 8;

struct FastFactor {
  double p;
  double q;
  unsigned exponent;
};

struct ChunkResult {
  dd::DoubleDouble sum;
  double max_residual = 0.0;
};

/// Sum over m in [m0, m1) of prod_j (p_j - sign*m*q_j)^(-e_j), terms in double
/// precision. Reciprocals come from Newton steps seeded with the previous
/// block's values; |1 - d*y| is tracked to bound their error at run time.
template <int F, int Iters>
ChunkResult double_chunk(const std::array<FastFactor, F>& f, double sign, std::uint64_t m0,
                         std::uint64_t m1) {
  constexpr int L = double_lanes;
  double y[F][L];
  double acc_hi[L], acc_lo[L], emax[L], t[L];
  for (int i = 0; i < L; ++i) {
    acc_hi[i] = acc_lo[i] = emax[i] = 0.0;
    for (int j = 0; j < F; ++j)
      y[j][i] = 1.0 / (f[j].p - sign * static_cast<double>(m0 + i) * f[j].q);
  }
  for (std::uint64_t b = m0; b < m1; b += L) {
    const int count = static_cast<int>(std::min<std::uint64_t>(L, m1 - b));
    for (int j = 0; j < F; ++j) {
      const double base = f[j].p - sign * static_cast<double>(b) * f[j].q;
      const double step = sign * f[j].q;
      for (int i = 0; i < L; ++i) {
        const double d = base - static_cast<double>(i) * step;
        double yy = y[j][i];
        for (int it = 0; it < Iters; ++it) {
          const double e = dd::residual(d, yy);
          yy = std::fma(yy, e, yy);
        }
        const double e = dd::residual(d, yy);
        const double ae = e < 0 ? -e : e;
        emax[i] = ae > emax[i] ? ae : emax[i];
        y[j][i] = yy;
      }
    }
    for (int i = 0; i < L; ++i) t[i] = y[0][i];
    for (int j = 0; j < F; ++j) {
      for (unsigned r = (j == 0 ? 1u : 0u); r < f[j].exponent; ++r)
        for (int i = 0; i < L; ++i) t[i] *= y[j][i];
    }
    for (int i = 0; i < L; ++i) {
      const double v = i < count ? t[i] : 0.0;
      const double h = acc_hi[i];
      const double s = h + v;
      const double bb = s - h;
      double err = (h - (s - bb)) + (v - bb);
      err += acc_lo[i];
      const double s2 = s + err;
      acc_lo[i] = err - (s2 - s);
      acc_hi[i] = s2;
    }
  }
  ChunkResult out;
  for (int i = 0; i < L; ++i) {
    out.sum = dd::add(out.sum, dd::DoubleDouble{acc_hi[i], acc_lo[i]});
    out.max_residual = std::max(out.max_residual, emax[i]);
  }
  return out;
}

/// Same sum with double-double terms (correctly rounded reciprocal plus its
/// residual correction) and double-double accumulation.
template <int F>
ChunkResult double_double_chunk(const std::array<FastFactor, F>& f, double sign,
                                std::uint64_t m0, std::uint64_t m1) {
  constexpr int L = dd_lanes;
  dd::DoubleDouble acc[L];
  for (std::uint64_t b = m0; b < m1; b += L) {
    const int count = static_cast<int>(std::min<std::uint64_t>(L, m1 - b));
    for (int i = 0; i < count; ++i) {
      dd::DoubleDouble t{1.0, 0.0};
      bool first = true;
      for (int j = 0; j < F; ++j) {
        const double d = f[j].p - sign * static_cast<double>(b + i) * f[j].q;
        const dd::DoubleDouble r = dd::reciprocal(d);
        for (unsigned e = 0; e < f[j].exponent; ++e) {
          t = first ? r : dd::mul(t, r);
          first = false;
        }
      }
      acc[i] = dd::add(acc[i], t);
    }
  }
  ChunkResult out;
  for (int i = 0; i < L; ++i) out.sum = dd::add(out.sum, acc[i]);
  return out;
}

template <int F>
ChunkResult dispatch_double_chunk(const std::array<FastFactor, F>& f, double sign,
                                  std::uint64_t m0, std::uint64_t m1, int iters) {
  switch (iters) {
    case 1: return double_chunk<F, 1>(f, sign, m0, m1);
    case 2: return double_chunk<F, 2>(f, sign, m0, m1);
    case 3: return double_chunk<F, 3>(f, sign, m0, m1);
    case 4: return double_chunk<F, 4>(f, sign, m0, m1);
    default: return double_chunk<F, 5>(f, sign, m0, m1);
  }
}

/// Newton steps needed for a seed with relative error <= delta to reach 2^-56.
inline int newton_iterations(double delta) {
  int it = 1;
  double bits = -std::log2(delta);
  while (bits * std::exp2(it) < 56.0 && it < 5) ++it;
  return it;
}

inline std::uint64_t bit_length(std::uint64_t v) {
  std::uint64_t b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

enum class Tier { double_double, plain_double };

struct FarRange {
  std::uint64_t m0, m1;  // |n| in [m0, m1)
  double sign;           // n = sign * m
  Tier tier;
};

}  // namespace detail

/// sum_{n=lo}^{hi} term(n) entirely in MPFR. Terms are paired from the two
/// ends of the window inward, (t(lo)+t(hi)) + (t(lo+1)+t(hi-1)) + ..., so a
/// shifted or mirrored window over the same values sums bit-identically.
inline TieredSum window_sum(const ReciprocalSeries& series, std::int64_t lo, std::int64_t hi,
                            mpfr_prec_t bits) {
  if (hi < lo) throw ParameterError("empty summation window");
  BigReal acc(bits), abs_acc(bits), pair(bits);
  std::uint64_t count = 0;
  std::int64_t i = lo, j = hi;
  for (; i < j; ++i, --j) {
    BigReal a = series.core_term(i, bits), b = series.core_term(j, bits);
    pair = a + b;
    acc += pair;
    abs_acc += abs(a);
    abs_acc += abs(b);
    count += 2;
  }
  if (i == j) {
    BigReal a = series.core_term(i, bits);
    acc += a;
    abs_acc += abs(a);
    ++count;
  }
  TieredSum out;
  out.sum = acc * BigReal(series.scale(), bits);
  const long factors = static_cast<long>(series.factors().size());
  // Per term 2F-1 roundings, plus pair, accumulation and final scaling.
  BigReal bound = abs_acc * BigReal(series.scale(), 64);
  bound *= static_cast<long>(2 * factors + 4 + 2 * count);
  mpfr_mul_2si(bound.raw(), bound.raw(), -(bits - 1), MPFR_RNDN);
  out.rounding_bound = ReciprocalSeries::inflate(bound, 64);
  out.mpfr_terms = count;
  return out;
}

/// sum_{n=-N}^{N} term(n) with the tiered evaluation described above,
/// accumulated from the outermost terms inward.
inline TieredSum symmetric_sum(const ReciprocalSeries& series, std::uint64_t N, mpfr_prec_t bits,
                               const SummationOptions& options = {}) {
  const unsigned E = series.total_exponent();
  const double X = series.max_abs_point().get_d();
  if (static_cast<double>(N) <= X + 1.0 || Rational(Integer(std::to_string(N))) <= series.max_abs_point() + 1)
    throw ParameterError("truncation radius N = " + std::to_string(N) + " must exceed max|x| + 1");

  constexpr double u = dd::unit_roundoff;
  const int F = static_cast<int>(series.factors().size());

  // Fast tiers need exact integer denominators in double and no underflow.
  bool fast = options.fast_tiers && F <= 2 && N < (std::uint64_t{1} << 52);
  double max_q = 0, max_p = 0;
  for (const auto& f : series.factors()) {
    if (!mpz_fits_slong_p(f.point.get_num_mpz_t()) || !mpz_fits_slong_p(f.point.get_den_mpz_t())) {
      fast = false;
      break;
    }
    max_q = std::max(max_q, std::abs(f.point.get_den().get_d()));
    max_p = std::max(max_p, std::abs(f.point.get_num().get_d()));
  }
  if (fast) {
    const double span = max_p + static_cast<double>(N) * max_q;
    fast = span < 0x1p52 && static_cast<double>(E) * std::log2(span + 1) < 900.0;
  }

  // Tier boundaries in |n|. For a tier with relative error eps starting at M,
  // its rounding is <= eps * 2/((E-1)(M-X-1)^(E-1)); require that to be below
  // 2^-margin * 2/((E-1)(N-X-1)^(E-1)).
  const std::uint64_t near_min = static_cast<std::uint64_t>(std::ceil(X)) + 2 + 64;
  const double lane_adds = static_cast<double>(detail::chunk_terms) / detail::dd_lanes;
  const double eps_dd = (10.0 * E + 3.0 * (lane_adds + 8.0)) * u * u;
  const double eps_double_estimate = (2.0 * E + 4.0) * u;
  auto tier_start = [&](double eps) -> std::uint64_t {
    const double ratio =
        std::exp2((std::log2(eps) + options.margin_log2) / static_cast<double>(E - 1));
    const double m = X + 1.0 + (static_cast<double>(N) - X - 1.0) * ratio;
    if (!(m < static_cast<double>(N))) return N;
    return std::max<std::uint64_t>(near_min, static_cast<std::uint64_t>(std::ceil(m)));
  };
  std::uint64_t m_dd = N, m_double = N;
  if (fast) {
    m_dd = std::min(N, tier_start(eps_dd));
    // Newton seeding needs the lane stride small against |d|.
    const std::uint64_t newton_min =
        static_cast<std::uint64_t>(std::ceil(X)) + 4 * detail::double_lanes + 2;
    m_double = std::min(N, std::max({m_dd, tier_start(eps_double_estimate), newton_min}));
  }

  // Far-field ranges; chunk boundaries depend only on (series, N, options).
  std::vector<detail::FarRange> ranges;
  auto add_ranges = [&](std::uint64_t a, std::uint64_t b, detail::Tier tier) {
    for (std::uint64_t m = a; m < b; m += detail::chunk_terms) {
      std::uint64_t e = std::min(b, m + detail::chunk_terms);
      ranges.push_back({m, e, -1.0, tier});
      ranges.push_back({m, e, 1.0, tier});
    }
  };
  add_ranges(m_dd + 1, m_double + 1, detail::Tier::double_double);
  add_ranges(m_double + 1, N + 1, detail::Tier::plain_double);

  std::vector<detail::ChunkResult> results(ranges.size());
  if (!ranges.empty()) {
    std::array<detail::FastFactor, 2> ff{};
    for (int j = 0; j < F; ++j) {
      const auto& f = series.factors()[static_cast<std::size_t>(j)];
      ff[static_cast<std::size_t>(j)] = {f.point.get_num().get_d(), f.point.get_den().get_d(),
                                         f.exponent};
    }
    std::array<detail::FastFactor, 1> ff1{ff[0]};
    const double lanes = detail::double_lanes;
    parallel_for(ranges.size(), resolve_thread_count(options.threads), [&](std::size_t c) {
      const auto& r = ranges[c];
      if (r.tier == detail::Tier::double_double) {
        results[c] = F == 1 ? detail::double_double_chunk<1>(ff1, r.sign, r.m0, r.m1)
                            : detail::double_double_chunk<2>(ff, r.sign, r.m0, r.m1);
      } else {
        const double delta = lanes / (static_cast<double>(r.m0) - X - 1.0);
        const int iters = detail::newton_iterations(delta);
        results[c] = F == 1 ? detail::dispatch_double_chunk<1>(ff1, r.sign, r.m0, r.m1, iters)
                            : detail::dispatch_double_chunk<2>(ff, r.sign, r.m0, r.m1, iters);
      }
    });
  }

  TieredSum out;
  BigReal acc(bits);
  double max_residual = 0.0;
  for (std::size_t c = ranges.size(); c-- > 0;) {  // outermost chunks first
    BigReal hi(bits), lo(bits);
    mpfr_set_d(hi.raw(), results[c].sum.hi, MPFR_RNDN);
    mpfr_set_d(lo.raw(), results[c].sum.lo, MPFR_RNDN);
    acc += hi;
    acc += lo;
    max_residual = std::max(max_residual, results[c].max_residual);
    (ranges[c].tier == detail::Tier::double_double ? out.double_double_terms
                                                   : out.double_terms) += ranges[c].m1 - ranges[c].m0;
  }
  const std::uint64_t far_chunks = ranges.size();

  // Near field, pairs (-m, m) from m = M1 inward, then n = 0.
  BigReal abs_near(bits), pair(bits);
  for (std::uint64_t m = m_dd; m >= 1; --m) {
    const auto n = static_cast<std::int64_t>(m);
    BigReal a = series.core_term(-n, bits), b = series.core_term(n, bits);
    pair = a + b;
    acc += pair;
    abs_near += abs(a);
    abs_near += abs(b);
  }
  {
    BigReal a = series.core_term(0, bits);
    acc += a;
    abs_near += abs(a);
  }
  out.mpfr_terms = 2 * m_dd + 1;
  out.max_newton_residual = max_residual;
  out.sum = acc * BigReal(series.scale(), bits);

  // Rounding bound, absolute, in term units.
  const BigReal scale(series.scale(), 64);
  BigReal far_dd_abs(0L, 64), far_double_abs(0L, 64);
  if (m_double > m_dd) far_dd_abs = series.tail_bound(m_dd);
  if (N > m_double) far_double_abs = series.tail_bound(m_double);
  const double residual_bound = max_residual * (1.0 + 4.0 * u);
  const double eps_double =
      1.01 * (static_cast<double>(E) * residual_bound + static_cast<double>(E - 1) * u) +
      3.0 * (static_cast<double>(detail::chunk_terms) / detail::double_lanes + 8.0) * u * u;

  // Every MPFR addition into acc is bounded by total_abs ulps; each near term
  // carries 2F-1 roundings of its own.
  BigReal total_abs = abs_near * scale + far_dd_abs + far_double_abs;
  BigReal bound = total_abs *
                  static_cast<long>(2 * F + 8 + 2 * out.mpfr_terms + 2 * far_chunks);
  mpfr_mul_2si(bound.raw(), bound.raw(), -(bits - 1), MPFR_RNDN);
  BigReal eps(64);
  mpfr_set_d(eps.raw(), 1.01 * eps_dd, MPFR_RNDU);
  bound += far_dd_abs * eps;
  if (N > m_double) {
    mpfr_set_d(eps.raw(), eps_double, MPFR_RNDU);
    bound += far_double_abs * eps;
  }
  out.rounding_bound = ReciprocalSeries::inflate(bound, 64);
  return out;
}

/// Parameters of sum_{n=-N}^{N} 1/(x-n)^(k+2).
struct SeriesParams {
  Rational x;
  unsigned k = 0;
  std::uint64_t N = 1;
  mpfr_prec_t precision_bits = 256;

  void validate() const {
    if (is_integer(x)) throw PoleError("series has a pole at integer x = " + to_string(x));
    if (Rational(Integer(std::to_string(N))) <= abs(x) + 1)
      throw ParameterError("truncation radius N = " + std::to_string(N) + " must exceed |x| + 1");
    if (precision_bits < 16) throw ParameterError("precision must be at least 16 bits");
  }
};

struct SeriesResult {
  BigReal partial_sum;
  /// Integral-test bound on the omitted terms |n| > N.
  BigReal tail_bound;
  /// Bound on the floating-point error of partial_sum.
  BigReal rounding_bound;
  SeriesParams params;
  mpfr_prec_t working_bits = 0;
  std::uint64_t mpfr_terms = 0;
  std::uint64_t double_double_terms = 0;
  std::uint64_t double_terms = 0;

  /// tail_bound + rounding_bound: |true sum - partial_sum| never exceeds this.
  BigReal total_bound() const { return tail_bound + rounding_bound; }
};

inline ReciprocalSeries bilateral_series(const Rational& x, unsigned k) {
  return ReciprocalSeries({{x, k + 2}});
}

/// Working precision of a bilateral sum: T + 32 + bit_length(N).
inline mpfr_prec_t series_working_precision(mpfr_prec_t target_bits, std::uint64_t N) {
  return target_bits + 32 + static_cast<mpfr_prec_t>(detail::bit_length(N));
}

/// sum_{n=-N}^{N} 1/(x-n)^(k+2) with tail bound 2/((k+1)(N-|x|-1)^(k+1)).
inline SeriesResult bilateral_sum(const SeriesParams& params, const SummationOptions& options = {}) {
  params.validate();
  const mpfr_prec_t bits = series_working_precision(params.precision_bits, params.N);
  ReciprocalSeries series = bilateral_series(params.x, params.k);
  TieredSum s = symmetric_sum(series, params.N, bits, options);
  SeriesResult out;
  out.partial_sum = std::move(s.sum);
  out.tail_bound = series.tail_bound(params.N);
  out.rounding_bound = std::move(s.rounding_bound);
  out.params = params;
  out.working_bits = bits;
  out.mpfr_terms = s.mpfr_terms;
  out.double_double_terms = s.double_double_terms;
  out.double_terms = s.double_terms;
  return out;
}

/// Smallest N > |x| + 1 whose tail bound 2/((k+1)(N-|x|-1)^(k+1)) is <= target.
inline std::uint64_t choose_truncation(const Rational& x, unsigned k, const BigReal& target_abs_error) {
  if (!(target_abs_error.sign() > 0) || !target_abs_error.is_finite())
    throw ParameterError("target error must be positive and finite");
  ReciprocalSeries series = bilateral_series(x, k);
  const Rational X = abs(x);
  // gap >= (2 / ((k+1) target))^(1/(k+1))
  BigReal g(2L, 128);
  g /= BigReal(target_abs_error, 128);
  g /= static_cast<long>(k + 1);
  mpfr_rootn_ui(g.raw(), g.raw(), k + 1, MPFR_RNDU);
  BigReal n0 = g + BigReal(Rational(X + 1), 128);
  mpfr_ceil(n0.raw(), n0.raw());
  if (n0 > BigReal(Integer("4611686018427387904"), 128))  // 2^62
    throw ParameterError("target error " + target_abs_error.to_string() +
                         " needs more than 2^62 terms at k = " + std::to_string(k));
  Integer nz;
  mpfr_get_z(nz.get_mpz_t(), n0.raw(), MPFR_RNDN);
  std::uint64_t N = std::stoull(nz.get_str());
  const Integer smallest = Integer(mpz_class(X.get_num() / X.get_den())) + 2;  // > X + 1
  N = std::max<std::uint64_t>(N, std::stoull(smallest.get_str()));
  auto ok = [&](std::uint64_t n) { return series.tail_bound(n, 128) <= target_abs_error; };
  while (!ok(N)) ++N;
  while (N > std::stoull(smallest.get_str()) && ok(N - 1)) --N;
  return N;
}

}  // namespace pipowers
