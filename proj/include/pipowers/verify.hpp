#pragma once

// Identity checks with a-priori tolerances, an independent finite-difference
// oracle, and the regression suite that runs them all.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pipowers/analytic_kernel.hpp"
#include "pipowers/bell.hpp"
#include "pipowers/combinatorics.hpp"
#include "pipowers/pi_engine.hpp"
#include "pipowers/report.hpp"
#include "pipowers/series_sum.hpp"

namespace pipowers {

namespace detail {

inline std::string str(std::uint64_t v) { return std::to_string(v); }

/// Absolute error bound of `count` correctly rounded operations on values of
/// size at most |v| at `bits`.
inline BigReal rounding(const BigReal& v, long count, mpfr_prec_t bits) {
  BigReal r = abs(BigReal(v, 64));
  r *= count;
  mpfr_mul_2si(r.raw(), r.raw(), -(bits - 1), MPFR_RNDN);
  return r;
}

}  // namespace detail

/// pi [cot(pi x) - cot(pi a)] against sum_{|n|<=N} (a-x)/((x-n)(a-n)).
inline VerificationReport cotangent_identity(const Rational& x_in, const Rational& a_in,
                                             std::uint64_t N, mpfr_prec_t precision_bits,
                                             const SummationOptions& options = {}) {
  Rational x = x_in, a = a_in;
  x.canonicalize();
  a.canonicalize();
  if (x == a) throw ParameterError("cotangent identity needs x != a");
  ReciprocalSeries series({{x, 1}, {a, 1}});  // rejects integer x or a
  const mpfr_prec_t wp = series_working_precision(precision_bits, N);

  auto cot_pi = [&](const Rational& t) {
    auto sc = sin_cos_pi(t, wp);
    return sc.cos / sc.sin;
  };
  BigReal pi = const_pi(wp);
  BigReal lhs = pi * (cot_pi(x) - cot_pi(a));

  TieredSum s = symmetric_sum(series, N, wp, options);
  const Rational diff = a - x;
  BigReal rhs = s.sum * diff;
  BigReal tail = series.tail_bound(N) * abs(diff);
  BigReal tol = tail + s.rounding_bound * abs(diff);
  tol += detail::rounding(lhs, 8, wp) + detail::rounding(rhs, 2, wp);
  tol = ReciprocalSeries::inflate(tol, 64);

  return make_report("cotangent_difference", lhs, rhs, tol, ToleranceKind::absolute,
                     "integral-test tail bound |a-x| * 2/(N-max(|x|,|a|)-1) plus rounding bound",
                     {{"x", to_string(x)},
                      {"a", to_string(a)},
                      {"N", detail::str(N)},
                      {"precision_bits", std::to_string(precision_bits)},
                      {"diag.tail_bound", BigReal(tail, 64).to_string()}});
}

/// Weights w_i with f^(m)(0) ~ sum_i w_i f(i h) / h^m on the integer grid
/// -r..r, exact (Fornberg's recurrence).
inline std::vector<Rational> central_difference_weights(unsigned m, unsigned r) {
  const int n = static_cast<int>(2 * r + 1);
  std::vector<Rational> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = i - static_cast<int>(r);
  // c[i][d]: weight of node i for derivative order d.
  std::vector<std::vector<Rational>> c(static_cast<std::size_t>(n),
                                       std::vector<Rational>(m + 1, Rational(0)));
  Rational c1 = 1;
  c[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const unsigned mn = std::min<unsigned>(static_cast<unsigned>(i), m);
    Rational c2 = 1;
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      Rational c3 = z[ui] - z[uj];
      c2 *= c3;
      if (j == i - 1) {
        for (unsigned d = mn; d >= 1; --d)
          c[ui][d] = c1 * (Rational(d) * c[ui - 1][d - 1] - z[ui - 1] * c[ui - 1][d]) / c2;
        c[ui][0] = -c1 * z[ui - 1] * c[ui - 1][0] / c2;
      }
      for (unsigned d = mn; d >= 1; --d)
        c[uj][d] = (z[ui] * c[uj][d] - Rational(d) * c[uj][d - 1]) / c3;
      c[uj][0] = z[ui] * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Rational> w;
  for (int i = 0; i < n; ++i) w.push_back(c[static_cast<std::size_t>(i)][m]);
  return w;
}

/// A numerical derivative with an error estimate |D(h) - D(2h)|.
struct FiniteDifference {
  BigReal value;
  BigReal error_estimate;
  Rational step;
  unsigned stencil_points = 0;
};

/// k-th derivative at x of a function of an exact rational argument, using a
/// central stencil of accuracy order >= k + 2 and step 2^-floor(T/(2k+2)).
inline FiniteDifference finite_difference(unsigned k, const Rational& x, mpfr_prec_t precision_bits,
                                          const std::function<BigReal(const Rational&, mpfr_prec_t)>& f) {
  const unsigned order = (k + 3) / 2 * 2;  // even and >= k + 2
  const unsigned r = (k + order + 1) / 2;  // 2r + 1 points reach that order
  const long e = std::max<long>(1, precision_bits / (2 * static_cast<long>(k) + 2));
  // Each evaluation loses up to k*e bits to the division by h^k.
  const mpfr_prec_t bits = precision_bits + 64 + static_cast<mpfr_prec_t>(k) * e;
  auto weights = central_difference_weights(k, r);

  auto stencil = [&](long exponent) {
    Rational h(1);
    mpq_div_2exp(h.get_mpq_t(), h.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
    BigReal acc(bits);
    for (unsigned i = 0; i < weights.size(); ++i) {
      if (weights[i] == 0) continue;
      Rational t = x + Rational(static_cast<long>(i) - static_cast<long>(r)) * h;
      acc += f(t, bits) * weights[i];
    }
    mpfr_mul_2si(acc.raw(), acc.raw(), static_cast<long>(k) * exponent, MPFR_RNDN);
    return std::make_pair(acc, h);
  };
  auto [fine, h] = stencil(e);
  auto coarse = stencil(e - 1).first;
  FiniteDifference out;
  out.error_estimate = abs(fine - coarse);
  out.value = std::move(fine);
  out.step = h;
  out.stencil_points = 2 * r + 1;
  return out;
}

/// k-th derivative of pi^2 / sin^2(pi x) by finite differences of direct
/// evaluations; shares no code with the closed-form derivative formulas.
inline FiniteDifference finite_difference_oracle(unsigned k, const Rational& x,
                                                 mpfr_prec_t precision_bits) {
  if (k > 6) throw ParameterError("finite-difference oracle supports k <= 6");
  if (is_integer(x)) throw PoleError("pi^2/sin^2(pi x) has a pole at integer x = " + to_string(x));
  auto f = [](const Rational& t, mpfr_prec_t bits) {
    BigReal s = sin_cos_pi(t, bits).sin;
    BigReal pi = const_pi(bits);
    return (pi * pi) / (s * s);
  };
  if (k == 0) {
    FiniteDifference out;
    out.value = f(x, precision_bits + 32);
    out.error_estimate = BigReal(0L, 64);
    out.stencil_points = 1;
    return out;
  }
  return finite_difference(k, x, precision_bits, f);
}

/// Names every identity the suite must cover.
inline const std::vector<std::string>& suite_manifest() {
  static const std::vector<std::string> names{
      "bell_complete_vs_partial", "bell_egf",           "bell_numbers",
      "cosec_squared_series",     "cot_cosec_squared_series", "cotangent_difference",
      "degenerate_point",         "fd_oracle",          "fdb_recurrence",
      "lhs_k1_special",           "lhs_k2_special",     "multi_index_count",
      "pi_power",                 "pi_x_independence",  "route_bell_vs_inverse",
      "route_multi_index_vs_bell", "route_multi_index_vs_inverse", "worked_example_k2"};
  return names;
}

struct SuiteConfig {
  mpfr_prec_t precision_bits = 256;
  BigReal target_error = BigReal::parse("1e-30", 128);
  /// Largest k in the end-to-end pi^(k+2) sweep.
  unsigned pi_k_max = 12;
  /// Largest k in the route-equivalence checks.
  unsigned route_k_max = 10;
  /// Largest k for the coefficient recurrence.
  unsigned recurrence_k_max = 12;
  /// Largest k for the finite-difference oracle.
  unsigned fd_k_max = 5;
  std::vector<Rational> sweep_points{Rational(1, 4), Rational(1, 3), Rational(1, 5), Rational(1, 6),
                                     Rational(1, 10)};
  /// Sweep points whose truncation radius exceeds this are skipped.
  std::uint64_t max_truncation = std::uint64_t{1} << 34;
  std::uint64_t cotangent_N = 10'000'000;
  std::uint64_t slow_N = 1'000'000;
  std::uint64_t k1_N = 100'000;
  /// When nonzero, every auto-chosen truncation radius is replaced by this,
  /// while tolerances still derive from the auto-chosen radius.
  std::uint64_t n_override = 0;
  std::uint32_t seed = 20240917;
  SummationOptions summation;
};

namespace detail {

class SeriesCache {
 public:
  explicit SeriesCache(const SuiteConfig& cfg) : cfg_(cfg) {}

  const SeriesResult& get(const Rational& x, unsigned k, std::uint64_t N) {
    auto key = std::make_tuple(to_string(x), k, N);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, bilateral_sum(SeriesParams{x, k, N, cfg_.precision_bits},
                                             cfg_.summation)).first;
    return it->second;
  }

 private:
  const SuiteConfig& cfg_;
  std::map<std::tuple<std::string, unsigned, std::uint64_t>, SeriesResult> cache_;
};

inline VerificationReport boolean_report(std::string name, bool ok, std::string provenance,
                                         std::vector<std::pair<std::string, std::string>> meta) {
  return make_report(std::move(name), BigReal(ok ? 1L : 0L, 64), BigReal(1L, 64),
                     BigReal(0L, 64), ToleranceKind::absolute, std::move(provenance),
                     std::move(meta));
}

inline VerificationReport exact_report(std::string name, const Rational& lhs, const Rational& rhs,
                                       std::vector<std::pair<std::string, std::string>> meta) {
  auto r = make_report(std::move(name), BigReal(lhs, 256), BigReal(rhs, 256), BigReal(0L, 64),
                       ToleranceKind::absolute, "exact rational comparison", std::move(meta));
  r.pass = lhs == rhs;
  return r;
}

/// Series-side check against a closed form: tolerance = tail + rounding of the
/// series times |scale| plus closed-form rounding.
inline VerificationReport series_report(std::string name, const BigReal& closed_form,
                                        const SeriesResult& s, const BigReal& tail_for_tolerance,
                                        ToleranceKind kind, std::string provenance) {
  BigReal tol = tail_for_tolerance + s.rounding_bound;
  tol += rounding(closed_form, 16, s.working_bits);
  tol = ReciprocalSeries::inflate(tol, 64);
  if (kind == ToleranceKind::relative) tol /= abs(BigReal(closed_form, 64));
  return make_report(std::move(name), closed_form, s.partial_sum, tol, kind, std::move(provenance),
                     {{"k", std::to_string(s.params.k)},
                      {"x", to_string(s.params.x)},
                      {"N", str(s.params.N)},
                      {"precision_bits", std::to_string(s.params.precision_bits)}});
}

}  // namespace detail

/// Checks that every manifest identity is present and no (identity,
/// parameters) pair repeats.
inline VerificationReport coverage_report(const std::vector<VerificationReport>& reports) {
  std::set<std::string> seen;
  std::set<std::pair<std::string, std::string>> points;
  unsigned duplicates = 0, unknown = 0;
  const auto& manifest = suite_manifest();
  for (const auto& r : reports) {
    seen.insert(r.identity_name);
    if (!points.emplace(r.identity_name, r.parameters()).second) ++duplicates;
    if (std::find(manifest.begin(), manifest.end(), r.identity_name) == manifest.end()) ++unknown;
  }
  std::string missing;
  for (const auto& name : manifest)
    if (!seen.count(name)) missing += (missing.empty() ? "" : ",") + name;
  return detail::boolean_report(
      "suite_coverage", missing.empty() && duplicates == 0 && unknown == 0, "static manifest",
      {{"identities", std::to_string(manifest.size())},
       {"diag.missing", missing.empty() ? "none" : missing},
       {"diag.duplicates", std::to_string(duplicates)},
       {"diag.unknown", std::to_string(unknown)}});
}

/// Runs every identity check and returns the reports sorted by identity name
/// then parameters, followed by the coverage check.
inline std::vector<VerificationReport> run_suite(const SuiteConfig& cfg) {
  using detail::str;
  std::vector<VerificationReport> out;
  detail::SeriesCache cache(cfg);
  const mpfr_prec_t T = cfg.precision_bits;
  auto radius = [&](std::uint64_t n) { return cfg.n_override ? cfg.n_override : n; };
  auto meta_kx = [&](unsigned k, const Rational& x) {
    return std::vector<std::pair<std::string, std::string>>{
        {"k", std::to_string(k)}, {"x", to_string(x)}, {"precision_bits", std::to_string(T)}};
  };

  // Cotangent difference series.
  for (auto [x, a] : {std::pair{Rational(1, 4), Rational(1, 2)}, std::pair{Rational(1, 3), Rational(2, 3)},
                      std::pair{Rational(1, 5), Rational(1, 10)}}) {
    const std::uint64_t n = radius(cfg.cotangent_N);
    auto r = cotangent_identity(x, a, n, T, cfg.summation);
    if (cfg.n_override) {
      ReciprocalSeries s({{x, 1}, {a, 1}});
      BigReal tol = s.tail_bound(cfg.cotangent_N) * abs(Rational(a - x));
      r.tolerance = ReciprocalSeries::inflate(tol, 64);
      r.pass = r.abs_diff <= r.tolerance;
    }
    out.push_back(std::move(r));
  }

  // pi^2/sin^2(pi x) and pi^3 cot cosec^2 against their series.
  {
    const Rational x(1, 2);
    const auto& s = cache.get(x, 0, radius(cfg.slow_N));
    auto t = trig_values(x, s.working_bits);
    BigReal closed = t->pi * t->pi / t->sin_sq;
    out.push_back(detail::series_report("cosec_squared_series", closed, s,
                                        bilateral_series(x, 0).tail_bound(cfg.slow_N),
                                        ToleranceKind::absolute,
                                        "integral-test tail bound 2/(N-|x|-1) plus rounding bound"));
  }
  for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(1, 6)}) {
    const auto& s = cache.get(x, 1, radius(cfg.k1_N));
    auto sc = sin_cos_pi(x, s.working_bits);
    BigReal pi = const_pi(s.working_bits);
    BigReal closed = pow(pi, 3) * sc.cos / pow(sc.sin, 3);
    out.push_back(detail::series_report(
        "cot_cosec_squared_series", closed, s, bilateral_series(x, 1).tail_bound(cfg.k1_N),
        ToleranceKind::relative,
        "integral-test tail bound 1/(N-|x|-1)^2 plus rounding bound, relative to the closed form"));
  }

  // Closed-form derivatives against trigonometric special cases.
  for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(1, 6), Rational(1, 5)}) {
    EvalPoint pt(x, T);
    const mpfr_prec_t wp = working_precision(T, 2);
    auto sc = sin_cos_pi(x, wp);
    BigReal pi = const_pi(wp);
    BigReal cosec2 = BigReal(1L, wp) / (sc.sin * sc.sin);
    BigReal k1 = -(lhs_value(1, pt) / 2L);
    BigReal k1_closed = pow(pi, 3) * (sc.cos / sc.sin) * cosec2;
    BigReal k2 = lhs_value(2, pt) / 6L;
    BigReal k2_closed = pow(pi, 4) * (cosec2 * cosec2 - cosec2 * Rational(2, 3));
    BigReal tol = BigReal::pow2(-(T - 16), 64);
    out.push_back(make_report("lhs_k1_special", k1, k1_closed, tol, ToleranceKind::relative,
                              "2^-(T-16) relative rounding allowance", meta_kx(1, x)));
    out.push_back(make_report("lhs_k2_special", k2, k2_closed, tol, ToleranceKind::relative,
                              "2^-(T-16) relative rounding allowance", meta_kx(2, x)));
  }

  // Three Faa di Bruno routes.
  for (const Rational& x : {Rational(1, 5), Rational(1, 4), Rational(1, 3)}) {
    EvalPoint pt(x, T);
    for (unsigned k = 1; k <= cfg.route_k_max; ++k) {
      const mpfr_prec_t wp = working_precision(T, k);
      EvalPoint wpt = pt.at_precision(wp);
      BigReal pi = const_pi(wp);
      BigReal y = h_value(wpt);
      std::vector<BigReal> g, h, hs{y};
      for (unsigned p = 0; p <= k; ++p) g.push_back(g_derivative(p, y));
      for (unsigned p = 1; p <= k; ++p) {
        h.push_back(h_derivative(p, wpt));
        hs.push_back(h.back());
      }
      BigReal pi2 = pi * pi;
      BigReal multi = lhs_value(k, pt);
      BigReal bell = faa_di_bruno_via_bell(g, h, k) * pi2;
      BigReal inverse = inverse_derivative(k, hs) * pi2;
      BigReal tol = BigReal::pow2(-240, 64);
      const char* prov = "2^-240 relative at 256 bits";
      out.push_back(make_report("route_multi_index_vs_bell", multi, bell, tol,
                                ToleranceKind::relative, prov, meta_kx(k, x)));
      out.push_back(make_report("route_multi_index_vs_inverse", multi, inverse, tol,
                                ToleranceKind::relative, prov, meta_kx(k, x)));
      out.push_back(make_report("route_bell_vs_inverse", bell, inverse, tol,
                                ToleranceKind::relative, prov, meta_kx(k, x)));
    }
  }

  // Exact combinatorics.
  for (unsigned k = 1; k <= cfg.recurrence_k_max; ++k)
    out.push_back(detail::boolean_report("fdb_recurrence", coefficient_recurrence_check(k),
                                         "exact integer recurrence", {{"k", std::to_string(k)}}));
  {
    // Partition numbers by the coin-counting recurrence.
    std::vector<Integer> p(31, 0);
    p[0] = 1;
    for (unsigned part = 1; part <= 30; ++part)
      for (unsigned n = part; n <= 30; ++n) p[n] += p[n - part];
    for (unsigned k = 1; k <= 30; ++k) {
      Integer count = 0;
      for_each_multi_index(k, [&](const MultiIndex&) { ++count; });
      out.push_back(detail::exact_report("multi_index_count", count, p[k], {{"k", std::to_string(k)}}));
    }
  }

  // Bell polynomials.
  {
    std::mt19937 rng(cfg.seed);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (unsigned trial = 0; trial < 3; ++trial) {
      BellArguments args;
      std::string text;
      for (unsigned i = 0; i < 12; ++i) {
        args.push_back(dist(rng));
        text += (i ? "," : "") + to_string(args.back());
      }
      auto r = egf_check(args, 12);
      r.metadata.insert(r.metadata.begin(), {"args", text});
      r.metadata.insert(r.metadata.begin(), {"seed", std::to_string(cfg.seed) + "#" + std::to_string(trial)});
      out.push_back(std::move(r));

      for (unsigned k = 1; k <= 12; ++k) {
        Rational partial_sum = 0;
        for (unsigned l = 1; l <= k; ++l) partial_sum += partial_bell(k, l, args);
        out.push_back(detail::exact_report(
            "bell_complete_vs_partial", complete_bell(k, args), partial_sum,
            {{"seed", std::to_string(cfg.seed) + "#" + std::to_string(trial)}, {"k", std::to_string(k)}}));
      }
    }
    // Bell numbers by the Bell triangle.
    std::vector<Integer> row{1}, bell_numbers{1};
    for (unsigned n = 1; n <= 15; ++n) {
      std::vector<Integer> next{row.back()};
      for (const auto& v : row) next.push_back(next.back() + v);
      row = std::move(next);
      bell_numbers.push_back(row.front());
    }
    BellArguments ones(15, Rational(1));
    for (unsigned k = 1; k <= 15; ++k)
      out.push_back(detail::exact_report("bell_numbers", complete_bell(k, ones), bell_numbers[k],
                                         {{"k", std::to_string(k)}}));
  }

  // Finite-difference oracle.
  for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(3, 10)}) {
    for (unsigned k = 0; k <= cfg.fd_k_max; ++k) {
      auto fd = finite_difference_oracle(k, x, T);
      auto meta = meta_kx(k, x);
      meta.emplace_back("diag.error_estimate", BigReal(fd.error_estimate, 64).to_string());
      meta.emplace_back("diag.stencil_points", std::to_string(fd.stencil_points));
      out.push_back(make_report("fd_oracle", lhs_value(k, EvalPoint(x, T)), fd.value,
                                BigReal::parse("1e-20", 64), ToleranceKind::relative,
                                "1e-20 relative oracle agreement at 256 bits", std::move(meta)));
    }
  }

  // Degenerate prefactor at x = 1/2 for odd k must be refused.
  for (unsigned k : {1u, 3u, 5u}) {
    bool refused = false;
    try {
      compute_pi_power(k, Rational(1, 2), 64, T, cfg.summation);
    } catch (const DegeneratePointError&) {
      refused = true;
    }
    out.push_back(detail::boolean_report("degenerate_point", refused,
                                         "engine must refuse a vanishing prefactor",
                                         meta_kx(k, Rational(1, 2))));
  }

  // End-to-end pi^(k+2).
  std::map<std::pair<unsigned, std::string>, PiComputation> pis;
  auto pi_report = [&](const PiComputation& c, std::uint64_t auto_n) {
    BigReal tol = c.bound_with_tail(bilateral_series(c.x, c.k).tail_bound(auto_n));
    auto r = make_report("pi_power", c.value, c.reference, tol, ToleranceKind::absolute,
                         "2x first-order propagation of tail, series rounding and prefactor rounding",
                         {{"k", std::to_string(c.k)},
                          {"x", to_string(c.x)},
                          {"N", str(c.N)},
                          {"precision_bits", std::to_string(c.precision_bits)},
                          {"diag.correct_digits", std::to_string(c.correct_digits)},
                          {"diag.guaranteed_bound", BigReal(c.guaranteed_bound, 64).to_string()}});
    return r;
  };
  {
    const Rational x(1, 2);
    PiComputation c = assemble_pi_power(0, x, cache.get(x, 0, radius(cfg.slow_N)), T);
    out.push_back(pi_report(c, cfg.slow_N));
  }
  for (unsigned k = 0; k <= cfg.pi_k_max; ++k) {
    for (const Rational& x : cfg.sweep_points) {
      std::uint64_t auto_n = 0;
      try {
        auto_n = choose_truncation(x, k, cfg.target_error);
      } catch (const ParameterError&) {
        continue;  // beyond 2^62 terms
      }
      if (auto_n > cfg.max_truncation) continue;
      PiComputation c = assemble_pi_power(k, x, cache.get(x, k, radius(auto_n)), T);
      out.push_back(pi_report(c, auto_n));
      pis.emplace(std::make_pair(k, to_string(x)), std::move(c));
    }
  }
  // The same series feed the k = 2 worked example.
  for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(1, 6)}) {
    std::uint64_t auto_n = choose_truncation(x, 2, cfg.target_error);
    auto r = worked_example_k2(x, cache.get(x, 2, radius(auto_n)));
    if (cfg.n_override) {
      const auto& s = cache.get(x, 2, radius(auto_n));
      BigReal tol = bilateral_series(x, 2).tail_bound(auto_n) * 3L + s.rounding_bound * 3L;
      r.tolerance = tol / abs(BigReal(r.rhs, 64));
      r.pass = r.rel_diff <= r.tolerance;
    }
    out.push_back(std::move(r));
  }
  // x-independence between consecutive sweep points with the same k.
  for (unsigned k = 2; k <= std::min(10u, cfg.pi_k_max); ++k) {
    const PiComputation* prev = nullptr;
    for (const Rational& x : cfg.sweep_points) {
      auto it = pis.find({k, to_string(x)});
      if (it == pis.end()) continue;
      const PiComputation& c = it->second;
      if (prev) {
        BigReal tol = prev->guaranteed_bound + c.guaranteed_bound;
        if (cfg.n_override)
          tol = prev->bound_with_tail(bilateral_series(prev->x, k).tail_bound(
                    choose_truncation(prev->x, k, cfg.target_error))) +
                c.bound_with_tail(bilateral_series(c.x, k).tail_bound(
                    choose_truncation(c.x, k, cfg.target_error)));
        out.push_back(make_report("pi_x_independence", prev->value, c.value, tol,
                                  ToleranceKind::absolute, "sum of both guaranteed bounds",
                                  {{"k", std::to_string(k)},
                                   {"x1", to_string(prev->x)},
                                   {"x2", to_string(c.x)},
                                   {"precision_bits", std::to_string(T)}}));
      }
      prev = &c;
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.identity_name != b.identity_name) return a.identity_name < b.identity_name;
    return a.parameters() < b.parameters();
  });
  out.push_back(coverage_report(out));
  return out;
}

inline bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

}  // namespace pipowers
