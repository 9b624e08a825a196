#include <gtest/gtest.h>

#include <random>

#include "pipowers/pipowers.hpp"

using namespace pipowers;

namespace {

constexpr std::uint32_t kSeed = 20240917;

Rational random_rational(std::mt19937& rng, int lo, int hi, int max_den) {
  std::uniform_int_distribution<int> num(lo * max_den, hi * max_den);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

BellArguments random_args(std::mt19937& rng, unsigned n) {
  BellArguments a;
  for (unsigned i = 0; i < n; ++i) a.push_back(random_rational(rng, -3, 3, 7));
  return a;
}

Rational power(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

TEST(BellProperties, Homogeneity) {
  // B_{k,l}(a b x_1, a b^2 x_2, ...) = a^l b^k B_{k,l}(x)
  std::mt19937 rng(kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_args(rng, 8);
    Rational a = random_rational(rng, -2, 2, 5), b = random_rational(rng, -2, 2, 5);
    BellArguments scaled;
    for (unsigned i = 0; i < x.size(); ++i) scaled.push_back(a * power(b, i + 1) * x[i]);
    for (unsigned k = 1; k <= 8; ++k)
      for (unsigned l = 1; l <= k; ++l)
        EXPECT_EQ(partial_bell(k, l, scaled), power(a, l) * power(b, k) * partial_bell(k, l, x))
            << "k=" << k << " l=" << l;
  }
}

TEST(BellProperties, CompleteBellRecurrence) {
  // B_{n+1} = sum_i C(n, i) x_{i+1} B_{n-i}
  std::mt19937 rng(kSeed + 1);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_args(rng, 12);
    for (unsigned n = 0; n + 1 <= 12; ++n) {
      Rational expected = 0;
      for (unsigned i = 0; i <= n; ++i)
        expected += Rational(binomial(n, i)) * x[i] * complete_bell(n - i, x);
      EXPECT_EQ(complete_bell(n + 1, x), expected) << "n=" << n;
    }
  }
}

TEST(BellProperties, UnitArgumentsGiveStirlingNumbers) {
  // S(n, l) = l S(n-1, l) + S(n-1, l-1), and the coefficient sum over
  // indices with l parts equals S(k, l).
  std::vector<std::vector<Integer>> S(13, std::vector<Integer>(13, 0));
  S[0][0] = 1;
  for (unsigned n = 1; n <= 12; ++n)
    for (unsigned l = 1; l <= n; ++l) S[n][l] = Integer(l) * S[n - 1][l] + S[n - 1][l - 1];
  BellArguments ones(12, Rational(1));
  for (unsigned k = 1; k <= 12; ++k) {
    std::vector<Integer> by_weight(k + 1, 0);
    for (const auto& e : coefficient_table(k)->entries) by_weight[e.weight] += e.coefficient;
    for (unsigned l = 1; l <= k; ++l) {
      EXPECT_EQ(partial_bell(k, l, ones), Rational(S[k][l])) << k << "," << l;
      EXPECT_EQ(by_weight[l], S[k][l]) << k << "," << l;
    }
  }
}

TEST(BellProperties, IndicatorArgumentsIsolateCoefficients) {
  // With x_j = t_j distinct primes, B_{k,l} is a sum of distinct monomials;
  // evaluating at x = e_j style indicators picks out single-part coefficients.
  for (unsigned k = 1; k <= 8; ++k) {
    for (unsigned j = 1; j <= k; ++j) {
      if (k % j) continue;
      BellArguments ind(k, Rational(0));
      ind[j - 1] = 1;
      // Only m_j = k/j survives: C = k! / ((j!)^(k/j) (k/j)!)
      unsigned parts = k / j;
      std::vector<unsigned> m(k, 0);
      m[j - 1] = parts;
      Integer c = coefficient_table(k)->coefficient(MultiIndex(m));
      EXPECT_EQ(partial_bell(k, parts, ind), Rational(c)) << k << "," << j;
      EXPECT_EQ(complete_bell(k, ind), Rational(c)) << k << "," << j;
    }
  }
}

TEST(BellProperties, EgfWithRandomArguments) {
  std::mt19937 rng(kSeed + 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_args(rng, 12);
    EXPECT_TRUE(egf_check(x, 12).pass) << trial;
  }
}

TEST(KernelProperties, RoutesAgreeAtRandomPoints) {
  std::mt19937 rng(kSeed + 3);
  constexpr mpfr_prec_t T = 256;
  for (int trial = 0; trial < 6; ++trial) {
    Rational x = random_rational(rng, 0, 1, 97);
    if (is_integer(x)) continue;
    for (unsigned k = 1; k <= 8; ++k) {
      const mpfr_prec_t wp = working_precision(T, k);
      EvalPoint wpt(x, wp);
      BigReal y = h_value(wpt);
      std::vector<BigReal> g, h, hs{y};
      for (unsigned p = 0; p <= k; ++p) g.push_back(g_derivative(p, y));
      for (unsigned p = 1; p <= k; ++p) {
        h.push_back(h_derivative(p, wpt));
        hs.push_back(h.back());
      }
      BigReal pi2 = pow(const_pi(wp), 2);
      BigReal multi = lhs_value(k, EvalPoint(x, T));
      BigReal bell = faa_di_bruno_via_bell(g, h, k) * pi2;
      BigReal inverse = inverse_derivative(k, hs) * pi2;
      BigReal tol = BigReal::pow2(-240, 64);
      EXPECT_LE(abs(multi - bell) / abs(multi), tol) << x.get_str() << " k=" << k;
      EXPECT_LE(abs(multi - inverse) / abs(multi), tol) << x.get_str() << " k=" << k;
    }
  }
}

TEST(KernelProperties, PeriodicityAndReflection) {
  std::mt19937 rng(kSeed + 4);
  constexpr mpfr_prec_t T = 256;
  for (int trial = 0; trial < 10; ++trial) {
    Rational x = random_rational(rng, 0, 1, 60);
    if (is_integer(x)) continue;
    for (unsigned k = 0; k <= 6; ++k) {
      BigReal v = lhs_value(k, EvalPoint(x, T));
      BigReal shifted = lhs_value(k, EvalPoint(x + 3, T));
      BigReal reflected = lhs_value(k, EvalPoint(Rational(1) - x, T));
      if (k % 2) reflected = -reflected;
      BigReal tol = abs(BigReal(v, 64)) * BigReal::pow2(-(T - 16), 64) + BigReal::pow2(-(T - 16), 64);
      EXPECT_LE(abs(v - shifted), tol) << x.get_str() << " k=" << k;
      EXPECT_LE(abs(v - reflected), tol) << x.get_str() << " k=" << k;
    }
  }
}

TEST(SeriesProperties, SumTimesFactorIsXIndependent) {
  // (-1)^k (k+1)!/lhs_value * sum = 1 at any x, checked with exact windows.
  std::mt19937 rng(kSeed + 5);
  constexpr mpfr_prec_t T = 192;
  for (int trial = 0; trial < 6; ++trial) {
    Rational x = random_rational(rng, 0, 1, 31);
    if (is_integer(x)) continue;
    for (unsigned k = 3; k <= 6; ++k) {
      auto s = bilateral_sum({x, k, 2000, T});
      BigReal closed = lhs_value(k, EvalPoint(x, T));
      mpfr_div_z(closed.raw(), closed.raw(), factorial(k + 1).get_mpz_t(), MPFR_RNDN);
      if (k % 2) closed = -closed;
      EXPECT_LE(abs(s.partial_sum - closed), s.total_bound() + BigReal::pow2(-(T - 24), 64))
          << x.get_str() << " k=" << k;
    }
  }
}
