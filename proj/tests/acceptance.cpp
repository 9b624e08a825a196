// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>

#include "pipowers/pipowers.hpp"

using namespace pipowers;

namespace {

constexpr mpfr_prec_t T = 256;
int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(const BigReal& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v.to_double());
  return buf;
}

BigReal rel(const BigReal& a, const BigReal& b) { return abs(a - b) / abs(b); }

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  const BigReal target = BigReal::parse("1e-30", 128);
  const std::vector<Rational> sweep{Rational(1, 4), Rational(1, 3), Rational(1, 5), Rational(1, 6),
                                    Rational(1, 10)};

  // 1. pi^(k+2) for k = 2..12 at five points.
  std::map<std::pair<unsigned, std::string>, PiComputation> pis;
  {
    bool ok = true;
    unsigned min_digits = ~0u;
    std::string worst;
    for (unsigned k = 2; k <= 12; ++k) {
      for (const Rational& x : sweep) {
        auto c = compute_pi_power(k, x, choose_truncation(x, k, target), T);
        if (!c.pass || c.correct_digits < 30) {
          ok = false;
          worst += " k=" + std::to_string(k) + ",x=" + to_string(x);
        }
        min_digits = std::min(min_digits, c.correct_digits);
        pis.emplace(std::make_pair(k, to_string(x)), std::move(c));
      }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0f s", secs);
    report(1, ok && secs < 300,
           "55 points within guaranteed bound, min correct_digits " + std::to_string(min_digits) +
               ", " + buf + (worst.empty() ? "" : ", failing:" + worst));
  }

  // 2. k = 0 at x = 1/2 with N = 10^6.
  {
    const std::uint64_t N = 1'000'000;
    auto c = compute_pi_power(0, Rational(1, 2), N, T);
    BigReal tail(Rational(4, 2 * static_cast<long>(N) - 3), 64);  // 2/(N - 3/2)
    bool ok = c.abs_error <= tail && c.correct_digits >= 5;
    report(2, ok, "abs_error " + sci(c.abs_error) + " <= " + sci(tail) + ", correct_digits " +
                      std::to_string(c.correct_digits));
  }

  // 3. k = 2 worked example at auto N (relative 1e-30); k = 1 at N = 10^5 (relative 1e-10).
  {
    bool ok = true;
    std::string detail;
    const BigReal tight = BigReal::parse("1e-30", 64), loose = BigReal::parse("1e-10", 64);
    for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(1, 6)}) {
      auto r = worked_example_k2(x, pis.at({2, to_string(x)}).series);
      bool point_ok = r.pass && r.rel_diff <= tight;
      ok = ok && point_ok;
      detail += " k=2,x=" + to_string(x) + ":" + sci(r.rel_diff);

      auto s = bilateral_sum({x, 1, 100'000, T});
      auto sc = sin_cos_pi(x, s.working_bits);
      BigReal closed = pow(const_pi(s.working_bits), 3) * sc.cos / pow(sc.sin, 3);
      BigReal d = rel(s.partial_sum, closed);
      ok = ok && d <= loose;
      detail += " k=1,x=" + to_string(x) + ":" + sci(d);
    }
    report(3, ok, "relative discrepancies" + detail);
  }

  // 4. Three derivative routes at 256 bits.
  {
    bool ok = true;
    BigReal worst(0L, 64);
    const BigReal tol = BigReal::pow2(-240, 64);
    for (const Rational& x : {Rational(1, 5), Rational(1, 4), Rational(1, 3)}) {
      for (unsigned k = 1; k <= 10; ++k) {
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
        for (BigReal d : {rel(multi, bell), rel(multi, inverse), rel(bell, inverse)}) {
          ok = ok && d <= tol;
          worst = max(worst, BigReal(d, 64));
        }
      }
    }
    report(4, ok, "max pairwise relative difference " + sci(worst) + " <= 2^-240");
  }

  // 5. Exact combinatorics.
  {
    bool ok = true;
    for (unsigned k = 1; k <= 12; ++k) ok = ok && coefficient_recurrence_check(k);
    std::size_t top = coefficient_table(13)->entries.size();
    ok = ok && top == 101;
    std::vector<Integer> p(31, 0);
    p[0] = 1;
    for (unsigned part = 1; part <= 30; ++part)
      for (unsigned n = part; n <= 30; ++n) p[n] += p[n - part];
    for (unsigned k = 1; k <= 30; ++k) {
      Integer count = 0;
      for_each_multi_index(k, [&](const MultiIndex&) { ++count; });
      ok = ok && count == p[k];
    }
    for (unsigned k = 1; k <= 13; ++k) {
      for (const auto& e : coefficient_table(k)->entries) {
        Integer den = 1;
        auto m = e.index.multiplicities();
        for (unsigned j = 1; j <= m.size(); ++j)
          for (unsigned i = 0; i < m[j - 1]; ++i) den *= factorial(j) * Integer(i + 1);
        ok = ok && factorial(k) % den == 0 && factorial(k) / den == e.coefficient;
      }
    }
    report(5, ok, "recurrence k<=12, p(13)=" + std::to_string(top) +
                      ", counts p(k) for k<=30, exact coefficient divisions");
  }

  // 6. Bell layer.
  {
    bool ok = true;
    std::mt19937 rng(20240917);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int trial = 0; trial < 5; ++trial) {
      BellArguments args;
      for (int i = 0; i < 12; ++i) args.push_back(dist(rng));
      ok = ok && egf_check(args, 12).pass;
      for (unsigned k = 1; k <= 12; ++k) {
        Rational sum = 0;
        for (unsigned l = 1; l <= k; ++l) sum += partial_bell(k, l, args);
        ok = ok && sum == complete_bell(k, args);
      }
    }
    std::vector<Integer> row{1}, bell{1};
    for (unsigned n = 1; n <= 15; ++n) {
      std::vector<Integer> next{row.back()};
      for (const auto& v : row) next.push_back(next.back() + v);
      row = std::move(next);
      bell.push_back(row.front());
    }
    BellArguments ones(15, Rational(1));
    for (unsigned k = 1; k <= 15; ++k) ok = ok && complete_bell(k, ones) == Rational(bell[k]);
    report(6, ok, "EGF to order 12 (seed 20240917), complete = sum of partial for k<=12, Bell numbers to 15");
  }

  // 7. Finite-difference oracle.
  {
    bool ok = true;
    BigReal worst(0L, 64);
    const BigReal tol = BigReal::parse("1e-20", 64);
    for (const Rational& x : {Rational(1, 4), Rational(1, 3), Rational(3, 10)}) {
      for (unsigned k = 0; k <= 5; ++k) {
        auto fd = finite_difference_oracle(k, x, T);
        BigReal d = rel(fd.value, lhs_value(k, EvalPoint(x, T)));
        ok = ok && d <= tol;
        worst = max(worst, BigReal(d, 64));
      }
    }
    report(7, ok, "max relative difference " + sci(worst) + " <= 1e-20");
  }

  // 8. Cotangent difference at N = 10^7.
  {
    bool ok = true;
    std::string detail;
    const BigReal tol = BigReal::parse("1e-6", 64);
    for (auto [x, a] : {std::pair{Rational(1, 4), Rational(1, 2)}, std::pair{Rational(1, 3), Rational(2, 3)},
                        std::pair{Rational(1, 5), Rational(1, 10)}}) {
      auto r = cotangent_identity(x, a, 10'000'000, T);
      ok = ok && r.pass && r.abs_diff <= tol;
      detail += " (" + to_string(x) + "," + to_string(a) + "):" + sci(r.abs_diff);
    }
    report(8, ok, "abs differences" + detail + " <= 1e-6");
  }

  // 9. x-independence.
  {
    bool ok = true;
    unsigned pairs = 0;
    for (unsigned k = 2; k <= 10; ++k) {
      for (std::size_t i = 1; i < sweep.size(); ++i) {
        const auto& a = pis.at({k, to_string(sweep[i - 1])});
        const auto& b = pis.at({k, to_string(sweep[i])});
        ok = ok && abs(a.value - b.value) <= a.guaranteed_bound + b.guaranteed_bound;
        ++pairs;
      }
    }
    report(9, ok, std::to_string(pairs) + " consecutive-point pairs agree within summed bounds");
  }

  return failures == 0 ? 0 : 1;
}
