#include <gtest/gtest.h>

#include <set>

#include "pipowers/json_io.hpp"
#include "pipowers/verify.hpp"

using namespace pipowers;

namespace {

constexpr mpfr_prec_t T = 256;

}  // namespace

TEST(CotangentIdentity, QuarterAgainstHalfGivesPi) {
  auto r = cotangent_identity(Rational(1, 4), Rational(1, 2), 100'000, T);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(abs(r.lhs - const_pi(T)), BigReal::pow2(-(T - 4), 64));
  EXPECT_EQ(r.identity_name, "cotangent_difference");
}

TEST(CotangentIdentity, ThirdAgainstTwoThirds) {
  auto r = cotangent_identity(Rational(1, 3), Rational(2, 3), 100'000, T);
  EXPECT_TRUE(r.pass);
  BigReal expected = BigReal::parse("3.6275987284684357011881565152843114645681324961855", T);
  EXPECT_LE(abs(r.lhs - expected), BigReal::parse("1e-48", 64));
}

TEST(CotangentIdentity, Preconditions) {
  EXPECT_THROW(cotangent_identity(Rational(1, 3), Rational(1, 3), 100, T), ParameterError);
  EXPECT_THROW(cotangent_identity(Rational(1), Rational(1, 3), 100, T), PoleError);
  EXPECT_THROW(cotangent_identity(Rational(1, 3), Rational(-2), 100, T), PoleError);
}

TEST(CotangentIdentity, TinyNFailsAgainstLargeNTolerance) {
  auto big = cotangent_identity(Rational(1, 5), Rational(1, 10), 1'000'000, T);
  auto small = cotangent_identity(Rational(1, 5), Rational(1, 10), 20, T);
  EXPECT_TRUE(big.pass);
  EXPECT_TRUE(small.pass);  // its own bound still holds
  EXPECT_GT(small.abs_diff, big.tolerance);
}

TEST(FornbergWeights, KnownStencils) {
  auto w = central_difference_weights(1, 1);
  EXPECT_EQ(w, (std::vector<Rational>{Rational(-1, 2), 0, Rational(1, 2)}));
  w = central_difference_weights(2, 1);
  EXPECT_EQ(w, (std::vector<Rational>{1, -2, 1}));
  w = central_difference_weights(1, 2);
  EXPECT_EQ(w, (std::vector<Rational>{Rational(1, 12), Rational(-2, 3), 0, Rational(2, 3), Rational(-1, 12)}));
  w = central_difference_weights(4, 2);
  EXPECT_EQ(w, (std::vector<Rational>{1, -4, 6, -4, 1}));
}

TEST(FiniteDifferenceOracle, AgreesWithClosedForm) {
  for (Rational x : {Rational(1, 4), Rational(1, 3), Rational(3, 10)}) {
    for (unsigned k = 0; k <= 5; ++k) {
      auto fd = finite_difference_oracle(k, x, T);
      BigReal exact = lhs_value(k, EvalPoint(x, T));
      BigReal rel = abs(fd.value - exact) / abs(exact);
      EXPECT_LE(rel, BigReal::parse("1e-20", 64)) << "k=" << k << " x=" << x.get_str();
      // The estimate is an honest upper indication of the actual error.
      if (k > 0) EXPECT_LE(abs(fd.value - exact), fd.error_estimate * 2L + BigReal::pow2(-(T - 32), 64));
    }
  }
}

TEST(FiniteDifferenceOracle, QuarterOrderOneIsMinusFourPiCubed) {
  auto fd = finite_difference_oracle(1, Rational(1, 4), T);
  BigReal expected = pow(const_pi(T), 3) * -4L;
  EXPECT_LE(abs(fd.value - expected) / abs(expected), BigReal::parse("1e-20", 64));
  EXPECT_THROW(finite_difference_oracle(7, Rational(1, 4), T), ParameterError);
  EXPECT_THROW(finite_difference_oracle(2, Rational(2), T), PoleError);
}

TEST(FiniteDifference, DerivativeOfClosedFormIsNextOrder) {
  for (unsigned k = 0; k <= 4; ++k) {
    for (Rational x : {Rational(1, 4), Rational(2, 7)}) {
      auto fd = finite_difference(1, x, T, [k](const Rational& t, mpfr_prec_t bits) {
        return lhs_value(k, EvalPoint(t, bits));
      });
      BigReal next = lhs_value(k + 1, EvalPoint(x, T));
      EXPECT_LE(abs(fd.value - next) / abs(next), BigReal::parse("1e-20", 64)) << "k=" << k;
    }
  }
}

TEST(Suite, ManifestIsSortedAndUnique) {
  auto m = suite_manifest();
  EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
  EXPECT_EQ(std::adjacent_find(m.begin(), m.end()), m.end());
}

namespace {

SuiteConfig quick_config() {
  SuiteConfig cfg;
  cfg.target_error = BigReal::parse("1e-18", 128);
  cfg.pi_k_max = 6;
  cfg.route_k_max = 6;
  cfg.recurrence_k_max = 8;
  cfg.cotangent_N = 200'000;
  cfg.max_truncation = 10'000'000;
  return cfg;
}

}  // namespace

TEST(Suite, QuickConfigPassesAndIsSorted) {
  auto reports = run_suite(quick_config());
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.identity_name << " " << r.parameters();
  EXPECT_EQ(reports.back().identity_name, "suite_coverage");
  for (std::size_t i = 1; i + 1 < reports.size(); ++i) {
    const auto& a = reports[i - 1];
    const auto& b = reports[i];
    EXPECT_TRUE(a.identity_name < b.identity_name ||
                (a.identity_name == b.identity_name && a.parameters() <= b.parameters()));
  }
  for (const auto& r : reports) EXPECT_FALSE(r.tolerance_provenance.empty()) << r.identity_name;
  EXPECT_TRUE(all_pass(reports));
}

TEST(Suite, DeterministicOutput) {
  auto cfg = quick_config();
  cfg.pi_k_max = 3;
  auto a = run_suite(cfg), b = run_suite(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(to_json(a[i]).dump(), to_json(b[i]).dump());
}

TEST(Suite, TinyTruncationFailsSeriesChecks) {
  auto cfg = quick_config();
  cfg.pi_k_max = 4;
  cfg.n_override = 30;
  auto reports = run_suite(cfg);
  EXPECT_FALSE(all_pass(reports));
  std::set<std::string> failed;
  for (const auto& r : reports)
    if (!r.pass) {
      failed.insert(r.identity_name);
      EXPECT_GT(r.tolerance_kind == ToleranceKind::absolute ? r.abs_diff : r.rel_diff, r.tolerance);
    }
  for (const char* name : {"cotangent_difference", "pi_power", "worked_example_k2", "cosec_squared_series"})
    EXPECT_TRUE(failed.count(name)) << name;
  // Checks with no series in them are unaffected.
  for (const char* name : {"route_multi_index_vs_bell", "fdb_recurrence", "bell_egf", "fd_oracle"})
    EXPECT_FALSE(failed.count(name)) << name;
}

TEST(Suite, CoverageDetectsMissingAndDuplicateEntries) {
  std::vector<VerificationReport> reports;
  for (const auto& name : suite_manifest())
    reports.push_back(make_report(name, BigReal(1L, 64), BigReal(1L, 64), BigReal(0L, 64),
                                  ToleranceKind::absolute, "test", {{"k", "1"}}));
  EXPECT_TRUE(coverage_report(reports).pass);
  reports.push_back(reports.front());
  EXPECT_FALSE(coverage_report(reports).pass);
  reports.pop_back();
  reports.pop_back();
  EXPECT_FALSE(coverage_report(reports).pass);
}

TEST(ReportJson, RoundTripsDecimals) {
  auto r = cotangent_identity(Rational(1, 3), Rational(2, 3), 1000, T);
  auto j = nlohmann::ordered_json::parse(to_json(r).dump());
  EXPECT_EQ(j["identity"], "cotangent_difference");
  EXPECT_EQ(BigReal::parse(j["lhs"].get<std::string>(), r.lhs.precision()), r.lhs);
  EXPECT_EQ(BigReal::parse(j["rhs"].get<std::string>(), r.rhs.precision()), r.rhs);
  EXPECT_EQ(j["metadata"]["N"], "1000");
  EXPECT_EQ(j["tolerance_kind"], "absolute");
}
