#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "twotier/error.hpp"
#include "twotier/lognormal_algebra.hpp"

using namespace twotier;

namespace {

constexpr auto RR = RatioKind::RayleighOverRayleigh;
constexpr auto LR = RatioKind::LogNormalOverRayleigh;
constexpr auto RL = RatioKind::RayleighOverLogNormal;
constexpr auto LL = RatioKind::LogNormalOverLogNormal;

// Straightforward O(n^2) evaluation of the moment-matching formulas.
LogNormalParams naive_fw(const std::vector<WeightedTerm>& t, const CorrelationTable& c) {
  double u1 = 0.0, u2 = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& a = t[k].surrogate;
    u1 += t[k].weight * std::exp(a.m + a.s * a.s / 2.0);
    for (std::size_t l = 0; l < t.size(); ++l) {
      const auto& b = t[l].surrogate;
      const double d = k == l ? 1.0 : c.at(t[k].kind, t[l].kind);
      u2 += t[k].weight * t[l].weight *
            std::exp(a.m + b.m + (a.s * a.s + b.s * b.s + 2.0 * d * a.s * b.s) / 2.0);
    }
  }
  return {2.0 * std::log(u1) - 0.5 * std::log(u2), std::sqrt(std::log(u2) - 2.0 * std::log(u1))};
}

}  // namespace

TEST(QFunction, KnownValues) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(1.959963984540054), 0.025, 1e-12);
  EXPECT_NEAR(q_function(-1.0), 0.8413447460685429, 1e-14);
  EXPECT_NEAR(q_function(10.0), 7.619853024160527e-24, 1e-36);
}

TEST(LogNormalCcdf, MedianAndDomain) {
  const LogNormalParams p{0.3, 1.2};
  EXPECT_NEAR(lognormal_ccdf(p, std::exp(0.3)), 0.5, 1e-15);
  EXPECT_NEAR(lognormal_ccdf(p, std::exp(0.3 + 1.2)), q_function(1.0), 1e-15);
  EXPECT_THROW(lognormal_ccdf(p, 0.0), DomainError);
  EXPECT_THROW(lognormal_ccdf(p, -1.0), DomainError);
}

TEST(FentonWilkinson, SingleTermUnchanged) {
  const std::vector<WeightedTerm> t = {{1.0, LR, {-0.143, 1.1673}}};
  const auto r = fenton_wilkinson_combine(t, CorrelationTable::reported());
  EXPECT_NEAR(r.m, -0.143, 1e-12);
  EXPECT_NEAR(r.s, 1.1673, 1e-12);
}

TEST(FentonWilkinson, WeightShiftsMean) {
  const std::vector<WeightedTerm> t = {{3.5, RR, {0.0, 0.7979}}};
  const auto r = fenton_wilkinson_combine(t, CorrelationTable{});
  EXPECT_NEAR(r.m, std::log(3.5), 1e-12);
  EXPECT_NEAR(r.s, 0.7979, 1e-12);
}

TEST(FentonWilkinson, PerfectlyCorrelatedCopiesDouble) {
  CorrelationTable c;
  c.set(RR, RR, 1.0);
  const std::vector<WeightedTerm> t = {{1.0, RR, {0.2, 0.8}}, {1.0, RR, {0.2, 0.8}}};
  const auto r = fenton_wilkinson_combine(t, c);
  EXPECT_NEAR(r.m, 0.2 + std::log(2.0), 1e-12);
  EXPECT_NEAR(r.s, 0.8, 1e-9);
}

TEST(FentonWilkinson, MatchesNaiveFormula) {
  const auto c = CorrelationTable::reported();
  std::vector<WeightedTerm> t;
  std::mt19937 g(5);
  std::uniform_real_distribution<double> w(1e-4, 3.0);
  for (int k = 0; k < 12; ++k) t.push_back({w(g), RR, {0.0, 0.7979}});
  for (int k = 0; k < 9; ++k) t.push_back({w(g), LR, {-0.143, 1.1673}});
  const auto a = fenton_wilkinson_combine(t, c);
  const auto b = naive_fw(t, c);
  EXPECT_NEAR(a.m, b.m, 1e-10);
  EXPECT_NEAR(a.s, b.s, 1e-10);

  std::vector<WeightedTerm> f;
  for (int k = 0; k < 7; ++k) f.push_back({w(g), RL, {0.143, 1.1673}});
  for (int k = 0; k < 5; ++k) f.push_back({w(g), LL, {0.0, std::sqrt(2.0)}});
  const auto fa = fenton_wilkinson_combine(f, c);
  const auto fb = naive_fw(f, c);
  EXPECT_NEAR(fa.m, fb.m, 1e-10);
  EXPECT_NEAR(fa.s, fb.s, 1e-10);
}

TEST(FentonWilkinson, OrderInvariant) {
  const auto c = CorrelationTable::reported();
  std::vector<WeightedTerm> t;
  for (int k = 0; k < 30; ++k) {
    t.push_back({0.01 * (k + 1) * (k % 7 + 1), k % 3 ? RR : LR,
                 k % 3 ? LogNormalParams{0.0, 0.7979} : LogNormalParams{-0.143, 1.1673}});
  }
  const auto ref = fenton_wilkinson_combine(t, c);
  std::mt19937 g(11);
  for (int rep = 0; rep < 5; ++rep) {
    std::shuffle(t.begin(), t.end(), g);
    const auto r = fenton_wilkinson_combine(t, c);
    EXPECT_EQ(r.m, ref.m);
    EXPECT_EQ(r.s, ref.s);
  }
}

TEST(FentonWilkinson, HandlesWideWeightRange) {
  const auto c = CorrelationTable::reported();
  const std::vector<WeightedTerm> t = {{1e-300, RR, {0.0, 0.7979}}, {1e250, RR, {0.0, 0.7979}}};
  const auto r = fenton_wilkinson_combine(t, c);
  EXPECT_NEAR(r.m, std::log(1e250), 1e-9);
  EXPECT_NEAR(r.s, 0.7979, 1e-9);
}

TEST(FentonWilkinson, Errors) {
  const auto c = CorrelationTable::reported();
  EXPECT_THROW(fenton_wilkinson_combine(std::vector<WeightedTerm>{}, c), InvalidConfiguration);
  EXPECT_THROW(fenton_wilkinson_combine(std::vector<WeightedTerm>{{0.0, RR, {0.0, 1.0}}}, c),
               InvalidConfiguration);
  EXPECT_THROW(fenton_wilkinson_combine(std::vector<WeightedTerm>{{1.0, RR, {0.0, 1.0}},
                                                                  {std::numeric_limits<double>::infinity(), RR, {0.0, 1.0}}},
                                        c),
               Error);
  // psi/psi0 and psi/phi0 share no denominator.
  EXPECT_THROW(fenton_wilkinson_combine(std::vector<WeightedTerm>{{1.0, RR, {0.0, 1.0}},
                                                                  {1.0, RL, {0.0, 1.0}}},
                                        c),
               UnsupportedPair);
}

TEST(CorrelationTable, ReferenceValuesAndSymmetry) {
  const auto c = CorrelationTable::reported();
  EXPECT_DOUBLE_EQ(c.at(RR, RR), 0.4857);
  EXPECT_DOUBLE_EQ(c.at(RR, LR), 0.3879);
  EXPECT_DOUBLE_EQ(c.at(LR, RR), 0.3879);
  EXPECT_DOUBLE_EQ(c.at(LR, LR), 0.4895);
  EXPECT_DOUBLE_EQ(c.at(RL, RL), 0.5252);
  EXPECT_DOUBLE_EQ(c.at(RL, LL), 0.4856);
  EXPECT_DOUBLE_EQ(c.at(LL, LL), 0.5);
  EXPECT_FALSE(c.contains(RR, RL));
  EXPECT_THROW(c.at(RR, LL), UnsupportedPair);
}

TEST(CorrelationTable, SetBounds) {
  CorrelationTable c;
  EXPECT_THROW(c.set(RR, RR, 1.5), InvalidConfiguration);
  EXPECT_THROW(c.set(RR, RR, NAN), InvalidConfiguration);
  c.set(RR, LR, -0.25);
  EXPECT_DOUBLE_EQ(c.at(LR, RR), -0.25);
}

TEST(CorrelationTable, CsvRoundTrip) {
  const auto c = CorrelationTable::reported();
  std::stringstream ss;
  c.write_csv(ss);
  EXPECT_EQ(ss.str().rfind("pair,delta\n", 0), 0u);
  const auto back = CorrelationTable::read_csv(ss);
  EXPECT_EQ(back, c);
}

TEST(CorrelationTable, CsvErrors) {
  std::stringstream no_header("psi/psi0|psi/psi0,0.5\n");
  EXPECT_THROW(CorrelationTable::read_csv(no_header), InvalidConfiguration);
  std::stringstream bad_kind("pair,delta\npsi/psi9|psi/psi0,0.5\n");
  EXPECT_THROW(CorrelationTable::read_csv(bad_kind), InvalidConfiguration);
  std::stringstream bad_value("pair,delta\npsi/psi0|psi/psi0,abc\n");
  EXPECT_THROW(CorrelationTable::read_csv(bad_value), InvalidConfiguration);
}

TEST(ExactCorrelation, SharedDenominatorValues) {
  const double v_ray = std::numbers::pi * std::numbers::pi / 24.0;
  EXPECT_NEAR(exact_log_ratio_correlation(RR, RR), 0.5, 1e-15);
  EXPECT_NEAR(exact_log_ratio_correlation(LL, LL), 0.5, 1e-15);
  EXPECT_NEAR(exact_log_ratio_correlation(RR, LR), v_ray / std::sqrt(2.0 * v_ray * (1.0 + v_ray)),
              1e-15);
  EXPECT_NEAR(exact_log_ratio_correlation(RL, LL), 1.0 / std::sqrt((1.0 + v_ray) * 2.0), 1e-15);
  EXPECT_THROW(exact_log_ratio_correlation(RR, RL), UnsupportedPair);
}

TEST(EstimateDelta, CalculatedMatchesExact) {
  for (auto [a, b] : {std::pair{RR, RR}, std::pair{RR, LR}, std::pair{LL, LL}}) {
    const double d = estimate_delta(a, b, DeltaMethod::Calculated, 200000, 3);
    EXPECT_NEAR(d, exact_log_ratio_correlation(a, b), 0.01);
  }
}

TEST(EstimateDelta, DeterministicAndValidated) {
  EXPECT_EQ(estimate_delta(RR, LR, DeltaMethod::Approximated, 20000, 8),
            estimate_delta(RR, LR, DeltaMethod::Approximated, 20000, 8));
  EXPECT_THROW(estimate_delta(RR, RL, DeltaMethod::Calculated, 1000, 1), UnsupportedPair);
  EXPECT_THROW(estimate_delta(RR, RR, DeltaMethod::Calculated, 1, 1), InvalidConfiguration);
}

TEST(EstimateDelta, MinErrorStaysInUnitInterval) {
  const double d = estimate_delta(LL, LL, DeltaMethod::MinError, 50000, 2);
  EXPECT_GE(d, 0.0);
  EXPECT_LE(d, 1.0);
}

TEST(MinErrorThresholds, LogSpacedGrid) {
  const auto t = min_error_thresholds();
  ASSERT_EQ(t.size(), 41u);
  EXPECT_NEAR(t.front(), 0.1, 1e-15);
  EXPECT_NEAR(t.back(), 10.0, 1e-12);
  EXPECT_NEAR(t[20], 1.0, 1e-12);
}
