#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "twotier/error.hpp"
#include "twotier/ratio_approx.hpp"

using namespace twotier;

namespace {

constexpr double kEulerGamma = 0.5772156649015329;
// E[ln psi] for Rayleigh(1) is (ln 2 - gamma) / 2; Var[ln psi] = pi^2 / 24.
const double kLnRayleighMean = (std::numbers::ln2 - kEulerGamma) / 2.0;
const double kLnRayleighVar = std::numbers::pi * std::numbers::pi / 24.0;

FitConfig coarse_fit(double mean, double sd) {
  FitConfig f;
  for (double z = -6.0; z <= 6.0 + 1e-9; z += 0.05) f.z_grid.push_back(z);
  f.m_range = {mean - 0.3, mean + 0.3, 0.01};
  f.s_range = {0.5 * sd, 1.5 * sd, 0.005};
  return f;
}

}  // namespace

TEST(RatioKind, LabelsRoundTrip) {
  for (RatioKind k : kAllRatioKinds) {
    const auto parsed = parse_ratio_kind(to_string(k));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, k);
    EXPECT_EQ(reciprocal(reciprocal(k)), k);
  }
  EXPECT_EQ(to_string(RatioKind::LogNormalOverRayleigh), "phi/psi0");
  EXPECT_FALSE(parse_ratio_kind("psi/psi1").has_value());
}

TEST(RatioKind, NumeratorAndDenominator) {
  EXPECT_TRUE(numerator_is_rayleigh(RatioKind::RayleighOverLogNormal));
  EXPECT_FALSE(denominator_is_rayleigh(RatioKind::RayleighOverLogNormal));
  EXPECT_EQ(reciprocal(RatioKind::LogNormalOverRayleigh), RatioKind::RayleighOverLogNormal);
  EXPECT_EQ(reciprocal(RatioKind::RayleighOverRayleigh), RatioKind::RayleighOverRayleigh);
}

TEST(RayleighRatioPdf, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(rayleigh_ratio_log_pdf(0.0), 0.5);
  for (double z : {0.3, 1.0, 4.0}) {
    EXPECT_NEAR(rayleigh_ratio_log_pdf(z), rayleigh_ratio_log_pdf(-z), 1e-15);
    const double e = std::exp(2.0 * z);
    EXPECT_NEAR(rayleigh_ratio_log_pdf(z), 2.0 * e / ((1.0 + e) * (1.0 + e)), 1e-15);
  }
  // Far tails stay finite.
  EXPECT_GE(rayleigh_ratio_log_pdf(400.0), 0.0);
  EXPECT_GE(rayleigh_ratio_log_pdf(-400.0), 0.0);
}

TEST(RatioMoments, RayleighOverRayleighMatchesLogistic) {
  const auto m = ratio_moments(RatioKind::RayleighOverRayleigh);
  EXPECT_NEAR(m.mean, 0.0, 1e-9);
  EXPECT_NEAR(m.variance, std::numbers::pi * std::numbers::pi / 12.0, 1e-6);
}

TEST(RatioMoments, LogNormalOverRayleighMatchesCumulants) {
  const auto m = ratio_moments(RatioKind::LogNormalOverRayleigh);
  EXPECT_NEAR(m.mean, -kLnRayleighMean, 1e-5);
  EXPECT_NEAR(m.variance, 1.0 + kLnRayleighVar, 1e-4);
}

TEST(RatioMoments, ReciprocalAndLogNormalKinds) {
  const auto rl = ratio_moments(RatioKind::RayleighOverLogNormal);
  EXPECT_NEAR(rl.mean, kLnRayleighMean, 1e-5);
  EXPECT_NEAR(rl.variance, 1.0 + kLnRayleighVar, 1e-4);
  const auto ll = ratio_moments(RatioKind::LogNormalOverLogNormal);
  EXPECT_DOUBLE_EQ(ll.mean, 0.0);
  EXPECT_DOUBLE_EQ(ll.variance, 2.0);
}

TEST(RatioMoments, NarrowWindowIsRejected) {
  EXPECT_THROW(ratio_moments(RatioKind::RayleighOverRayleigh, {-1.0, 1.0, 2000}), WindowTooSmall);
}

TEST(RatioPdf, LogNormalOverRayleighIntegratesToOne) {
  const double mass = trapezoid(
      [](double z) { return lognormal_rayleigh_ratio_log_pdf(z); }, {-12.0, 12.0, 4000});
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(RatioPdf, ReciprocalKindsMirror) {
  for (double z : {-2.0, -0.4, 0.0, 1.1}) {
    EXPECT_DOUBLE_EQ(ratio_log_pdf(RatioKind::RayleighOverLogNormal, z),
                     ratio_log_pdf(RatioKind::LogNormalOverRayleigh, -z));
    EXPECT_NEAR(ratio_log_pdf(RatioKind::LogNormalOverLogNormal, z),
                normal_pdf(z, 0.0, std::sqrt(2.0)), 1e-15);
  }
}

TEST(RatioPdf, LogNormalOverRayleighAgreesWithDirectIntegral) {
  // f(z) = int phi_N(z + y) g(y) dy with g the density of ln psi.
  auto g = [](double y) { return std::exp(2.0 * y - std::exp(2.0 * y) / 2.0) * 1.0; };
  for (double z : {-1.5, 0.0, 0.8}) {
    const double direct = trapezoid(
        [&](double y) { return normal_pdf(z + y, 0.0, 1.0) * g(y); }, {-15.0, 6.0, 200000});
    EXPECT_NEAR(lognormal_rayleigh_ratio_log_pdf(z), direct, 1e-7) << "z=" << z;
  }
}

TEST(PointwiseFitError, ZeroForExactNormal) {
  std::vector<double> z, pdf;
  for (double x = -4.0; x <= 4.0; x += 0.1) {
    z.push_back(x);
    pdf.push_back(normal_pdf(x, 0.2, 0.9));
  }
  EXPECT_NEAR(pointwise_fit_error(z, pdf, {0.2, 0.9}), 0.0, 1e-14);
  EXPECT_GT(pointwise_fit_error(z, pdf, {0.0, 0.9}), 0.1);
}

TEST(Fit, LogNormalOverLogNormalIsExact) {
  const auto a = fit_lognormal_surrogate(RatioKind::LogNormalOverLogNormal);
  EXPECT_DOUBLE_EQ(a.fitted.m, 0.0);
  EXPECT_DOUBLE_EQ(a.fitted.s, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a.fit_error, 0.0);
}

TEST(Fit, CoarseGridLandsNearDefaultOptimum) {
  const double sd = std::sqrt(std::numbers::pi * std::numbers::pi / 12.0);
  const auto a = fit_lognormal_surrogate(RatioKind::RayleighOverRayleigh, coarse_fit(0.0, sd),
                                         QuadratureConfig::moments_default());
  EXPECT_NEAR(a.fitted.m, 0.0, 1e-12);
  EXPECT_NEAR(a.fitted.s, 0.815, 0.01);
  EXPECT_LT(a.fitted.s, sd);  // peak-matching narrows the surrogate
}

TEST(Fit, OptimumOnGridEdgeIsReported) {
  FitConfig f = coarse_fit(0.0, 0.9);
  f.s_range = {0.3, 0.5, 0.01};
  EXPECT_THROW(fit_lognormal_surrogate(RatioKind::RayleighOverRayleigh, f,
                                       QuadratureConfig::moments_default()),
               BoundaryHit);
}

TEST(Fit, InvalidGridsRejected) {
  FitConfig f = coarse_fit(0.0, 0.9);
  f.z_grid.clear();
  EXPECT_THROW(f.validate(), InvalidConfiguration);
  f = coarse_fit(0.0, 0.9);
  f.s_range = {-0.1, 0.5, 0.01};
  EXPECT_THROW(f.validate(), InvalidConfiguration);
}

TEST(FitConfig, AroundContainsMomentPoint) {
  const auto f = FitConfig::around(-0.058, 1.188);
  bool has_m = false, has_s = false;
  for (std::size_t k = 0; k < f.m_range.count(); ++k) has_m |= std::fabs(f.m_range.at(k) + 0.058) < 1e-12;
  for (std::size_t k = 0; k < f.s_range.count(); ++k) has_s |= std::fabs(f.s_range.at(k) - 1.188) < 1e-12;
  EXPECT_TRUE(has_m);
  EXPECT_TRUE(has_s);
  EXPECT_NEAR(f.z_grid.front(), -6.0, 1e-12);
  EXPECT_NEAR(f.z_grid.back(), 6.0, 1e-9);
}

TEST(ReciprocalSurrogate, NegatesMeanKeepsSpread) {
  RatioApproximation a{RatioKind::LogNormalOverRayleigh, -0.058, 1.41, {-0.143, 1.1673}, 0.3};
  const auto r = reciprocal_surrogate(a);
  EXPECT_EQ(r.kind, RatioKind::RayleighOverLogNormal);
  EXPECT_EQ(r.fitted.m, 0.143);
  EXPECT_EQ(r.fitted.s, 1.1673);
  EXPECT_EQ(r.exact_mean, 0.058);
  EXPECT_EQ(r.exact_var, 1.41);
}

TEST(SurrogateSet, DefaultIsReferenceSet) {
  const SurrogateSet s;
  EXPECT_EQ(s.at(RatioKind::RayleighOverRayleigh), (LogNormalParams{0.0, 0.7979}));
  EXPECT_EQ(s.at(RatioKind::LogNormalOverRayleigh), (LogNormalParams{-0.143, 1.1673}));
  EXPECT_EQ(s.at(RatioKind::RayleighOverLogNormal), (LogNormalParams{0.143, 1.1673}));
  EXPECT_DOUBLE_EQ(s.at(RatioKind::LogNormalOverLogNormal).s, std::sqrt(2.0));
}

TEST(SurrogateSet, SetValidates) {
  SurrogateSet s;
  s.set(RatioKind::RayleighOverRayleigh, {0.1, 0.9});
  EXPECT_EQ(s.at(RatioKind::RayleighOverRayleigh), (LogNormalParams{0.1, 0.9}));
  EXPECT_THROW(s.set(RatioKind::RayleighOverRayleigh, {0.0, 0.0}), InvalidConfiguration);
  EXPECT_THROW(s.set(RatioKind::RayleighOverRayleigh, {NAN, 1.0}), InvalidConfiguration);
}
