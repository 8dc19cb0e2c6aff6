#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "twotier/ratio_approx.hpp"

namespace twotier {

// Gaussian tail probability P{N(0,1) > x}.
double q_function(double x);

// P{V > threshold} for V ~ LN(p.m, p.s^2). Throws DomainError for threshold <= 0.
double lognormal_ccdf(const LogNormalParams& p, double threshold);

// One summand xi_k * e^{Z_k} of an interference-to-signal ratio.
struct WeightedTerm {
  double weight = 1.0;
  RatioKind kind = RatioKind::RayleighOverRayleigh;
  LogNormalParams surrogate;
};

// Symmetric ln-domain correlation coefficients between ratio kinds.
class CorrelationTable {
 public:
  CorrelationTable() = default;

  // Reference minimum-error coefficients for the six shared-denominator pairs.
  static CorrelationTable reported();

  void set(RatioKind a, RatioKind b, double delta);
  bool contains(RatioKind a, RatioKind b) const;
  // Throws UnsupportedPair when the pair has no entry.
  double at(RatioKind a, RatioKind b) const;

  // CSV with header "pair,delta"; one row per stored pair, label "a|b".
  void write_csv(std::ostream& out) const;
  static CorrelationTable read_csv(std::istream& in);

  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

 private:
  static std::size_t slot(RatioKind a, RatioKind b);
  std::array<std::optional<double>, 16> delta_{};
};

// Single log-normal matching the first two moments of sum_k xi_k e^{Z_k}:
//   u1 = sum_k xi_k exp(m_k + s_k^2/2)
//   u2 = sum_k xi_k^2 exp(2 m_k + 2 s_k^2)
//      + sum_{k != l} xi_k xi_l exp(m_k + m_l + (s_k^2 + s_l^2 + 2 delta_kl s_k s_l)/2)
//   m_x = 2 ln u1 - ln(u2)/2,  s_x^2 = ln u2 - 2 ln u1.
// Terms are accumulated in ln space in a canonical order, so the result does
// not depend on the order of `terms`.
LogNormalParams fenton_wilkinson_combine(std::span<const WeightedTerm> terms,
                                         const CorrelationTable& corr);

enum class DeltaMethod { Calculated, Approximated, MinError };

struct DeltaEstimate {
  double delta_cal = 0.0;
  double delta_apprx = 0.0;
  double delta_minerr = 0.0;
};

// Exact ln-domain correlation of two ratios sharing one denominator:
// Var(ln den) / sqrt(Var Z_a * Var Z_b), with Var(ln Rayleigh) = pi^2/24 and
// Var(ln LN(0,1)) = 1.
double exact_log_ratio_correlation(RatioKind a, RatioKind b);

// Thresholds over which MinError compares CCDFs: 41 log-spaced points on [0.1, 10].
std::vector<double> min_error_thresholds();

// Monte Carlo estimate of delta for a shared-denominator pair.
//   Calculated:   Pearson correlation of the joint log-ratio samples.
//   Approximated: sample covariance over the product of surrogate std-devs.
//   MinError:     delta in [0, 1] (step 1e-4) minimising the squared error
//                 between the simulated CCDF of ratio_a + ratio_b and the
//                 Fenton-Wilkinson CCDF.
double estimate_delta(RatioKind a, RatioKind b, DeltaMethod method, std::size_t samples,
                      std::uint64_t seed, const SurrogateSet& surrogates = SurrogateSet::reported());

DeltaEstimate estimate_deltas(RatioKind a, RatioKind b, std::size_t samples, std::uint64_t seed,
                              const SurrogateSet& surrogates = SurrogateSet::reported());

// MinError estimate for every shared-denominator pair.
CorrelationTable calibrate_correlation_table(std::size_t samples, std::uint64_t seed,
                                             const SurrogateSet& surrogates);

}  // namespace twotier
