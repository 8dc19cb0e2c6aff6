#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twotier/random_stream.hpp"
#include "twotier/ratio_approx.hpp"

namespace twotier {

// P{X > t} at each threshold, thresholds ascending.
struct EmpiricalCcdf {
  std::vector<double> thresholds;
  std::vector<double> probabilities;
};

// n samples of ln(numerator / denominator) with independent draws per sample.
std::vector<double> sample_log_ratio(RatioKind kind, std::size_t n, RandomStream& stream);

struct JointLogRatios {
  std::vector<double> first;
  std::vector<double> second;
};

// Joint samples of two log-ratios over one shared denominator draw. Throws
// UnsupportedPair when the kinds have different denominator distributions.
JointLogRatios sample_joint_log_ratios(RatioKind a, RatioKind b, std::size_t n,
                                       RandomStream& stream);

// Empirical CCDF of sum_k weights[k] * ratio_k, every ratio sharing one
// denominator draw per trial.
EmpiricalCcdf simulate_ratio_ccdf(std::span<const RatioKind> kinds,
                                  std::span<const double> weights,
                                  std::span<const double> thresholds, std::size_t trials,
                                  RandomStream& stream);

// CCDF of raw samples; sorts `samples` in place.
EmpiricalCcdf empirical_ccdf(std::vector<double>& samples, std::span<const double> thresholds);

// sup_x |F_n(x) - Phi((x - mean) / sd)|; sorts `samples` in place.
double ks_distance_normal(std::vector<double>& samples, double mean, double sd);

// n log-spaced points on [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace twotier
