#include "twotier/ratio_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twotier/error.hpp"
#include "twotier/lognormal_algebra.hpp"

namespace twotier {
namespace {

double draw(bool rayleigh, RandomStream& stream) {
  return rayleigh ? stream.rayleigh() : stream.lognormal();
}

void require_trials(std::size_t n, const char* who) {
  if (n == 0) throw InvalidConfiguration(std::string(who) + ": sample count must be >= 1");
}

}  // namespace

std::vector<double> sample_log_ratio(RatioKind kind, std::size_t n, RandomStream& stream) {
  require_trials(n, "sample_log_ratio");
  std::vector<double> out(n);
  const bool num = numerator_is_rayleigh(kind);
  const bool den = denominator_is_rayleigh(kind);
  for (auto& z : out) {
    const double x = draw(num, stream);
    const double y = draw(den, stream);
    z = std::log(x / y);
  }
  return out;
}

JointLogRatios sample_joint_log_ratios(RatioKind a, RatioKind b, std::size_t n,
                                       RandomStream& stream) {
  require_trials(n, "sample_joint_log_ratios");
  if (denominator_is_rayleigh(a) != denominator_is_rayleigh(b)) {
    throw UnsupportedPair("ratio kinds " + std::string(to_string(a)) + " and " +
                          std::string(to_string(b)) + " do not share a denominator");
  }
  const bool den = denominator_is_rayleigh(a);
  const bool num_a = numerator_is_rayleigh(a);
  const bool num_b = numerator_is_rayleigh(b);
  JointLogRatios out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double log_den = std::log(draw(den, stream));
    out.first[i] = std::log(draw(num_a, stream)) - log_den;
    out.second[i] = std::log(draw(num_b, stream)) - log_den;
  }
  return out;
}

EmpiricalCcdf simulate_ratio_ccdf(std::span<const RatioKind> kinds,
                                  std::span<const double> weights,
                                  std::span<const double> thresholds, std::size_t trials,
                                  RandomStream& stream) {
  require_trials(trials, "simulate_ratio_ccdf");
  if (kinds.empty() || kinds.size() != weights.size()) {
    throw InvalidConfiguration("simulate_ratio_ccdf: need one weight per ratio kind");
  }
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw InvalidConfiguration("simulate_ratio_ccdf: thresholds must be ascending");
  }
  const bool den = denominator_is_rayleigh(kinds.front());
  for (RatioKind k : kinds) {
    if (denominator_is_rayleigh(k) != den) {
      throw UnsupportedPair("simulate_ratio_ccdf: all ratios must share one denominator");
    }
  }
  std::vector<double> sums(trials);
  for (auto& total : sums) {
    const double d = draw(den, stream);
    double acc = 0.0;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      acc += weights[k] * draw(numerator_is_rayleigh(kinds[k]), stream);
    }
    total = acc / d;
  }
  return empirical_ccdf(sums, thresholds);
}

EmpiricalCcdf empirical_ccdf(std::vector<double>& samples, std::span<const double> thresholds) {
  std::sort(samples.begin(), samples.end());
  EmpiricalCcdf out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.probabilities.reserve(thresholds.size());
  const double n = static_cast<double>(samples.size());
  for (double t : thresholds) {
    const auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), t);
    out.probabilities.push_back(static_cast<double>(above) / n);
  }
  return out;
}

double ks_distance_normal(std::vector<double>& samples, double mean, double sd) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 1.0 - q_function((samples[i] - mean) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw InvalidConfiguration("log_spaced: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace twotier
