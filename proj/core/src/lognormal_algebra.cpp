#include "twotier/lognormal_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "twotier/error.hpp"
#include "twotier/random_stream.hpp"
#include "twotier/ratio_sampling.hpp"

namespace twotier {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double lognormal_ccdf(const LogNormalParams& p, double threshold) {
  if (!(threshold > 0.0)) {
    throw DomainError("lognormal_ccdf: threshold must be > 0");
  }
  return q_function((std::log(threshold) - p.m) / p.s);
}

// ---------------------------------------------------------------------------
// CorrelationTable

std::size_t CorrelationTable::slot(RatioKind a, RatioKind b) {
  auto i = static_cast<std::size_t>(a);
  auto j = static_cast<std::size_t>(b);
  if (i > j) std::swap(i, j);
  return i * 4 + j;
}

CorrelationTable CorrelationTable::reported() {
  using K = RatioKind;
  CorrelationTable t;
  t.set(K::RayleighOverRayleigh, K::RayleighOverRayleigh, 0.4857);
  t.set(K::RayleighOverRayleigh, K::LogNormalOverRayleigh, 0.3879);
  t.set(K::LogNormalOverRayleigh, K::LogNormalOverRayleigh, 0.4895);
  t.set(K::RayleighOverLogNormal, K::RayleighOverLogNormal, 0.5252);
  t.set(K::RayleighOverLogNormal, K::LogNormalOverLogNormal, 0.4856);
  t.set(K::LogNormalOverLogNormal, K::LogNormalOverLogNormal, 0.5);
  return t;
}

void CorrelationTable::set(RatioKind a, RatioKind b, double delta) {
  if (!(delta >= -1.0 && delta <= 1.0)) {
    throw InvalidConfiguration("CorrelationTable: delta must lie in [-1, 1]");
  }
  delta_[slot(a, b)] = delta;
}

bool CorrelationTable::contains(RatioKind a, RatioKind b) const {
  return delta_[slot(a, b)].has_value();
}

double CorrelationTable::at(RatioKind a, RatioKind b) const {
  const auto& d = delta_[slot(a, b)];
  if (!d) {
    throw UnsupportedPair("no correlation coefficient for pair " + std::string(to_string(a)) +
                          "|" + std::string(to_string(b)));
  }
  return *d;
}

void CorrelationTable::write_csv(std::ostream& out) const {
  out << "pair,delta\n";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      const auto a = kAllRatioKinds[i];
      const auto b = kAllRatioKinds[j];
      if (!contains(a, b)) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", at(a, b));
      out << to_string(a) << '|' << to_string(b) << ',' << buf << '\n';
    }
  }
}

CorrelationTable CorrelationTable::read_csv(std::istream& in) {
  CorrelationTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("pair,delta", 0) != 0) {
    throw InvalidConfiguration("correlation CSV: missing 'pair,delta' header");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto bar = line.find('|');
    if (comma == std::string::npos || bar == std::string::npos || bar > comma) {
      throw InvalidConfiguration("correlation CSV: malformed row '" + line + "'");
    }
    const auto a = parse_ratio_kind(std::string_view(line).substr(0, bar));
    const auto b = parse_ratio_kind(std::string_view(line).substr(bar + 1, comma - bar - 1));
    if (!a || !b) throw InvalidConfiguration("correlation CSV: unknown ratio in '" + line + "'");
    double delta = 0.0;
    std::istringstream value(line.substr(comma + 1));
    if (!(value >> delta)) throw InvalidConfiguration("correlation CSV: bad delta in '" + line + "'");
    t.set(*a, *b, delta);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Fenton-Wilkinson

LogNormalParams fenton_wilkinson_combine(std::span<const WeightedTerm> terms,
                                         const CorrelationTable& corr) {
  if (terms.empty()) throw InvalidConfiguration("fenton_wilkinson_combine: no terms");

  // ln of the first-moment contribution of each term.
  std::vector<double> log_mean(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    if (!(t.weight > 0.0)) {
      throw InvalidConfiguration("fenton_wilkinson_combine: weights must be > 0");
    }
    t.surrogate.validate();
    log_mean[k] = std::log(t.weight) + t.surrogate.m + 0.5 * t.surrogate.s * t.surrogate.s;
    if (!std::isfinite(log_mean[k])) {
      throw RangeError("fenton_wilkinson_combine: moment of term " + std::to_string(k) +
                           " is not representable",
                       k);
    }
  }

  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = terms[i];
    const auto& b = terms[j];
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.surrogate.s != b.surrogate.s) return a.surrogate.s < b.surrogate.s;
    if (a.surrogate.m != b.surrogate.m) return a.surrogate.m < b.surrogate.m;
    if (a.weight != b.weight) return a.weight < b.weight;
    return i < j;
  });

  const auto top = std::max_element(log_mean.begin(), log_mean.end());
  const double shift = *top;

  // Terms sharing kind and s form a group (m is already folded into a_k);
  // pair sums then factor as
  // S_g * S_h - [g == h] * Q_g.
  struct Group {
    RatioKind kind;
    double s;
    double sum = 0.0;      // sum e^{a_k - shift}
    double sum_sq = 0.0;   // sum e^{2(a_k - shift)}
  };
  std::vector<Group> groups;
  for (std::size_t idx : order) {
    const auto& t = terms[idx];
    const bool same = !groups.empty() && groups.back().kind == t.kind &&
                      groups.back().s == t.surrogate.s;
    if (!same) groups.push_back({t.kind, t.surrogate.s});
    const double e = std::exp(log_mean[idx] - shift);
    groups.back().sum += e;
    groups.back().sum_sq += e * e;
  }

  double u1 = 0.0;
  double u2 = 0.0;
  for (const auto& g : groups) {
    u1 += g.sum;
    u2 += std::exp(g.s * g.s) * g.sum_sq;
  }
  for (const auto& g : groups) {
    for (const auto& h : groups) {
      double pairs = g.sum * h.sum;
      if (&g == &h) pairs = std::max(0.0, pairs - g.sum_sq);
      if (pairs == 0.0) continue;
      u2 += std::exp(corr.at(g.kind, h.kind) * g.s * h.s) * pairs;
    }
  }
  if (!std::isfinite(u2)) {
    const auto k = static_cast<std::size_t>(top - log_mean.begin());
    throw RangeError("fenton_wilkinson_combine: second moment overflow at term " +
                         std::to_string(k),
                     k);
  }

  const double log_u1 = std::log(u1);
  const double log_u2 = std::log(u2);
  const double var = log_u2 - 2.0 * log_u1;
  if (!(var > 0.0)) {
    throw DegenerateCombination("fenton_wilkinson_combine: ln-domain variance " +
                                std::to_string(var) + " is not positive");
  }
  return {shift + 2.0 * log_u1 - 0.5 * log_u2, std::sqrt(var)};
}

// ---------------------------------------------------------------------------
// Correlation estimation

namespace {

constexpr double kVarLogRayleigh = std::numbers::pi * std::numbers::pi / 24.0;

double log_variance(bool rayleigh) { return rayleigh ? kVarLogRayleigh : 1.0; }

void require_shared_denominator(RatioKind a, RatioKind b) {
  if (denominator_is_rayleigh(a) != denominator_is_rayleigh(b)) {
    throw UnsupportedPair("ratio kinds " + std::string(to_string(a)) + " and " +
                          std::string(to_string(b)) + " do not share a denominator");
  }
}

std::uint64_t pair_stream(RatioKind a, RatioKind b) {
  auto i = static_cast<std::uint64_t>(a);
  auto j = static_cast<std::uint64_t>(b);
  if (i > j) std::swap(i, j);
  return 0xDE17A000ULL + i * 4 + j;
}

struct SampleMoments {
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
};

SampleMoments joint_moments(RatioKind a, RatioKind b, std::size_t samples, std::uint64_t seed) {
  RandomStream stream(seed, pair_stream(a, b));
  const auto joint = sample_joint_log_ratios(a, b, samples, stream);
  const double n = static_cast<double>(samples);
  const double mean_a = std::accumulate(joint.first.begin(), joint.first.end(), 0.0) / n;
  const double mean_b = std::accumulate(joint.second.begin(), joint.second.end(), 0.0) / n;
  SampleMoments m;
  for (std::size_t i = 0; i < samples; ++i) {
    const double da = joint.first[i] - mean_a;
    const double db = joint.second[i] - mean_b;
    m.cov += da * db;
    m.var_a += da * da;
    m.var_b += db * db;
  }
  m.cov /= n;
  m.var_a /= n;
  m.var_b /= n;
  return m;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double min_error_delta(RatioKind a, RatioKind b, std::size_t samples, std::uint64_t seed,
                       const SurrogateSet& surrogates) {
  const auto thresholds = min_error_thresholds();
  RandomStream stream = RandomStream(seed, pair_stream(a, b)).substream(1);
  const std::array<RatioKind, 2> kinds{a, b};
  const std::array<double, 2> weights{1.0, 1.0};
  const auto simulated = simulate_ratio_ccdf(kinds, weights, thresholds, samples, stream);

  std::array<WeightedTerm, 2> terms{WeightedTerm{1.0, a, surrogates.at(a)},
                                    WeightedTerm{1.0, b, surrogates.at(b)}};
  double best_delta = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 10000; ++step) {
    const double delta = step * 1e-4;
    CorrelationTable corr;
    corr.set(a, a, delta);
    corr.set(b, b, delta);
    corr.set(a, b, delta);
    double err = 0.0;
    try {
      const auto fw = fenton_wilkinson_combine(terms, corr);
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const double d = lognormal_ccdf(fw, thresholds[i]) - simulated.probabilities[i];
        err += d * d;
      }
    } catch (const DegenerateCombination&) {
      continue;
    }
    if (err < best_err) {
      best_err = err;
      best_delta = delta;
    }
  }
  return best_delta;
}

}  // namespace

double exact_log_ratio_correlation(RatioKind a, RatioKind b) {
  require_shared_denominator(a, b);
  const double den = log_variance(denominator_is_rayleigh(a));
  const double va = log_variance(numerator_is_rayleigh(a)) + den;
  const double vb = log_variance(numerator_is_rayleigh(b)) + den;
  return den / std::sqrt(va * vb);
}

std::vector<double> min_error_thresholds() { return log_spaced(0.1, 10.0, 41); }

double estimate_delta(RatioKind a, RatioKind b, DeltaMethod method, std::size_t samples,
                      std::uint64_t seed, const SurrogateSet& surrogates) {
  require_shared_denominator(a, b);
  if (samples < 2) throw InvalidConfiguration("estimate_delta: need at least 2 samples");
  switch (method) {
    case DeltaMethod::Calculated: {
      const auto m = joint_moments(a, b, samples, seed);
      return clamp_unit(m.cov / std::sqrt(m.var_a * m.var_b));
    }
    case DeltaMethod::Approximated: {
      const auto m = joint_moments(a, b, samples, seed);
      return clamp_unit(m.cov / (surrogates.at(a).s * surrogates.at(b).s));
    }
    case DeltaMethod::MinError:
      return min_error_delta(a, b, samples, seed, surrogates);
  }
  return 0.0;
}

DeltaEstimate estimate_deltas(RatioKind a, RatioKind b, std::size_t samples, std::uint64_t seed,
                              const SurrogateSet& surrogates) {
  require_shared_denominator(a, b);
  const auto m = joint_moments(a, b, samples, seed);
  return {clamp_unit(m.cov / std::sqrt(m.var_a * m.var_b)),
          clamp_unit(m.cov / (surrogates.at(a).s * surrogates.at(b).s)),
          min_error_delta(a, b, samples, seed, surrogates)};
}

CorrelationTable calibrate_correlation_table(std::size_t samples, std::uint64_t seed,
                                             const SurrogateSet& surrogates) {
  CorrelationTable t;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      const auto a = kAllRatioKinds[i];
      const auto b = kAllRatioKinds[j];
      if (denominator_is_rayleigh(a) != denominator_is_rayleigh(b)) continue;
      t.set(a, b, estimate_delta(a, b, DeltaMethod::MinError, samples, seed, surrogates));
    }
  }
  return t;
}

}  // namespace twotier
