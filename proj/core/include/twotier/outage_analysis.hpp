#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "twotier/lognormal_algebra.hpp"
#include "twotier/network_model.hpp"
#include "twotier/ratio_approx.hpp"

namespace twotier {

enum class Tier { Macro, Femto };

// For Macro, position is the MUE; for Femto, the requested serving-FBS center.
struct OutageQuery {
  Tier tier = Tier::Macro;
  Point2 position;
  double target_sir = 1.0;  // linear
  double intensity = 0.0;   // lambda_f per m^2
};

struct OutageResult {
  double probability = 0.0;
  std::size_t configs_used = 0;
  double std_error = 0.0;
  bool exact = false;  // exhaustive enumeration over all 2^N configurations
};

struct TargetSir {
  double macro = 1.0;
  double femto = 10.0;

  double of(Tier t) const { return t == Tier::Macro ? macro : femto; }
};

// Network plus the statistical model of the fading ratios.
struct AnalysisContext {
  Network network;
  SurrogateSet surrogates = SurrogateSet::reported();
  CorrelationTable correlations = CorrelationTable::reported();
  TargetSir targets;
};

// Q((-ln gamma - m_x) / s_x) for the Fenton-Wilkinson surrogate of one
// configuration's interference-to-signal sum; 0 when there is no interferer.
double outage_given_config(const OutageQuery& query, const FemtoConfiguration& config,
                           const AnalysisContext& ctx);

enum class ConfigAveraging {
  Auto,       // enumerate when N <= kMaxEnumeratedSubregions, else sample
  Enumerate,  // sum over all 2^N configurations weighted by P(X = x)
  Sample,     // mean over n_configs draws with P(X = x) as sampling law
};

inline constexpr int kMaxEnumeratedSubregions = 16;

// Configuration-averaged outage at one position. Sampling uses the stream
// (seed, tier), so two positions queried with one seed see the same
// configurations.
OutageResult outage_probability(const OutageQuery& query, std::size_t n_configs,
                                std::uint64_t seed, const AnalysisContext& ctx,
                                ConfigAveraging mode = ConfigAveraging::Auto);

// n points spread uniformly over the central hexagon (Halton 2,3 sequence
// over the bounding box, rejection outside; the origin is skipped).
std::vector<Point2> hexagon_positions(const NetworkLayout& layout, std::size_t n);

// Mean of outage_probability over hexagon_positions(n_positions); MUE
// positions for Macro, requested serving-FBS centers for Femto.
double average_outage(Tier tier, double intensity, std::size_t n_positions,
                      std::size_t n_configs, std::uint64_t seed, const AnalysisContext& ctx);

}  // namespace twotier
