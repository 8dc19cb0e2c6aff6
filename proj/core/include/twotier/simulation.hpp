#pragma once

#include <cstddef>

#include "twotier/network_model.hpp"
#include "twotier/outage_analysis.hpp"
#include "twotier/random_stream.hpp"
#include "twotier/ratio_sampling.hpp"

namespace twotier {

struct SimulatedOutage {
  double probability = 0.0;
  double std_error = 0.0;  // binomial
  std::size_t trials = 0;
};

// Direct Monte Carlo of P{SIR < gamma}. Every trial draws a femtocell
// configuration and every fading variable, then evaluates the SIR from
// powers, distances and path-loss exponents; no surrogate is involved.
// Trials run in fixed chunks of kSimulationChunk, chunk c drawing from
// stream.substream(c), so results do not depend on the thread count.
SimulatedOutage simulate_outage(const OutageQuery& query, std::size_t trials,
                                const RandomStream& stream, const Network& net);

inline constexpr std::size_t kSimulationChunk = 8192;

}  // namespace twotier
