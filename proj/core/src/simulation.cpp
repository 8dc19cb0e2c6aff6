#include "twotier/simulation.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "twotier/error.hpp"
#include "twotier/parallel.hpp"

namespace twotier {
namespace {

// Received-power gains of one receiver, before fading.
struct LinkBudget {
  double signal = 0.0;
  bool signal_rayleigh = true;
  std::vector<double> macro;       // Rayleigh-faded interferers
  std::vector<double> femto;       // log-normal-faded, indexed by subregion; 0 = never interferes
};

double path_gain(double d, double exponent) {
  return d > 0.0 ? std::pow(d, -exponent) : std::numeric_limits<double>::infinity();
}

LinkBudget link_budget(const OutageQuery& q, const Network& net) {
  const auto& pl = net.pathloss;
  const double pm = dbm_to_linear(net.powers.macro_dbm);
  const double pf = dbm_to_linear(net.powers.femto_dbm);
  const double wall = pl.wall_gain();
  const auto& macro = net.layout.macro_positions;
  LinkBudget b;

  if (q.tier == Tier::Macro) {
    if (!net.layout.contains(q.position)) throw GeometryError("simulate_outage: MUE outside macrocell");
    const double r = norm(q.position);
    if (r <= 0.0) throw GeometryError("simulate_outage: MUE collocated with its MBS");
    b.signal = pm * std::pow(r, -pl.alpha);
    b.signal_rayleigh = true;
    for (std::size_t j = 1; j < macro.size(); ++j) {
      b.macro.push_back(pm * path_gain(distance(q.position, macro[j]), pl.alpha));
    }
    for (const Point2& c : net.grid.centers) {
      b.femto.push_back(wall * pf * path_gain(distance(q.position, c), pl.beta));
    }
  } else {
    const FueGeometry g = fue_geometry(net, q.position);
    b.signal = pf * std::pow(net.layout.r_femto_m, -pl.beta);
    b.signal_rayleigh = false;
    for (const Point2& m : macro) {
      b.macro.push_back(wall * pm * path_gain(distance(g.ue, m), pl.alpha));
    }
    for (std::size_t i = 0; i < net.grid.centers.size(); ++i) {
      b.femto.push_back(i == g.serving_index
                            ? 0.0
                            : wall * wall * pf * path_gain(distance(g.ue, net.grid.centers[i]), pl.beta));
    }
  }
  for (double g : b.macro) {
    if (std::isinf(g)) throw GeometryError("simulate_outage: receiver collocated with an MBS");
  }
  return b;
}

}  // namespace

SimulatedOutage simulate_outage(const OutageQuery& query, std::size_t trials,
                                const RandomStream& stream, const Network& net) {
  if (trials == 0) throw InvalidConfiguration("simulate_outage: trials must be >= 1");
  if (!(query.target_sir > 0.0)) throw InvalidConfiguration("simulate_outage: target SIR must be > 0");
  const SubregionGrid grid = net.grid.with_intensity(query.intensity);
  const LinkBudget budget = link_budget(query, net);
  const double p = grid.p_occupancy;
  const double log_miss = p > 0.0 ? std::log1p(-p) : 0.0;
  const std::size_t n_cells = budget.femto.size();

  const std::size_t n_chunks = (trials + kSimulationChunk - 1) / kSimulationChunk;
  std::vector<std::size_t> outages(n_chunks, 0);
  detail::for_each_chunk(n_chunks, [&](std::size_t chunk) {
    RandomStream rng = stream.substream(chunk);
    const std::size_t begin = chunk * kSimulationChunk;
    const std::size_t end = std::min(trials, begin + kSimulationChunk);
    std::size_t count = 0;
    for (std::size_t t = begin; t < end; ++t) {
      double interference = 0.0;
      for (double g : budget.macro) interference += g * rng.rayleigh();
      if (p > 0.0) {
        // Occupied subregions by geometric skipping: gaps are Geometric(p).
        std::size_t i = 0;
        while (true) {
          const double skip = std::floor(std::log(rng.uniform()) / log_miss);
          if (skip >= static_cast<double>(n_cells - i)) break;
          i += static_cast<std::size_t>(skip);
          if (budget.femto[i] > 0.0) interference += budget.femto[i] * rng.lognormal();
          ++i;
        }
      }
      const double fade = budget.signal_rayleigh ? rng.rayleigh() : rng.lognormal();
      if (budget.signal * fade < query.target_sir * interference) ++count;
    }
    outages[chunk] = count;
  });

  std::size_t total = 0;
  for (std::size_t c : outages) total += c;
  SimulatedOutage r;
  r.trials = trials;
  r.probability = static_cast<double>(total) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(trials));
  return r;
}

}  // namespace twotier
