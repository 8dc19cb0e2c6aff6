#include "twotier/outage_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twotier/error.hpp"
#include "twotier/parallel.hpp"

namespace twotier {
namespace {

constexpr std::uint64_t kConfigStreamBase = 0xC0F16000ULL;

TermBank term_bank(const OutageQuery& q, const AnalysisContext& ctx) {
  return q.tier == Tier::Macro ? mue_term_bank(ctx.network, q.position, ctx.surrogates)
                               : fue_term_bank(ctx.network, q.position, ctx.surrogates);
}

double outage_from_terms(const std::vector<WeightedTerm>& terms, double target_sir,
                         const CorrelationTable& corr) {
  if (terms.empty()) return 0.0;
  const LogNormalParams fw = fenton_wilkinson_combine(terms, corr);
  return q_function((-std::log(target_sir) - fw.m) / fw.s);
}

void validate(const OutageQuery& q) {
  if (!(q.target_sir > 0.0)) throw InvalidConfiguration("OutageQuery: target SIR must be > 0");
}

double radical_inverse(std::size_t i, std::size_t base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

double outage_given_config(const OutageQuery& query, const FemtoConfiguration& config,
                           const AnalysisContext& ctx) {
  validate(query);
  return outage_from_terms(term_bank(query, ctx).assemble(config), query.target_sir,
                           ctx.correlations);
}

OutageResult outage_probability(const OutageQuery& query, std::size_t n_configs,
                                std::uint64_t seed, const AnalysisContext& ctx,
                                ConfigAveraging mode) {
  validate(query);
  const SubregionGrid grid = ctx.network.grid.with_intensity(query.intensity);
  const TermBank bank = term_bank(query, ctx);
  const int n = grid.n_subregions;

  if (mode == ConfigAveraging::Auto) {
    mode = n <= kMaxEnumeratedSubregions ? ConfigAveraging::Enumerate : ConfigAveraging::Sample;
  }
  OutageResult result;

  if (grid.p_occupancy == 0.0) {
    FemtoConfiguration empty{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
    result.probability = outage_from_terms(bank.assemble(empty), query.target_sir, ctx.correlations);
    result.configs_used = 1;
    result.exact = true;
    return result;
  }

  if (mode == ConfigAveraging::Enumerate) {
    if (n > 24) {
      throw InvalidConfiguration("outage_probability: refusing to enumerate 2^" +
                                 std::to_string(n) + " configurations");
    }
    FemtoConfiguration config{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
    double total = 0.0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      for (int i = 0; i < n; ++i) config.occupied[static_cast<std::size_t>(i)] = (bits >> i) & 1U;
      total += outage_from_terms(bank.assemble(config), query.target_sir, ctx.correlations) *
               configuration_probability(grid, config);
    }
    result.probability = std::clamp(total, 0.0, 1.0);
    result.configs_used = static_cast<std::size_t>(count);
    result.exact = true;
    return result;
  }

  if (n_configs == 0) throw InvalidConfiguration("outage_probability: n_configs must be >= 1");
  RandomStream stream(seed, kConfigStreamBase + static_cast<std::uint64_t>(query.tier));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t c = 0; c < n_configs; ++c) {
    const FemtoConfiguration config = sample_configuration(grid, stream);
    const double q = outage_from_terms(bank.assemble(config), query.target_sir, ctx.correlations);
    sum += q;
    sum_sq += q * q;
  }
  const double k = static_cast<double>(n_configs);
  result.probability = sum / k;
  result.configs_used = n_configs;
  if (n_configs > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / k) / (k - 1.0));
    result.std_error = std::sqrt(var / k);
  }
  return result;
}

std::vector<Point2> hexagon_positions(const NetworkLayout& layout, std::size_t n) {
  std::vector<Point2> out;
  out.reserve(n);
  const double half_w = layout.r_macro_m;
  const double half_h = 0.5 * std::sqrt(3.0) * layout.r_macro_m;
  for (std::size_t i = 1; out.size() < n; ++i) {
    const Point2 p{(2.0 * radical_inverse(i, 2) - 1.0) * half_w,
                   (2.0 * radical_inverse(i, 3) - 1.0) * half_h};
    if (norm(p) > 0.0 && layout.contains(p)) out.push_back(p);
  }
  return out;
}

double average_outage(Tier tier, double intensity, std::size_t n_positions,
                      std::size_t n_configs, std::uint64_t seed, const AnalysisContext& ctx) {
  if (n_positions == 0) throw InvalidConfiguration("average_outage: n_positions must be >= 1");
  const auto positions = hexagon_positions(ctx.network.layout, n_positions);
  std::vector<double> per_position(positions.size());
  detail::for_each_chunk(positions.size(), [&](std::size_t i) {
    const OutageQuery q{tier, positions[i], ctx.targets.of(tier), intensity};
    per_position[i] = outage_probability(q, n_configs, seed, ctx).probability;
  });
  double total = 0.0;
  for (double v : per_position) total += v;
  return total / static_cast<double>(per_position.size());
}

}  // namespace twotier
