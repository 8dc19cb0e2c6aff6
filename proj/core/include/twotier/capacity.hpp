#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "twotier/outage_analysis.hpp"

namespace twotier {

// Allowed failure fractions for macrocell and femtocell transmissions.
struct QosConstraint {
  double eps_macro = 0.45;
  double eps_femto = 0.045;

  void validate() const;
};

struct CapacityResult {
  double spatial_throughput = 0.0;
  double optimal_intensity = 0.0;
  double transmission_capacity = 0.0;
};

// How tier-average outage is estimated.
struct AveragingSettings {
  std::size_t n_positions = 64;
  std::size_t n_configs = 400;
  std::uint64_t seed = 1;
};

struct CapacityModel {
  AnalysisContext ctx;
  AveragingSettings averaging;

  double area() const { return ctx.network.layout.area_m2; }
  double average_outage(Tier tier, double intensity) const;
};

// tau(lambda) = (1/|H|) [1 - q_m(lambda)] + lambda [1 - q_f(lambda)].
double spatial_throughput(const CapacityModel& model, double intensity);

// Average-outage curves on an intensity grid, made non-decreasing by an
// isotonic (pool-adjacent-violators) fit so they can be inverted.
struct OutageCurves {
  std::vector<double> intensities;
  std::vector<double> macro_raw;
  std::vector<double> femto_raw;
  std::vector<double> macro;
  std::vector<double> femto;
};

// Default grid: `points` densities spanning [0, search_max].
OutageCurves build_outage_curves(const CapacityModel& model, double search_max,
                                 std::size_t points = 9);

// Least-squares non-decreasing fit with equal weights.
std::vector<double> isotonic_non_decreasing(const std::vector<double>& values);

// Smallest lambda on the piecewise-linear curve where it reaches eps, by
// bisection to relative tolerance 1e-3; the curve's last intensity when it
// never does.
double invert_curve(const std::vector<double>& intensities, const std::vector<double>& curve,
                    double eps);

// min(q_m^{-1}(eps_m), q_f^{-1}(eps_f)). Throws InfeasibleQos when either
// tier already violates its constraint at lambda = 0.
double optimal_intensity(const OutageCurves& curves, const QosConstraint& qos);
double optimal_intensity(const CapacityModel& model, const QosConstraint& qos, double search_max);

// tau evaluated at the QoS-optimal intensity (both density factors set to it).
CapacityResult transmission_capacity(const CapacityModel& model, const OutageCurves& curves,
                                     const QosConstraint& qos);
CapacityResult transmission_capacity(const CapacityModel& model, const QosConstraint& qos,
                                     double search_max);

// Capacity reported for a requested intensity: tau(min(lambda, lambda_bar)),
// constant once the request exceeds the QoS-optimal density.
double capacity_at(const CapacityModel& model, const CapacityResult& optimum, double intensity);

}  // namespace twotier
