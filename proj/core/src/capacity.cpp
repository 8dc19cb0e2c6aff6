#include "twotier/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twotier/error.hpp"

namespace twotier {

void QosConstraint::validate() const {
  if (!(eps_macro > 0.0 && eps_macro < 1.0) || !(eps_femto > 0.0 && eps_femto < 1.0)) {
    throw InvalidConfiguration("QosConstraint: eps values must lie in (0, 1)");
  }
}

double CapacityModel::average_outage(Tier tier, double intensity) const {
  return twotier::average_outage(tier, intensity, averaging.n_positions, averaging.n_configs,
                                 averaging.seed, ctx);
}

double spatial_throughput(const CapacityModel& model, double intensity) {
  if (!(intensity >= 0.0)) throw InvalidConfiguration("spatial_throughput: intensity must be >= 0");
  const double qm = model.average_outage(Tier::Macro, intensity);
  const double femto_term =
      intensity > 0.0 ? intensity * (1.0 - model.average_outage(Tier::Femto, intensity)) : 0.0;
  return (1.0 - qm) / model.area() + femto_term;
}

std::vector<double> isotonic_non_decreasing(const std::vector<double>& values) {
  struct Block {
    double sum;
    std::size_t size;
    double mean() const { return sum / static_cast<double>(size); }
  };
  std::vector<Block> blocks;
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].size += blocks.back().size;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.size, b.mean());
  return out;
}

OutageCurves build_outage_curves(const CapacityModel& model, double search_max,
                                 std::size_t points) {
  if (!(search_max > 0.0) || points < 2) {
    throw InvalidConfiguration("build_outage_curves: need search_max > 0 and >= 2 points");
  }
  OutageCurves c;
  for (std::size_t i = 0; i < points; ++i) {
    const double lambda = search_max * static_cast<double>(i) / static_cast<double>(points - 1);
    c.intensities.push_back(lambda);
    c.macro_raw.push_back(model.average_outage(Tier::Macro, lambda));
    c.femto_raw.push_back(model.average_outage(Tier::Femto, lambda));
  }
  c.macro = isotonic_non_decreasing(c.macro_raw);
  c.femto = isotonic_non_decreasing(c.femto_raw);
  return c;
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

}  // namespace

double invert_curve(const std::vector<double>& intensities, const std::vector<double>& curve,
                    double eps) {
  if (curve.back() <= eps) return intensities.back();
  double lo = intensities.front();
  double hi = intensities.back();
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (interpolate(intensities, curve, mid) <= eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double optimal_intensity(const OutageCurves& curves, const QosConstraint& qos) {
  qos.validate();
  if (curves.macro.front() > qos.eps_macro || curves.femto.front() > qos.eps_femto) {
    throw InfeasibleQos("QoS infeasible without femtocells: q_m(0)=" +
                        std::to_string(curves.macro.front()) + ", q_f(0)=" +
                        std::to_string(curves.femto.front()));
  }
  return std::min(invert_curve(curves.intensities, curves.macro, qos.eps_macro),
                  invert_curve(curves.intensities, curves.femto, qos.eps_femto));
}

double optimal_intensity(const CapacityModel& model, const QosConstraint& qos, double search_max) {
  return optimal_intensity(build_outage_curves(model, search_max), qos);
}

CapacityResult transmission_capacity(const CapacityModel& model, const OutageCurves& curves,
                                     const QosConstraint& qos) {
  CapacityResult r;
  r.optimal_intensity = optimal_intensity(curves, qos);
  r.spatial_throughput = spatial_throughput(model, r.optimal_intensity);
  r.transmission_capacity = r.spatial_throughput;
  return r;
}

CapacityResult transmission_capacity(const CapacityModel& model, const QosConstraint& qos,
                                     double search_max) {
  return transmission_capacity(model, build_outage_curves(model, search_max), qos);
}

double capacity_at(const CapacityModel& model, const CapacityResult& optimum, double intensity) {
  if (intensity >= optimum.optimal_intensity) return optimum.transmission_capacity;
  return spatial_throughput(model, intensity);
}

}  // namespace twotier
