#include "twotier/ratio_approx.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twotier/error.hpp"
#include "twotier/parallel.hpp"

namespace twotier {

std::string_view to_string(RatioKind kind) {
  switch (kind) {
    case RatioKind::RayleighOverRayleigh:
      return "psi/psi0";
    case RatioKind::LogNormalOverRayleigh:
      return "phi/psi0";
    case RatioKind::RayleighOverLogNormal:
      return "psi/phi0";
    case RatioKind::LogNormalOverLogNormal:
      return "phi/phi0";
  }
  return "?";
}

std::optional<RatioKind> parse_ratio_kind(std::string_view label) {
  for (RatioKind k : kAllRatioKinds) {
    if (to_string(k) == label) return k;
  }
  return std::nullopt;
}

bool numerator_is_rayleigh(RatioKind kind) {
  return kind == RatioKind::RayleighOverRayleigh || kind == RatioKind::RayleighOverLogNormal;
}

bool denominator_is_rayleigh(RatioKind kind) {
  return kind == RatioKind::RayleighOverRayleigh || kind == RatioKind::LogNormalOverRayleigh;
}

RatioKind reciprocal(RatioKind kind) {
  switch (kind) {
    case RatioKind::LogNormalOverRayleigh:
      return RatioKind::RayleighOverLogNormal;
    case RatioKind::RayleighOverLogNormal:
      return RatioKind::LogNormalOverRayleigh;
    default:
      return kind;
  }
}

void LogNormalParams::validate() const {
  if (!std::isfinite(m) || !std::isfinite(s) || !(s > 0.0)) {
    throw InvalidConfiguration("LogNormalParams: need finite m and s > 0");
  }
}

void QuadratureConfig::validate() const {
  if (!(lower < upper) || steps < 2 || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw InvalidConfiguration("QuadratureConfig: need lower < upper and steps >= 2");
  }
}

std::size_t GridRange::count() const {
  if (!(step > 0.0) || hi < lo) return 0;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
}

void FitConfig::validate() const {
  if (z_grid.empty() || m_range.count() == 0 || s_range.count() == 0) {
    throw InvalidConfiguration("FitConfig: grids must be non-empty");
  }
  if (!(s_range.lo > 0.0)) {
    throw InvalidConfiguration("FitConfig: s range must be strictly positive");
  }
}

FitConfig FitConfig::around(double mean, double sd) {
  constexpr double kStep = 0.001;
  FitConfig fit;
  fit.z_grid.reserve(1201);
  for (int i = -600; i <= 600; ++i) fit.z_grid.push_back(i * 0.01);
  fit.m_range = {mean - 0.5, mean + 0.5, kStep};
  const double below = std::floor(0.7 * sd / kStep);
  const double above = std::floor(0.5 * sd / kStep);
  fit.s_range = {sd - below * kStep, sd + above * kStep, kStep};
  return fit;
}

double normal_pdf(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double rayleigh_ratio_log_pdf(double z) {
  // Written in terms of e^{-2|z|} so neither tail overflows.
  const double e = std::exp(-2.0 * std::abs(z));
  return 2.0 * e / ((1.0 + e) * (1.0 + e));
}

double lognormal_rayleigh_ratio_log_pdf(double z, const QuadratureConfig& inner) {
  // e^{-2(z-1)} / sqrt(2 pi) * int exp{(-mu^2 - e^{2(mu - z + 2)}) / 2} dmu,
  // with the prefactor folded into the exponent.
  const double shift = -2.0 * (z - 1.0);
  const double integral = trapezoid(
      [&](double mu) {
        return std::exp(shift - 0.5 * mu * mu - 0.5 * std::exp(2.0 * (mu - z + 2.0)));
      },
      inner);
  return integral / std::sqrt(2.0 * std::numbers::pi);
}

double ratio_log_pdf(RatioKind kind, double z, const QuadratureConfig& inner) {
  switch (kind) {
    case RatioKind::RayleighOverRayleigh:
      return rayleigh_ratio_log_pdf(z);
    case RatioKind::LogNormalOverRayleigh:
      return lognormal_rayleigh_ratio_log_pdf(z, inner);
    case RatioKind::RayleighOverLogNormal:
      return lognormal_rayleigh_ratio_log_pdf(-z, inner);
    case RatioKind::LogNormalOverLogNormal:
      return normal_pdf(z, 0.0, std::numbers::sqrt2);
  }
  return 0.0;
}

RatioMoments ratio_moments(RatioKind kind, const QuadratureConfig& quad) {
  quad.validate();
  if (kind == RatioKind::LogNormalOverLogNormal) return {0.0, 2.0};

  const double h = (quad.upper - quad.lower) / quad.steps;
  double mass = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (int i = 0; i <= quad.steps; ++i) {
    const double z = quad.lower + i * h;
    const double w = (i == 0 || i == quad.steps) ? 0.5 * h : h;
    const double f = ratio_log_pdf(kind, z) * w;
    mass += f;
    first += z * f;
    second += z * z * f;
  }
  if (std::abs(1.0 - mass) > 1e-4) {
    throw WindowTooSmall("ratio_moments: window [" + std::to_string(quad.lower) + ", " +
                         std::to_string(quad.upper) + "] holds mass " +
                         std::to_string(mass));
  }
  const double mean = first / mass;
  return {mean, second / mass - mean * mean};
}

double pointwise_fit_error(std::span<const double> z_grid, std::span<const double> exact_pdf,
                           LogNormalParams candidate) {
  double err = 0.0;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    err += std::abs(exact_pdf[i] - normal_pdf(z_grid[i], candidate.m, candidate.s));
  }
  return err;
}

namespace {

struct Candidate {
  double error = std::numeric_limits<double>::infinity();
  std::size_t m_index = 0;
  std::size_t s_index = 0;
  double m = 0.0;
  double s = 0.0;
};

// Strict ordering used for tie-breaking: error, then s, then |m|.
bool better(const Candidate& a, const Candidate& b) {
  if (a.error != b.error) return a.error < b.error;
  if (a.s != b.s) return a.s < b.s;
  return std::abs(a.m) < std::abs(b.m);
}

// When the z grid is uniform and its step is an integer multiple of the m
// step, every offset z_i - m_k lies on one lattice, so each s needs only one
// table of normal densities.
std::optional<std::size_t> lattice_ratio(const std::vector<double>& z, const GridRange& m) {
  if (z.size() < 2) return std::nullopt;
  const double h = z[1] - z[0];
  if (!(h > 0.0)) return std::nullopt;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (std::abs(z[i] - (z[0] + static_cast<double>(i) * h)) > 1e-9) return std::nullopt;
  }
  const double r = h / m.step;
  const double rr = std::round(r);
  if (rr < 1.0 || std::abs(r - rr) > 1e-6) return std::nullopt;
  return static_cast<std::size_t>(rr);
}

}  // namespace

RatioApproximation fit_lognormal_surrogate(RatioKind kind, const FitConfig& fit,
                                           const QuadratureConfig& quad) {
  const RatioMoments moments = ratio_moments(kind, quad);
  if (kind == RatioKind::LogNormalOverLogNormal) {
    return {kind, moments.mean, moments.variance, {0.0, std::numbers::sqrt2}, 0.0};
  }
  fit.validate();

  std::vector<double> exact(fit.z_grid.size());
  for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = ratio_log_pdf(kind, fit.z_grid[i]);

  const std::size_t n_m = fit.m_range.count();
  const std::size_t n_s = fit.s_range.count();
  const std::size_t n_z = fit.z_grid.size();
  const auto ratio = lattice_ratio(fit.z_grid, fit.m_range);

  constexpr std::size_t kChunk = 32;
  const std::size_t n_chunks = (n_s + kChunk - 1) / kChunk;
  std::vector<Candidate> best_per_chunk(n_chunks);

  detail::for_each_chunk(n_chunks, [&](std::size_t chunk) {
    Candidate best;
    std::vector<double> table;
    for (std::size_t js = chunk * kChunk; js < std::min(n_s, (chunk + 1) * kChunk); ++js) {
      const double s = fit.s_range.at(js);
      if (ratio) {
        // offset(i, k) = base + (r*i - k) * m_step, index shifted by n_m - 1.
        const double base = fit.z_grid[0] - fit.m_range.lo;
        const std::size_t span = *ratio * (n_z - 1) + n_m;
        table.resize(span);
        for (std::size_t n = 0; n < span; ++n) {
          const double off =
              base + (static_cast<double>(n) - static_cast<double>(n_m - 1)) * fit.m_range.step;
          table[n] = normal_pdf(off, 0.0, s);
        }
      }
      for (std::size_t km = 0; km < n_m; ++km) {
        const double m = fit.m_range.at(km);
        double err = 0.0;
        if (ratio) {
          const std::size_t start = n_m - 1 - km;
          for (std::size_t i = 0; i < n_z; ++i) {
            err += std::abs(exact[i] - table[start + *ratio * i]);
          }
        } else {
          for (std::size_t i = 0; i < n_z; ++i) {
            err += std::abs(exact[i] - normal_pdf(fit.z_grid[i], m, s));
          }
        }
        Candidate c{err, km, js, m, s};
        if (better(c, best)) best = c;
      }
    }
    best_per_chunk[chunk] = best;
  });

  Candidate best;
  for (const auto& c : best_per_chunk) {
    if (better(c, best)) best = c;
  }
  if (best.m_index == 0 || best.m_index + 1 == n_m || best.s_index == 0 ||
      best.s_index + 1 == n_s) {
    throw BoundaryHit("fit_lognormal_surrogate(" + std::string(to_string(kind)) +
                      "): optimum m=" + std::to_string(best.m) + ", s=" +
                      std::to_string(best.s) + " lies on the search boundary");
  }
  return {kind, moments.mean, moments.variance, {best.m, best.s}, best.error};
}

RatioApproximation fit_lognormal_surrogate(RatioKind kind) {
  const auto quad = QuadratureConfig::moments_default();
  const RatioMoments moments = ratio_moments(kind, quad);
  return fit_lognormal_surrogate(kind, FitConfig::around(moments.mean, std::sqrt(moments.variance)),
                                 quad);
}

RatioApproximation reciprocal_surrogate(const RatioApproximation& a) {
  RatioApproximation r = a;
  r.kind = reciprocal(a.kind);
  r.exact_mean = -a.exact_mean;
  r.fitted.m = -a.fitted.m;
  return r;
}

SurrogateSet::SurrogateSet() : SurrogateSet(reported()) {}

SurrogateSet::SurrogateSet(std::array<LogNormalParams, 4> params) : params_(params) {
  for (const auto& p : params_) p.validate();
}

SurrogateSet SurrogateSet::reported() {
  return SurrogateSet({LogNormalParams{0.0, 0.7979}, LogNormalParams{-0.143, 1.1673},
                       LogNormalParams{0.143, 1.1673},
                       LogNormalParams{0.0, std::numbers::sqrt2}});
}

SurrogateSet SurrogateSet::fitted() {
  const auto rr = fit_lognormal_surrogate(RatioKind::RayleighOverRayleigh);
  const auto lr = fit_lognormal_surrogate(RatioKind::LogNormalOverRayleigh);
  const auto rl = reciprocal_surrogate(lr);
  return SurrogateSet({rr.fitted, lr.fitted, rl.fitted,
                       LogNormalParams{0.0, std::numbers::sqrt2}});
}

const LogNormalParams& SurrogateSet::at(RatioKind kind) const {
  return params_[static_cast<std::size_t>(kind)];
}

void SurrogateSet::set(RatioKind kind, LogNormalParams p) {
  p.validate();
  params_[static_cast<std::size_t>(kind)] = p;
}

}  // namespace twotier
