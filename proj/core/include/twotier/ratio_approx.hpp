#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace twotier {

// Ratio of two unit-parameter fading variables, numerator over denominator.
// psi is outdoor Rayleigh fading (sigma = 1); phi is indoor log-normal
// fading, LN(0, 1). Z = ln(ratio) is the quantity whose density is modelled.
enum class RatioKind {
  RayleighOverRayleigh,    // psi / psi0
  LogNormalOverRayleigh,   // phi / psi0
  RayleighOverLogNormal,   // psi / phi0
  LogNormalOverLogNormal,  // phi / phi0
};

inline constexpr std::array<RatioKind, 4> kAllRatioKinds = {
    RatioKind::RayleighOverRayleigh, RatioKind::LogNormalOverRayleigh,
    RatioKind::RayleighOverLogNormal, RatioKind::LogNormalOverLogNormal};

std::string_view to_string(RatioKind kind);
std::optional<RatioKind> parse_ratio_kind(std::string_view label);

bool numerator_is_rayleigh(RatioKind kind);
bool denominator_is_rayleigh(RatioKind kind);
// Kind with numerator and denominator exchanged.
RatioKind reciprocal(RatioKind kind);

// ln-domain normal parameters: V ~ LN(m, s^2) means ln V ~ N(m, s^2).
struct LogNormalParams {
  double m = 0.0;
  double s = 1.0;

  void validate() const;
  friend bool operator==(const LogNormalParams&, const LogNormalParams&) = default;
};

// Composite trapezoid rule on [lower, upper] with `steps` intervals.
struct QuadratureConfig {
  double lower = -12.0;
  double upper = 12.0;
  int steps = 40000;

  void validate() const;

  // Outer window used for moments and normalization.
  static QuadratureConfig moments_default() { return {-12.0, 12.0, 40000}; }
  // Inner integral of the log-normal/Rayleigh density.
  static QuadratureConfig inner_default() { return {-12.0, 12.0, 4000}; }
};

// Evenly spaced search axis: values lo + k*step for k = 0..count()-1.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.001;

  std::size_t count() const;
  double at(std::size_t k) const { return lo + static_cast<double>(k) * step; }
};

struct FitConfig {
  std::vector<double> z_grid;
  GridRange m_range;
  GridRange s_range;

  void validate() const;

  // Default search around the moment-matched point: z in [-6, 6] step 0.01,
  // m in mean +- 0.5, s in [0.3, 1.5] * sd, both with step 0.001. Both axes
  // are anchored so that (mean, sd) itself is a grid point.
  static FitConfig around(double mean, double sd);
};

struct RatioMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct RatioApproximation {
  RatioKind kind = RatioKind::RayleighOverRayleigh;
  double exact_mean = 0.0;
  double exact_var = 1.0;
  LogNormalParams fitted;
  // Sum of absolute pointwise density errors at the fitted point (0 when the
  // surrogate is exact).
  double fit_error = 0.0;
};

// Density of Z = ln(psi/psi0) for i.i.d. Rayleigh psi, psi0:
// 2 e^{2z} / (1 + e^{2z})^2, a logistic density with scale 1/2.
double rayleigh_ratio_log_pdf(double z);

// Density of Z = ln(phi/psi) for phi ~ LN(0,1), psi ~ Rayleigh(1). The inner
// integral over mu is evaluated with the trapezoid rule described by `inner`.
double lognormal_rayleigh_ratio_log_pdf(
    double z, const QuadratureConfig& inner = QuadratureConfig::inner_default());

// Exact log-ratio density for any kind (the reciprocal kinds mirror in z).
double ratio_log_pdf(RatioKind kind, double z,
                     const QuadratureConfig& inner = QuadratureConfig::inner_default());

double normal_pdf(double x, double mean, double sd);

// Composite trapezoid integral of f over the configured window.
template <typename F>
double trapezoid(F&& f, const QuadratureConfig& quad) {
  quad.validate();
  const double h = (quad.upper - quad.lower) / quad.steps;
  double sum = 0.5 * (f(quad.lower) + f(quad.upper));
  for (int i = 1; i < quad.steps; ++i) sum += f(quad.lower + i * h);
  return sum * h;
}

// (E[Z], V[Z]) by quadrature against the exact density. Throws WindowTooSmall
// when more than 1e-4 of the mass falls outside the window.
RatioMoments ratio_moments(RatioKind kind,
                           const QuadratureConfig& quad = QuadratureConfig::moments_default());

// Sum over z_grid of |exact_pdf(z) - N(z; m, s)|.
double pointwise_fit_error(std::span<const double> z_grid,
                           std::span<const double> exact_pdf, LogNormalParams candidate);

// Grid search for the normal density closest (absolute pointwise error) to
// the exact log-ratio density. Ties go to smaller s, then smaller |m|.
RatioApproximation fit_lognormal_surrogate(RatioKind kind, const FitConfig& fit,
                                           const QuadratureConfig& quad);
// Same, with the default moments window and FitConfig::around(moments).
RatioApproximation fit_lognormal_surrogate(RatioKind kind);

// Surrogate of the inverted ratio: kind swapped, m negated, s unchanged.
RatioApproximation reciprocal_surrogate(const RatioApproximation& a);

// Surrogate parameters for each of the four ratio kinds.
class SurrogateSet {
 public:
  SurrogateSet();  // reported()
  explicit SurrogateSet(std::array<LogNormalParams, 4> params);

  // Reference values: LN(0, 0.7979^2) for psi/psi0,
  // LN(-0.143, 1.1673^2) for phi/psi0, its reciprocal, and LN(0, 2).
  static SurrogateSet reported();
  // Runs fit_lognormal_surrogate with the default grids.
  static SurrogateSet fitted();

  const LogNormalParams& at(RatioKind kind) const;
  void set(RatioKind kind, LogNormalParams p);

 private:
  std::array<LogNormalParams, 4> params_;
};

}  // namespace twotier
