#include "twotier/random_stream.hpp"

#include <cmath>

#include "twotier/error.hpp"

namespace twotier {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_, splitmix64(stream_id_ ^ splitmix64(index + 1)));
}

double RandomStream::uniform() {
  // 53 random mantissa bits, shifted by half an ulp off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() { return standard_normal_quantile(uniform()); }

double RandomStream::rayleigh() { return rayleigh_from_uniform(uniform()); }

double RandomStream::lognormal() { return std::exp(standard_normal()); }

double rayleigh_from_uniform(double u, double sigma) {
  return sigma * std::sqrt(-2.0 * std::log(u));
}

// Acklam's rational approximation to the inverse normal CDF.
double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("standard_normal_quantile: p must lie in (0, 1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > p_high) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::vector<double> sample_rayleigh(RandomStream& stream, std::size_t n) {
  if (n == 0) throw InvalidConfiguration("sample_rayleigh: n must be >= 1");
  std::vector<double> out(n);
  for (auto& x : out) x = stream.rayleigh();
  return out;
}

std::vector<double> sample_lognormal(RandomStream& stream, std::size_t n) {
  if (n == 0) throw InvalidConfiguration("sample_lognormal: n must be >= 1");
  std::vector<double> out(n);
  for (auto& x : out) x = stream.lognormal();
  return out;
}

}  // namespace twotier
