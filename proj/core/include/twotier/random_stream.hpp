#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace twotier {

// Seeded uniform source with a splitting discipline: a stream is identified
// by (seed, stream_id), and substream(i) derives an independent child whose
// identity depends only on the parent identity and i. Workers that each own
// one substream therefore produce the same numbers under any schedule.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  RandomStream substream(std::uint64_t index) const;

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();
  double standard_normal();
  // Rayleigh with sigma = 1.
  double rayleigh();
  // e^G with G ~ N(0, 1).
  double lognormal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Inverse-transform Rayleigh(sigma) sample for a given uniform draw.
double rayleigh_from_uniform(double u, double sigma = 1.0);

// Standard normal quantile, rational approximation with relative error
// below 1.2e-9 over (0, 1).
double standard_normal_quantile(double p);

std::vector<double> sample_rayleigh(RandomStream& stream, std::size_t n);
std::vector<double> sample_lognormal(RandomStream& stream, std::size_t n);

}  // namespace twotier
