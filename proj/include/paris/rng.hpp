#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace paris {

/// Logical sub-streams used by the algorithms. Keeping them distinct means the
/// forward and backward passes of one step never share draws.
enum class Channel : std::uint64_t {
  kInit = 1,
  kForward = 2,
  kBackward = 3,
  kData = 4,
  kUser = 16,
};

/// Counter-based random stream keyed by (seed, time index, particle index,
/// channel). The draw counter advances with every 64-bit output, so a stream
/// is fully determined by its key and the number of draws taken from it. Two
/// streams with different keys are independent for all practical purposes;
/// this is what makes per-particle parallel loops reproducible.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t time_index, std::uint64_t particle_index,
            Channel channel = Channel::kUser);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Derives a child seed from a parent seed and a tag (replicate index,
/// experiment grid point, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace paris
