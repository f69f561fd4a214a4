#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace linksim {

/// Stream purposes; part of every stream key so that draws for different
/// pipeline stages never alias.
enum class StreamTag : std::uint64_t {
  kChannel = 1,
  kNoise = 2,
  kPrecoder = 3,
  kPilot = 4,
};

/// Derives a 64-bit stream key from a master seed and an ordered list of
/// integer coordinates. Distinct coordinate tuples give unrelated keys.
std::uint64_t stream_key(std::uint64_t master_seed, StreamTag tag,
                         std::initializer_list<std::uint64_t> coords);

/// Counter-based generator: the n-th output is a bijective mix of
/// (key + n * golden). Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key) : counter_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 == variance.
  std::complex<double> complex_normal(double variance = 1.0);

 private:
  std::uint64_t counter_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace linksim
