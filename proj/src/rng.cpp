#include "linksim/rng.hpp"

#include <cmath>

namespace linksim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_key(std::uint64_t master_seed, StreamTag tag,
                         std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(master_seed + kGolden);
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) * kGolden));
  std::uint64_t position = 1;
  for (std::uint64_t c : coords) {
    h = mix64(h + mix64(c + position * kGolden));
    ++position;
  }
  return h;
}

RngStream::result_type RngStream::operator()() {
  counter_ += kGolden;
  return mix64(counter_);
}

double RngStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(*this); }

std::complex<double> RngStream::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

}  // namespace linksim
