#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace intertwine {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds.
PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key);

// Mixes a list of integers into one stream index.
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts);

// Counter-based generator: the seed is the key, (stream, draw index) the counter.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() { return normal_(*this); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  RngStream substream(std::uint64_t index) const {
    return RngStream(seed_, stream_id({stream_, index}));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
  std::normal_distribution<double> normal_;
};

}  // namespace intertwine
