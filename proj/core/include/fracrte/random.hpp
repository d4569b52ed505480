#pragma once

#include <cstdint>
#include <limits>

namespace fracrte {

// Counter-based stream: the k-th draw of stream (seed, index) is a pure
// function of (seed, index, k), so walkers can be simulated in any order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t index)
      : key_(mix(mix(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  // Uniform on the open interval (0,1).
  double uniform() { return ((operator()() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t draws() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fracrte
