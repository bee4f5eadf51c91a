#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ktour {

// Counter-based generator: output i of a stream is the SplitMix64 finalizer
// applied to key + (i + 1) * golden_gamma, where the key is derived from
// (seed, stream index). Streams are independent of scheduling, so any
// assignment of streams to threads reproduces the same outputs.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kName = "splitmix64-counter/1";

  CounterStream(std::uint64_t seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline CounterStream::CounterStream(std::uint64_t seed,
                                    std::uint64_t stream_index)
    : key_(mix(seed ^ mix(stream_index * kGamma + 0x6a09e667f3bcc909ULL))) {}

}  // namespace ktour
