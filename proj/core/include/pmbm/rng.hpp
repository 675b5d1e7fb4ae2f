#pragma once

#include <cstdint>
#include <limits>

namespace pmbm {

/// SplitMix64 counter generator keyed by (seed, stream). Distinct streams give independent
/// sequences for the same seed; satisfies UniformRandomBitGenerator.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
        : counter_(mix(seed + kGolden) ^ mix(mix(stream) + 0x632BE59BD9B4E019ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        counter_ += kGolden;
        return mix(counter_);
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t counter_;
};

}  // namespace pmbm
