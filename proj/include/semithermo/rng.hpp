#pragma once

#include <cstdint>

namespace semithermo {

/// SplitMix64 (Steele, Lea, Flood 2014). Constants: increment
/// 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB,
/// shifts 30/27/31. Output is identical on every platform.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next()
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n > 0.
    constexpr std::uint64_t below(std::uint64_t n)
    {
        const auto r = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return r < n ? r : n - 1;
    }

    /// Independent stream for substream `index` of `seed`.
    static constexpr SplitMix64 split(std::uint64_t seed, std::uint64_t index)
    {
        return SplitMix64(mix(seed ^ mix(index + 0x9E3779B97F4A7C15ULL)));
    }

    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

} // namespace semithermo
