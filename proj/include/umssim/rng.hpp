#pragma once

#include <cstdint>
#include <limits>

namespace umssim {

/// SplitMix64 generator. Used for every random stream in the simulator so
/// that runs are bit-identical across platforms and standard libraries.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// The SplitMix64 output function applied to a single value.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Tags separating the independent streams derived from one master seed.
enum class SeedPurpose : std::uint64_t {
    Environment = 1,
    Simulation = 2,
    Claims = 3,
};

/// Derive a child seed for (cycle, episode, purpose) from a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cycle,
                                    std::uint64_t episode, std::uint64_t purpose) noexcept {
    const std::uint64_t mixed = master ^ (cycle * 0x9E3779B97F4A7C15ull) ^
                                (episode * 0xBF58476D1CE4E5B9ull) ^ purpose;
    return splitmix64_finalize(mixed);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cycle,
                                    std::uint64_t episode, SeedPurpose purpose) noexcept {
    return derive_seed(master, cycle, episode, static_cast<std::uint64_t>(purpose));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
template <class Rng>
double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

template <class Rng>
bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform_unit(rng) < p;
}

}  // namespace umssim
