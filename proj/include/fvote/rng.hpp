#pragma once

#include <cstdint>
#include <limits>

namespace fvote {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Top 53 bits of a word mapped to [0, 1). Platform independent.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seed for a (master, a, b) coordinate, e.g. (plan seed, cell, trial).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) noexcept {
    std::uint64_t h = mix64(master ^ 0x6A09E667F3BCC909ULL);
    h = mix64(h ^ (a * 0xD1B54A32D192ED03ULL));
    h = mix64(h ^ (b * 0xAEF17502108EF2D9ULL));
    return h;
}

/// Sequential SplitMix64 stream. Satisfies UniformRandomBitGenerator and can
/// be split into statistically independent child streams.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return to_unit((*this)()); }

    /// Uniform integer in [0, bound). Lemire's nearly-divisionless method.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    SplitMix64 split() noexcept { return SplitMix64(mix64((*this)() ^ 0x243F6A8885A308D3ULL)); }

private:
    std::uint64_t state_;
};

/// Counter-based draws for the voting engine: one uniform per
/// (seed, step, vertex), independent of evaluation order.
struct DrawStream {
    std::uint64_t seed = 0;
    std::uint64_t step = 0;

    double operator()(std::uint64_t vertex) const noexcept {
        std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL * (step + 1));
        h = mix64(h ^ ((vertex + 1) * 0xBF58476D1CE4E5B9ULL));
        return to_unit(h);
    }
};

} // namespace fvote
