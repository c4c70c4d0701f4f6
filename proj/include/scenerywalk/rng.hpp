#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scenerywalk {

/// SplitMix64 finalizer (Stafford variant 13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Maps a 64-bit word to a double in (0, 1] using the top 53 bits.
constexpr double to_unit_open_closed(std::uint64_t h) {
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

/// Purposes a per-replica stream can be drawn for. Distinct tags give
/// statistically independent streams for the same (master seed, replica).
enum class StreamTag : std::uint64_t {
    Walk = 1,
    Field = 2,
    Vertical = 3,
    Transverse = 4,
    Auxiliary = 5,
};

/// Seed for replica `index` of purpose `tag` under `master`. Pure function.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag = StreamTag::Walk) {
    std::uint64_t h = mix64(master ^ 0x243f6a8885a308d3ULL);
    h = mix64(h + kGolden * (static_cast<std::uint64_t>(tag) + 1));
    return mix64(h ^ mix64(index + kGolden));
}

/// A random stream for one replica. Conversions to real variates are done
/// here rather than through <random> distributions so that the bit stream of
/// every estimator is fixed by the engine alone.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    RngStream(std::uint64_t master, std::uint64_t index, StreamTag tag = StreamTag::Walk)
        : engine_(derive_seed(master, index, tag)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open() { return to_unit_open_closed(engine_()); }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    /// Uniform integer in [0, n), n < 2^32 (multiply-shift; bias below 2^-32).
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(((engine_() >> 32) * static_cast<std::uint64_t>(n)) >> 32);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace scenerywalk
