#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace hawkes {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

/// Domain tags separating the sub-streams drawn from one RngStream.
enum class StreamDomain : std::uint64_t {
    embedding = 0x454D4244,   // planar Poisson measure bands
    claims = 0x434C4D53,      // marks of non-enforced events
    bar_claims = 0x42434C4D,  // marks attached to enforced jumps
    simplex = 0x53504C58,     // simplex points
    shift_times = 0x53484654,
    expansion = 0x45585041,
    bounds = 0x424E4453,
    mphi = 0x4D504849,
    oracle = 0x4F52434C,
    validate = 0x56414C44,
};

/// Identifies one reproducible stream of randomness. Identical (seed, stream_index)
/// reproduces an identical path bit-for-bit.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;

    /// Child stream for a given purpose; children of distinct (domain, index) are disjoint.
    [[nodiscard]] RngStream child(StreamDomain domain, std::uint64_t index = 0) const noexcept {
        return {mix_seed(mix_seed(seed, stream_index), static_cast<std::uint64_t>(domain)), index};
    }
    [[nodiscard]] std::uint64_t key() const noexcept { return mix_seed(seed, stream_index); }
    /// The i-th member of a family rooted at this stream.
    [[nodiscard]] RngStream at(std::uint64_t i) const noexcept { return {key(), i}; }

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// xoshiro256** generator; satisfies std::uniform_random_bit_generator.
class Engine {
public:
    using result_type = std::uint64_t;

    explicit Engine(std::uint64_t key) noexcept {
        std::uint64_t x = key;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            w = splitmix64(x);
        }
    }
    explicit Engine(const RngStream& stream) noexcept : Engine(stream.key()) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

}  // namespace hawkes
