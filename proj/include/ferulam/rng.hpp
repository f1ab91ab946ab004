#pragma once

#include <array>
#include <cstdint>

namespace ferulam {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A pure block function: identical (counter, key) always yields identical
// bits, so sample i of a stream can be produced by any worker in any order.

namespace philox {

constexpr std::uint32_t kW32A = 0x9E3779B9u;
constexpr std::uint32_t kW32B = 0xBB67AE85u;
constexpr std::uint32_t kM4x32A = 0xD2511F53u;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mul_hi_lo(kM4x32A, ctr[0], lo0, hi0);
        mul_hi_lo(kM4x32B, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return ctr;
}

} // namespace philox

/// Stateless uniform random stream: value(i) is a pure function of
/// (seed, stream, i). Streams with distinct (seed, stream) are independent.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t index) const noexcept {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        const auto out = philox::block(ctr, key);
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

    /// Uniform double in [0,1), 53 significant bits.
    double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(std::uint64_t index, double lo, double hi) const noexcept {
        return lo + uniform(index) * (hi - lo);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Substream addressing: (a, b) packs two 32-bit indices into one stream id,
/// e.g. (omega index + 1, orbit index) for per-orbit streams.
inline RandomStream substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return RandomStream(seed, (a << 32) | (b & 0xFFFFFFFFull));
}

} // namespace ferulam
