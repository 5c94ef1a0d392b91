#ifndef AUTOMLC_CORE_RNG_HPP
#define AUTOMLC_CORE_RNG_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace automlc {

/// PCG32 (O'Neill). The single generator used everywhere in the project;
/// every stochastic consumer receives its own substream so that concurrent
/// evaluation cannot perturb another consumer's draws.
class Pcg32 {
  public:
    Pcg32() : Pcg32(0x853c49e6748fea9bULL, 0xda3e39cb94b95bdbULL) {}

    Pcg32(std::uint64_t seed, std::uint64_t seq) : state_(0), inc_((seq << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Unbiased draw from [0, bound); bound must be nonzero.
    std::uint32_t bounded(std::uint32_t bound) {
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 32-bit resolution.
    double next_double() { return next_u32() * (1.0 / 4294967296.0); }

  private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// splitmix64 finalizer; used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over bytes.
std::uint64_t hash_bytes(std::string_view s);

/// Seed of the substream identified by (seed, tag, index).
std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

/// Generator positioned at the start of the substream (seed, tag, index).
Pcg32 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<int> shuffled_indices(std::size_t n, Pcg32& rng);

/// k distinct values from 0..n-1, sorted ascending.
std::vector<int> sample_without_replacement(std::size_t n, std::size_t k, Pcg32& rng);

}  // namespace automlc

#endif
