#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace outagekit {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11; Random123 v1.09).
///
/// The 64-bit key is the seed; the upper two counter words carry a 64-bit
/// stream id, the lower two a block counter. Distinct (seed, stream) pairs
/// give independent sequences, so each Monte Carlo replication owns a stream
/// and results do not depend on scheduling.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using block_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr int rounds = 10;

    explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (index_ == 4) {
            refill();
        }
        return buffer_[index_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform double in (0, 1].
    double uniform_pos() noexcept { return 1.0 - uniform(); }

    std::uint64_t next_u64() noexcept;

    void discard(unsigned long long n) noexcept;

    /// The raw bijection: ten rounds on a counter block under a key.
    static block_type block(block_type counter, key_type key) noexcept;

private:
    void refill() noexcept;

    key_type key_{};
    block_type counter_{};
    block_type buffer_{};
    unsigned index_ = 4;
};

/// SplitMix64 finalizer; used to derive child seeds from (seed, index).
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Draws from standard distributions on top of any 32-bit engine.
double exponential(Philox4x32& rng, double rate = 1.0);
double normal(Philox4x32& rng);
std::uint64_t poisson(Philox4x32& rng, double mean);

}  // namespace outagekit
