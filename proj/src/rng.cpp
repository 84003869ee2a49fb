#include "outagekit/rng.hpp"

#include <cmath>
#include <random>

namespace outagekit {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::block_type Philox4x32::block(block_type ctr, key_type key) noexcept {
    for (int r = 0; r < rounds; ++r) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

void Philox4x32::refill() noexcept {
    buffer_ = block(counter_, key_);
    if (++counter_[0] == 0) {
        ++counter_[1];
    }
    index_ = 0;
}

std::uint64_t Philox4x32::next_u64() noexcept {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    return (hi << 32) | lo;
}

double Philox4x32::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

void Philox4x32::discard(unsigned long long n) noexcept {
    while (n > 0 && index_ < 4) {
        ++index_;
        --n;
    }
    const unsigned long long blocks = n / 4;
    const std::uint64_t c = (static_cast<std::uint64_t>(counter_[1]) << 32 | counter_[0]) + blocks;
    counter_[0] = static_cast<std::uint32_t>(c);
    counter_[1] = static_cast<std::uint32_t>(c >> 32);
    const unsigned rest = static_cast<unsigned>(n % 4);
    if (rest > 0) {
        refill();
        index_ = rest;
    }
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ (index * 0xD1B54A32D192ED03ull + 1));
}

double exponential(Philox4x32& rng, double rate) {
    return -std::log(rng.uniform_pos()) / rate;
}

double normal(Philox4x32& rng) {
    // Box-Muller without caching keeps draws a pure function of stream position.
    const double u1 = rng.uniform_pos();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t poisson(Philox4x32& rng, double mean) {
    if (!(mean > 0.0)) {
        return 0;
    }
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

}  // namespace outagekit
