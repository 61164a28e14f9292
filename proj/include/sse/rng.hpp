#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sse {

/// Deterministic random source (xoshiro256**, seeded via splitmix64).
///
/// All generators in this project draw from this class instead of
/// <random> distributions so that a given seed produces identical
/// streams on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) { word = splitmix64(x); }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), n >= 1. Rejection-sampled, unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x = next_u64();
        while (x >= limit) { x = next_u64(); }
        return x % n;
    }

    bool bernoulli(double prob) { return uniform01() < prob; }

    /// Standard normal via Box-Muller (cosine branch only, stateless).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) { u1 = uniform01(); }
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Normal(0, sigma) conditioned on |x| <= k*sigma, by rejection.
    double truncated_normal(double sigma, double k) {
        if (sigma == 0.0) { return 0.0; }
        const double bound = k * sigma;
        double x = sigma * normal();
        while (std::abs(x) > bound) { x = sigma * normal(); }
        return x;
    }

    /// Derive an independent substream; mixing is order-free so
    /// fork(a).fork(b) and fork(b).fork(a) differ, as intended.
    Rng fork(std::uint64_t stream) const {
        std::uint64_t x = state_[0] ^ (0x9e3779b97f4a7c15ULL + stream);
        return Rng(splitmix64(x) ^ splitmix64(x));
    }

    /// Stateless seed mixer for deriving per-(cell, trial) seeds.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
        std::uint64_t x = a;
        std::uint64_t h = splitmix64(x);
        x ^= b + 0x9e3779b97f4a7c15ULL;
        h ^= splitmix64(x);
        x ^= c + 0xbf58476d1ce4e5b9ULL;
        h ^= splitmix64(x);
        return h;
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace sse
