#pragma once

#include <cmath>
#include <cstdint>

namespace nsdde {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xoshiro256++ keyed by (seed, stream). Streams are decorrelated by mixing
/// the stream id into the seeding chain, so each Monte Carlo path owns an
/// independent, reproducible generator.
class Xoshiro256pp {
  public:
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed;
        (void)splitmix64(sm);
        sm ^= 0xD1B54A32D192ED03ull * (stream + 1);
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in (0, 1].
    double next_unit() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Standard normal stream (Box-Muller; the spare of each pair is cached so
/// consumption order is fixed and reproducible).
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Brownian increments are rounded to this dyadic quantum. Sums of quantized
/// increments are then exact in double precision (up to total magnitude 2^21),
/// which makes bin aggregation associative: a coarse increment equals the sum
/// of its sub-bin increments bit for bit, in any grouping.
inline constexpr double kIncrementQuantum = 0x1.0p-32;

inline double quantize_increment(double x) {
    return std::nearbyint(x * 0x1.0p32) * kIncrementQuantum;
}

}  // namespace nsdde
