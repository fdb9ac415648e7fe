#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace kerr_rabi::rng {

// splitmix64 finalizer; also used as the counter-based seed-splitting hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Sub-seed for (master seed, trajectory index, channel index). Trajectories
/// and channels get statistically independent streams, and the derivation is
/// order-free so ensembles can run on any number of workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trajectory,
                                 std::uint64_t channel) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s = h ^ (trajectory * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
    h = splitmix64(s);
    s = h ^ (channel * 0x2545F4914F6CDD1DULL + 0x9E6C63D0876A9A62ULL);
    return splitmix64(s);
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& word : state_)
            word = splitmix64(seed);
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

    /// Uniform double in (0, 1].
    double uniform_open0() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Standard normal variates via the Box-Muller transform (pairs cached).
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = rng_.uniform_open0();
        const double u2 = rng_.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    Xoshiro256pp rng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace kerr_rabi::rng
