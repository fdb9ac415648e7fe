#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kerr_rabi::noise {

enum class Target { Amplitude, Frequency };

/// Channel indices used for seed splitting; amplitude = 1, frequency = 2.
std::uint64_t channel_index(Target target);

// One stationary Gaussian noise source with correlator
//   <x(t) x(t')> = sigma^2 exp(-|t - t'|/tau).
// sigma = 0 denotes a disabled channel.
struct NoiseChannel {
    double sigma = 0.0;
    double tau = 1.0;
    Target target = Target::Amplitude;

    bool enabled() const { return sigma > 0.0; }
    void validate() const;
};

// A sampled realization, one value per integrator step, held constant within
// each step.
struct NoisePath {
    double dt = 0.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

// Exact one-step update coefficients: x' = decay * x + kick * z with z a
// standard normal. Marginal statistics on the grid are exact for any dt.
struct OuUpdate {
    double decay;
    double kick;
};

OuUpdate ou_update_coefficients(const NoiseChannel& channel, double dt);

/// Stationary start x_0 ~ N(0, sigma^2) followed by the exact update above;
/// fully determined by (seed, channel, dt, n_steps). Throws InvalidStep for
/// dt <= 0.
NoisePath sample_path(const NoiseChannel& channel, double dt, std::size_t n_steps,
                      std::uint64_t seed);

/// White-noise intensity Q = 2 tau sigma^2 of the channel.
double white_noise_intensity(const NoiseChannel& channel);

/// Biased (1/N-normalized) sample autocovariance at lags 0..max_lag, with the
/// sample mean removed. Throws PathTooShort unless max_lag < length / 10.
std::vector<double> estimate_autocorrelation(const NoisePath& path, std::size_t max_lag);

} // namespace kerr_rabi::noise
