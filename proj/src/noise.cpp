#include "kerr_rabi/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/rng.hpp"

namespace kerr_rabi::noise {

std::uint64_t channel_index(Target target) {
    return target == Target::Amplitude ? 1u : 2u;
}

void NoiseChannel::validate() const {
    if (sigma < 0.0)
        throw std::invalid_argument("NoiseChannel: sigma must be >= 0");
    if (!(tau > 0.0))
        throw std::invalid_argument("NoiseChannel: tau must be positive");
}

OuUpdate ou_update_coefficients(const NoiseChannel& channel, double dt) {
    channel.validate();
    if (!(dt > 0.0))
        throw InvalidStep("noise path step must be positive");
    const double decay = std::exp(-dt / channel.tau);
    const double kick = channel.sigma * std::sqrt(1.0 - decay * decay);
    return {decay, kick};
}

NoisePath sample_path(const NoiseChannel& channel, double dt, std::size_t n_steps,
                      std::uint64_t seed) {
    const OuUpdate update = ou_update_coefficients(channel, dt);
    if (n_steps < 1)
        throw std::invalid_argument("sample_path: n_steps must be >= 1");

    NoisePath path;
    path.dt = dt;
    path.seed = seed;
    path.values.assign(n_steps, 0.0);
    if (!channel.enabled())
        return path;

    rng::GaussianSampler gauss(seed);
    double x = channel.sigma * gauss.next();
    path.values[0] = x;
    for (std::size_t k = 1; k < n_steps; ++k) {
        x = update.decay * x + update.kick * gauss.next();
        path.values[k] = x;
    }
    return path;
}

double white_noise_intensity(const NoiseChannel& channel) {
    channel.validate();
    return 2.0 * channel.tau * channel.sigma * channel.sigma;
}

std::vector<double> estimate_autocorrelation(const NoisePath& path, std::size_t max_lag) {
    const std::size_t n = path.values.size();
    if (max_lag >= n / 10)
        throw PathTooShort("autocorrelation needs max_lag < path length / 10");

    double mean = 0.0;
    for (double v : path.values)
        mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> acov(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double sum = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k)
            sum += (path.values[k] - mean) * (path.values[k + lag] - mean);
        acov[lag] = sum / static_cast<double>(n);
    }
    return acov;
}

} // namespace kerr_rabi::noise
