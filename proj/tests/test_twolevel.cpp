#include <doctest.h>

#include <cmath>
#include <vector>

#include "kerr_rabi/ensemble.hpp"
#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/rng.hpp"
#include "kerr_rabi/spectrum.hpp"
#include "kerr_rabi/twolevel.hpp"

using namespace kerr_rabi;

namespace {

const OscillatorParams kKerr{1.0, 0.0};
const OscillatorParams kOverKerr{1.0, -0.025};

std::vector<double> linspace(double t_end, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

} // namespace

TEST_CASE("block entries at the reference operating points") {
    SUBCASE("symmetric model at resonance: equal diagonals") {
        const auto blocks = twolevel::build_blocks(kKerr, {5, 0}, 0.202931, 2.5);
        CHECK(blocks.h11 == doctest::Approx(blocks.h22).epsilon(1e-12));
        CHECK(blocks.v11 == doctest::Approx(blocks.v22).epsilon(1e-12));
        CHECK(blocks.v12 == doctest::Approx(2.580e-3).epsilon(1e-3));
        CHECK(blocks.v2_upper() == 0.0);
        CHECK(blocks.v2_lower() == -5.0);
    }
    SUBCASE("asymmetric model: diagonal noise coupling difference") {
        const auto blocks = twolevel::build_blocks(kOverKerr, {4, 0}, 0.075692, 1.599393);
        CHECK(blocks.v22 - blocks.v11 == doctest::Approx(-0.0642090).epsilon(1e-4));
    }
}

TEST_CASE("noise-free propagation is an exact cosine at resonance") {
    const double g = 0.138884;
    const double delta = spectrum::refine_resonance_two_level(kOverKerr, {5, 0}, g);
    const auto blocks = twolevel::build_blocks(kOverKerr, {5, 0}, g, delta);
    const double omega = blocks.h12;

    const double t_end = 2.0 * M_PI / std::abs(omega);
    const std::size_t n_steps = 8192;
    const auto trace = twolevel::propagate_effective(kOverKerr, {5, 0}, g, delta, nullptr,
                                                     nullptr, t_end / n_steps, n_steps,
                                                     twolevel::EffectiveMode::FullEffective, 8);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        CHECK(std::abs(trace.inversion[i] - std::cos(2.0 * omega * trace.times[i])) < 1e-9);
    CHECK(trace.norm_drift < 1e-12);
}

TEST_CASE("linearized mode stays close to the unexpanded mode at weak noise") {
    const double g = 0.138884, delta = 1.872625, tau = 100.0;
    const noise::NoiseChannel channel{0.01 * g, tau, noise::Target::Amplitude};
    const double dt = tau / 20.0;
    const double omega = std::abs(spectrum::rabi_frequency(kOverKerr, delta, g, {5, 0}));
    const auto n_steps = static_cast<std::size_t>(M_PI / omega / dt);  // one period
    const auto amp = noise::sample_path(channel, dt, n_steps, rng::derive_seed(21, 0, 1));

    const auto full = twolevel::propagate_effective(kOverKerr, {5, 0}, g, delta, &amp, nullptr,
                                                    dt, n_steps,
                                                    twolevel::EffectiveMode::FullEffective);
    const auto lin = twolevel::propagate_effective(kOverKerr, {5, 0}, g, delta, &amp, nullptr,
                                                   dt, n_steps,
                                                   twolevel::EffectiveMode::Linearized);
    for (std::size_t i = 0; i < full.inversion.size(); ++i)
        CHECK(std::abs(full.inversion[i] - lin.inversion[i]) < 0.02);
}

TEST_CASE("averaged-state equations: noiseless limit") {
    const double g = 0.202931;
    const auto blocks = twolevel::build_blocks(kKerr, {5, 0}, g, 2.5);
    const auto times = linspace(2.0 * M_PI / blocks.h12, 400);
    const auto trace = twolevel::solve_master_equation(blocks, 0.0, 0.0, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(2.0 * trace.z[i] - std::cos(2.0 * blocks.h12 * times[i])) < 1e-8);
}

TEST_CASE("averaged-state equations match the decoupled closed form in all regimes") {
    const double omega = 1.03e-4;
    for (double ratio : {0.1, 0.5, 0.999, 1.0, 1.001, 1.5, 3.0, 10.0}) {
        const double gamma = ratio * 2.0 * omega;
        twolevel::TwoLevelBlocks blocks;
        blocks.n_prime = 0;
        blocks.n = 5;
        blocks.h11 = blocks.h22 = 0.3;
        blocks.h12 = omega;
        blocks.v12 = 0.0;
        blocks.v11 = 2.0 * std::sqrt(gamma);  // q1 = 1 makes gamma = (v11-v22)^2/4
        blocks.v22 = 0.0;
        const double horizon = ratio > 1.0 ? 5.0 / gamma : 2.0 * M_PI / omega;
        const auto times = linspace(horizon, 200);
        const auto trace = twolevel::solve_master_equation(blocks, 1.0, 0.0, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double closed = twolevel::analytic_overkerr(gamma, omega, times[i]);
            CHECK(std::abs(2.0 * trace.z[i] - closed) < 1e-6);
        }
    }
}

TEST_CASE("averaged-state equations match the symmetric closed form") {
    const auto blocks_ref = twolevel::build_blocks(kKerr, {5, 0}, 0.202931, 2.5);
    auto blocks = blocks_ref;
    blocks.v11 = blocks.v22 = 0.7;  // common diagonal drops out of the dynamics
    const double q1 = 0.823620;
    const auto times = linspace(2.5 * M_PI / blocks.h12, 300);
    const auto trace = twolevel::solve_master_equation(blocks, q1, 0.0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double closed =
            twolevel::analytic_kerr_white(blocks.v12, blocks.h12, q1, times[i]);
        CHECK(std::abs(2.0 * trace.z[i] - closed) < 1e-6);
    }
}

TEST_CASE("averaged-state radius never grows") {
    twolevel::TwoLevelBlocks blocks;
    blocks.n_prime = 0;
    blocks.n = 4;
    blocks.h11 = 0.11;
    blocks.h22 = 0.13;
    blocks.h12 = 2.0e-4;
    blocks.v11 = 0.02;
    blocks.v22 = -0.04;
    blocks.v12 = 3.0e-3;
    const auto times = linspace(5.0e4, 500);
    const auto trace = twolevel::solve_master_equation(blocks, 0.5, 0.2, times);
    double previous = 1e300;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double radius2 = trace.x[i] * trace.x[i] + trace.y[i] * trace.y[i] +
                               trace.z[i] * trace.z[i];
        CHECK(radius2 <= 0.25 + 1e-9);
        CHECK(radius2 <= previous + 1e-9);
        previous = radius2;
    }
}

TEST_CASE("decay rates reproduce the tabulated damping ratios") {
    struct Case {
        OscillatorParams params;
        ResonantPair pair;
        double g, tau, delta, expected_ratio;
    };
    const std::vector<Case> cases = {
        {kOverKerr, {3, 0}, 0.029492, 2000.0, 1.274905, 0.015488},
        {kOverKerr, {4, 0}, 0.075692, 2000.0, 1.599393, 1.13117},
        {kOverKerr, {5, 0}, 0.138884, 100.0, 1.872625, 1.37095},
    };
    for (const auto& c : cases) {
        const double sigma = 0.1 * c.g;
        const double q1 = 2.0 * c.tau * sigma * sigma;
        const auto rate = twolevel::decay_rate(c.params, c.pair, c.g, c.delta, q1, 0.0);
        const double omega = spectrum::rabi_frequency(c.params, c.delta, c.g, c.pair);
        CHECK(rate.gamma / (2.0 * omega) ==
              doctest::Approx(c.expected_ratio).epsilon(1e-4));
        CHECK(rate.discriminant ==
              doctest::Approx(rate.gamma * rate.gamma - 4.0 * omega * omega).epsilon(1e-12));
    }
}

TEST_CASE("frequency noise damps both models identically") {
    const double q2 = 0.3;
    const auto kerr = twolevel::decay_rate(kKerr, {5, 0}, 0.202931, 2.5, 0.0, q2);
    const auto over = twolevel::decay_rate(kOverKerr, {5, 0}, 0.138884, 1.872625, 0.0, q2);
    CHECK(kerr.gamma == doctest::Approx(q2 * 25.0 / 4.0).epsilon(1e-12));
    CHECK(over.gamma == doctest::Approx(q2 * 25.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("decoupled decay solution: limits and branch continuity") {
    CHECK(twolevel::analytic_overkerr(0.3, 1.0, 0.0) == 1.0);
    const double omega = 1.0e-4;
    for (double t : {1.0e3, 2.0e4, 5.0e4})
        CHECK(twolevel::analytic_overkerr(0.0, omega, t) ==
              doctest::Approx(std::cos(2.0 * omega * t)).epsilon(1e-12));
    // continuity across the critically damped point
    const double t = 3.0e4;
    const double below = twolevel::analytic_overkerr(2.0 * omega * (1.0 - 1e-6), omega, t);
    const double above = twolevel::analytic_overkerr(2.0 * omega * (1.0 + 1e-6), omega, t);
    CHECK(std::abs(below - above) < 1e-6);
    // strong damping: slow monotonic decay, no sign change
    double previous = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double value = twolevel::analytic_overkerr(20.0 * omega, omega, i * 2.0e3);
        CHECK(value >= 0.0);
        CHECK(value <= previous + 1e-15);
        previous = value;
    }
}

TEST_CASE("symmetric-model closed forms") {
    const auto blocks = twolevel::build_blocks(kKerr, {5, 0}, 0.202931, 2.5);
    const double q1 = 0.823620;

    // 1/e time of the damped cosine envelope is near 9.1e4
    const double t_decay = 1.0 / (2.0 * q1 * blocks.v12 * blocks.v12);
    CHECK(t_decay == doctest::Approx(9.1e4).epsilon(0.01));

    CHECK(twolevel::analytic_kerr_white(blocks.v12, blocks.h12, q1, 0.0) == 1.0);
    CHECK(twolevel::analytic_kerr_white(blocks.v12, blocks.h12, 0.0, 1234.0) ==
          doctest::Approx(std::cos(2.0 * blocks.h12 * 1234.0)).epsilon(1e-12));

    const noise::NoiseChannel channel{0.0202931, 1000.0, noise::Target::Amplitude};
    SUBCASE("finite correlation time: quadratic onset") {
        const double t = 10.0;  // t << tau
        const double envelope =
            twolevel::analytic_kerr_correlated(blocks.v12, 0.0, channel, t);
        const double expected = std::exp(-2.0 * blocks.v12 * blocks.v12 *
                                         channel.sigma * channel.sigma * t * t);
        CHECK(envelope == doctest::Approx(expected).epsilon(0.01));
    }
    SUBCASE("finite correlation time: white-noise rate at late times") {
        const double t1 = 2.0e5, t2 = 3.0e5;
        const double log_ratio =
            std::log(twolevel::analytic_kerr_correlated(blocks.v12, 0.0, channel, t1) /
                     twolevel::analytic_kerr_correlated(blocks.v12, 0.0, channel, t2));
        const double white_rate = 2.0 * q1 * blocks.v12 * blocks.v12;
        CHECK(log_ratio == doctest::Approx(white_rate * (t2 - t1)).epsilon(0.01));
    }
    SUBCASE("disabled channel reduces to the bare cosine") {
        const noise::NoiseChannel off{0.0, 1000.0, noise::Target::Amplitude};
        CHECK(twolevel::analytic_kerr_correlated(blocks.v12, blocks.h12, off, 5.0e4) ==
              doctest::Approx(std::cos(2.0 * blocks.h12 * 5.0e4)).epsilon(1e-12));
    }
}

TEST_CASE("averaged trajectories approach the closed form inside its validity domain") {
    // weak, short-correlated noise on the asymmetric model, 300 realizations
    const double g = 0.138884, tau = 100.0, eta = 0.05;
    const double delta = spectrum::refine_resonance_two_level(kOverKerr, {5, 0}, g);
    const noise::NoiseChannel channel{eta * g, tau, noise::Target::Amplitude};
    const double q1 = noise::white_noise_intensity(channel);
    const auto rate = twolevel::decay_rate(kOverKerr, {5, 0}, g, delta, q1, 0.0);
    const double omega = std::abs(spectrum::rabi_frequency(kOverKerr, delta, g, {5, 0}));

    const double dt = tau / 20.0;
    const auto n_steps = static_cast<std::size_t>(2.0 * M_PI / omega / dt);
    const std::size_t stride = dynamics::default_stride(n_steps);
    std::vector<double> times;
    for (std::size_t k = 0; k <= n_steps; k += stride)
        times.push_back(static_cast<double>(k) * dt);
    if (n_steps % stride != 0)
        times.push_back(static_cast<double>(n_steps) * dt);

    const auto stats = ensemble::run(
        300, times.size(),
        [&](std::size_t traj, std::vector<double>& out) {
            const auto amp =
                noise::sample_path(channel, dt, n_steps, rng::derive_seed(77, traj, 1));
            out = twolevel::propagate_effective(kOverKerr, {5, 0}, g, delta, &amp, nullptr,
                                                dt, n_steps,
                                                twolevel::EffectiveMode::FullEffective, stride)
                      .inversion;
        },
        2);
    for (std::size_t i = 0; i < stats.mean.size(); ++i) {
        const double closed = twolevel::analytic_overkerr(rate.gamma, omega, times[i]);
        CHECK(std::abs(stats.mean[i] - closed) < 0.05);
    }
}
