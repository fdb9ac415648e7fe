#include "kerr_rabi/twolevel.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/ode.hpp"
#include "kerr_rabi/spectrum.hpp"

namespace kerr_rabi::twolevel {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

// Exact 2x2 unitary step exp(-i H dt) applied to (c1, c2) for the real
// symmetric H = [[a, b], [b, c]].
void apply_step(double a, double b, double c, double dt, std::complex<double>& c1,
                std::complex<double>& c2) {
    const double mean = 0.5 * (a + c);
    const double hz = 0.5 * (a - c);
    const double omega = std::hypot(hz, b);
    const double theta = omega * dt;
    const double cos_t = std::cos(theta);
    // sin(theta)/omega with a stable small-omega limit
    const double sinc = omega > 1e-300 ? std::sin(theta) / omega
                                       : dt * (1.0 - theta * theta / 6.0);
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -mean * dt));
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> u11 = phase * (cos_t - i * sinc * hz);
    const std::complex<double> u22 = phase * (cos_t + i * sinc * hz);
    const std::complex<double> u12 = phase * (-i * sinc * b);
    const std::complex<double> d1 = u11 * c1 + u12 * c2;
    const std::complex<double> d2 = u12 * c1 + u22 * c2;
    c1 = d1;
    c2 = d2;
}

} // namespace

TwoLevelBlocks build_blocks(const OscillatorParams& params, const ResonantPair& pair,
                            double g0, double delta0) {
    pair.validate();
    const double s_low = spectrum::second_order_shift(params, delta0, pair.n_prime);
    const double s_high = spectrum::second_order_shift(params, delta0, pair.n);
    const double coeff = spectrum::rabi_coefficient(params, delta0, pair);
    const int m = pair.quanta();

    TwoLevelBlocks blocks;
    blocks.n_prime = pair.n_prime;
    blocks.n = pair.n;
    blocks.h11 = spectrum::bare_quasienergy(params, delta0, pair.n_prime) + s_low * g0 * g0;
    blocks.h22 = spectrum::bare_quasienergy(params, delta0, pair.n) + s_high * g0 * g0;
    blocks.h12 = coeff * ipow(g0, m);
    blocks.v11 = 2.0 * s_low * g0;
    blocks.v22 = 2.0 * s_high * g0;
    blocks.v12 = coeff * static_cast<double>(m) * ipow(g0, m - 1);
    return blocks;
}

dynamics::InversionTrace propagate_effective(
    const OscillatorParams& params, const ResonantPair& pair, double g0, double delta0,
    const noise::NoisePath* amplitude_path, const noise::NoisePath* frequency_path,
    double dt, std::size_t n_steps, EffectiveMode mode, std::size_t stride) {
    pair.validate();
    if (!(dt > 0.0))
        throw InvalidStep("propagate_effective: dt must be positive");
    if (n_steps < 1)
        throw std::invalid_argument("propagate_effective: n_steps must be >= 1");
    for (const noise::NoisePath* path : {amplitude_path, frequency_path})
        if (path != nullptr && (path->values.size() != n_steps || path->dt != dt))
            throw std::invalid_argument("propagate_effective: noise path mismatch");

    const double e_low = spectrum::bare_quasienergy(params, delta0, pair.n_prime);
    const double e_high = spectrum::bare_quasienergy(params, delta0, pair.n);
    const double s_low = spectrum::second_order_shift(params, delta0, pair.n_prime);
    const double s_high = spectrum::second_order_shift(params, delta0, pair.n);
    const double coeff = spectrum::rabi_coefficient(params, delta0, pair);
    const int m = pair.quanta();
    const TwoLevelBlocks blocks = build_blocks(params, pair, g0, delta0);

    if (stride == 0)
        stride = dynamics::default_stride(n_steps);

    dynamics::InversionTrace trace;
    std::complex<double> c1(1.0, 0.0), c2(0.0, 0.0);  // starts in |n'>
    const auto record = [&](std::size_t step) {
        trace.times.push_back(static_cast<double>(step) * dt);
        trace.inversion.push_back(std::norm(c1) - std::norm(c2));
    };

    record(0);
    double max_drift = 0.0;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double xi1 = amplitude_path != nullptr ? amplitude_path->values[step] : 0.0;
        const double xi2 = frequency_path != nullptr ? frequency_path->values[step] : 0.0;
        double a, b, c;
        if (mode == EffectiveMode::FullEffective) {
            const double g = g0 + xi1;
            a = e_low + s_low * g * g - xi2 * static_cast<double>(pair.n_prime);
            c = e_high + s_high * g * g - xi2 * static_cast<double>(pair.n);
            b = coeff * ipow(g, m);
        } else {
            a = blocks.h11 + xi1 * blocks.v11 + xi2 * blocks.v2_upper();
            c = blocks.h22 + xi1 * blocks.v22 + xi2 * blocks.v2_lower();
            b = blocks.h12 + xi1 * blocks.v12;
        }
        apply_step(a, b, c, dt, c1, c2);

        const double drift = std::abs(std::sqrt(std::norm(c1) + std::norm(c2)) - 1.0);
        max_drift = std::max(max_drift, drift);
        if (drift > 1e-6)
            throw NormDrift("two-level state norm drifted beyond 1e-6");
        if ((step + 1) % stride == 0 || step + 1 == n_steps)
            record(step + 1);
    }
    trace.norm_drift = max_drift;
    return trace;
}

BlochTrace solve_master_equation(const TwoLevelBlocks& blocks, double q1, double q2,
                                 std::span<const double> times) {
    if (q1 < 0.0 || q2 < 0.0)
        throw std::invalid_argument("solve_master_equation: intensities must be >= 0");
    if (times.empty())
        throw std::invalid_argument("solve_master_equation: empty time grid");

    const double dv = blocks.v11 - blocks.v22;
    const double dn = static_cast<double>(blocks.n - blocks.n_prime);
    const double dh = blocks.h11 - blocks.h22;
    const double gxx = 0.5 * (q1 * dv * dv + q2 * dn * dn);
    const double gyy = 0.5 * (4.0 * q1 * blocks.v12 * blocks.v12 + q1 * dv * dv + q2 * dn * dn);
    const double gzz = 2.0 * q1 * blocks.v12 * blocks.v12;
    const double gxz = q1 * blocks.v12 * dv;

    const auto rhs = [&](double, const std::array<double, 3>& r, std::array<double, 3>& drdt) {
        drdt[0] = -gxx * r[0] - dh * r[1] + gxz * r[2];
        drdt[1] = dh * r[0] - gyy * r[1] - 2.0 * blocks.h12 * r[2];
        drdt[2] = gxz * r[0] + 2.0 * blocks.h12 * r[1] - gzz * r[2];
    };

    BlochTrace trace;
    trace.times.assign(times.begin(), times.end());
    trace.x.reserve(times.size());
    trace.y.reserve(times.size());
    trace.z.reserve(times.size());

    std::array<double, 3> r{0.0, 0.0, 0.5};
    double t = 0.0;
    for (double target : times) {
        if (target < t)
            throw std::invalid_argument("solve_master_equation: times must be ascending");
        if (target > t) {
            ode::integrate_adaptive(rhs, r, t, target, 1e-9, 1e-13);
            t = target;
        }
        trace.x.push_back(r[0]);
        trace.y.push_back(r[1]);
        trace.z.push_back(r[2]);
    }
    return trace;
}

double analytic_overkerr(double gamma, double omega_r, double t) {
    if (gamma < 0.0)
        throw std::invalid_argument("analytic_overkerr: gamma must be >= 0");
    const double disc = gamma * gamma - 4.0 * omega_r * omega_r;
    const double x2 = std::abs(disc) * t * t;
    double body;
    if (x2 < 1e-8) {
        body = 1.0 + gamma * t;  // sinh(x)/x -> 1 across the crossover
    } else if (disc > 0.0) {
        const double x = std::sqrt(disc) * t;
        body = std::cosh(x) + gamma * t * (std::sinh(x) / x);
    } else {
        const double x = std::sqrt(-disc) * t;
        body = std::cos(x) + gamma * t * (std::sin(x) / x);
    }
    return std::exp(-gamma * t) * body;
}

DecayRate decay_rate(const OscillatorParams& params, const ResonantPair& pair,
                     double g0, double delta0, double q1, double q2) {
    pair.validate();
    const double diff = spectrum::shift_difference(params, pair, delta0);
    const double dn = static_cast<double>(pair.quanta());
    const double gamma = q1 * g0 * g0 * diff * diff + 0.25 * q2 * dn * dn;
    const double omega_r = spectrum::rabi_frequency(params, delta0, g0, pair);
    return {gamma, gamma * gamma - 4.0 * omega_r * omega_r};
}

double analytic_kerr_white(double v12, double h12, double q1, double t) {
    if (q1 < 0.0)
        throw std::invalid_argument("analytic_kerr_white: q1 must be >= 0");
    return std::exp(-2.0 * q1 * v12 * v12 * t) * std::cos(2.0 * h12 * t);
}

double analytic_kerr_correlated(double v12, double h12, const noise::NoiseChannel& channel,
                                double t) {
    channel.validate();
    const double tau = channel.tau;
    // Closed double integral of the exponential correlator over [0, t]^2.
    const double integral = 2.0 * channel.sigma * channel.sigma * tau *
                            (t - tau * (1.0 - std::exp(-t / tau)));
    return std::exp(-2.0 * v12 * v12 * integral) * std::cos(2.0 * h12 * t);
}

} // namespace kerr_rabi::twolevel
