#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kerr_rabi/dynamics.hpp"
#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/oscillator.hpp"

namespace kerr_rabi::twolevel {

// Blocks of the noise-linearized two-level model in the (|n'>, |n>) basis:
// the static part h, the amplitude-noise coupling v1, and the diagonal
// frequency-noise coupling v2 = diag(-n', -n).
struct TwoLevelBlocks {
    double h11 = 0.0, h22 = 0.0, h12 = 0.0;
    double v11 = 0.0, v22 = 0.0, v12 = 0.0;
    int n_prime = 0, n = 2;

    double v2_upper() const { return -static_cast<double>(n_prime); }
    double v2_lower() const { return -static_cast<double>(n); }
};

/// Blocks at operating point (g0, delta0):
///   h diagonal  e^(0) + s g0^2, coupling  w g0^m,
///   v1 diagonal 2 s g0,         coupling  w m g0^(m-1),
/// with s the second-order shifts, w the coupling coefficient, m = n - n'.
TwoLevelBlocks build_blocks(const OscillatorParams& params, const ResonantPair& pair,
                            double g0, double delta0);

enum class EffectiveMode {
    FullEffective,  // diagonal e^(0) + s g(t)^2 - xi2(t) * level, coupling w g(t)^m
    Linearized,     // h + xi1(t) v1 + xi2(t) v2
};

/// Two-level stochastic propagation on the same grid rules as the full model;
/// every step applies the exact 2x2 unitary of the step Hamiltonian.
dynamics::InversionTrace propagate_effective(
    const OscillatorParams& params, const ResonantPair& pair, double g0, double delta0,
    const noise::NoisePath* amplitude_path, const noise::NoisePath* frequency_path,
    double dt, std::size_t n_steps, EffectiveMode mode = EffectiveMode::FullEffective,
    std::size_t stride = 0);

// Bloch components of the noise-averaged density matrix
//   rho = 1/2 + rho_x sx + rho_y sy + rho_z sz;
// population inversion equals 2 rho_z.
struct BlochTrace {
    std::vector<double> times;
    std::vector<double> x, y, z;
};

/// White-noise master equation for the linearized blocks, reduced to the
/// three coupled Bloch ODEs and integrated with an adaptive 5(4) Runge-Kutta
/// scheme (relative tolerance 1e-9). Starts from rho_z = 1/2 (system in |n'>)
/// and reports the solution at the requested times (ascending, from 0).
BlochTrace solve_master_equation(const TwoLevelBlocks& blocks, double q1, double q2,
                                 std::span<const double> times);

/// Inversion decay of the decoupled (v12 = 0) model:
///   exp(-gamma t) [cosh(t sqrt(D)) + gamma/sqrt(D) sinh(t sqrt(D))],
/// D = gamma^2 - 4 omega_r^2, with the oscillatory branch used for D < 0 and
/// the sinh(x)/x limit across D = 0.
double analytic_overkerr(double gamma, double omega_r, double t);

struct DecayRate {
    double gamma;
    double discriminant;
};

/// gamma = q1 g0^2 (shift difference at delta0)^2 + q2 (n - n')^2 / 4 and its
/// discriminant gamma^2 - 4 omega_r^2; the shift difference enters exactly,
/// not linearized in kappa.
DecayRate decay_rate(const OscillatorParams& params, const ResonantPair& pair,
                     double g0, double delta0, double q1, double q2);

/// Symmetric-diagonal case (v11 = v22) under white amplitude noise:
///   exp(-2 q1 v12^2 t) cos(2 h12 t).
double analytic_kerr_white(double v12, double h12, double q1, double t);

/// Same case for exponentially correlated noise of finite correlation time:
///   exp(-2 v12^2 * 2 sigma^2 tau [t - tau (1 - e^(-t/tau))]) cos(2 h12 t).
double analytic_kerr_correlated(double v12, double h12, const noise::NoiseChannel& channel,
                                double t);

} // namespace kerr_rabi::twolevel
