#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kerr_rabi/oscillator.hpp"

namespace kerr_rabi::spectrum {

// Perturbative denominators smaller than this (in units of alpha) mean the
// non-degenerate expansion has broken down at the requested detuning.
inline constexpr double kDegeneracyTol = 1e-6;

/// Zeroth-order quasienergy of Fock level n: -delta*n + (alpha/2) n^2 + kappa n^3.
double bare_quasienergy(const OscillatorParams& params, double delta, int n);

/// Second-order level shift per unit g^2,
///   n/(e_n - e_{n-1}) + (n+1)/(e_n - e_{n+1}),
/// with bare energies taken at the given detuning. For n = 0 only the upper
/// neighbour contributes. Throws DegenerateLevels when a denominator is
/// below kDegeneracyTol * alpha.
double second_order_shift(const OscillatorParams& params, double delta, int n);

/// Exact difference of second-order shifts for the pair, evaluated at delta.
double shift_difference(const OscillatorParams& params, const ResonantPair& pair,
                        double delta);

/// First order in kappa of the shift difference at the bare resonance:
///   4 (n - n') (n + n' + 1) kappa / (alpha^2 ((n - n')^2 - 1)).
double shift_difference_linear(const OscillatorParams& params, const ResonantPair& pair);

/// Drive-independent multi-quantum coupling coefficient
///   sqrt(n!/n'!) * prod_{k=n'+1}^{n-1} (e_n - e_k)^{-1}
/// so that the transition frequency is rabi_coefficient * g^(n-n').
double rabi_coefficient(const OscillatorParams& params, double delta,
                        const ResonantPair& pair);

/// Multi-quantum transition frequency at drive amplitude g.
double rabi_frequency(const OscillatorParams& params, double delta, double g,
                      const ResonantPair& pair);

/// Detuning at which the bare levels of the pair coincide:
///   (alpha/2)(n + n') + kappa (n^2 + n n' + n'^2).
double resonant_detuning_bare(const OscillatorParams& params, const ResonantPair& pair);

/// Second-order-accurate resonant detuning,
///   delta_bare + (shift difference at delta_bare) / (n - n') * g^2.
double resonant_detuning_perturbative(const OscillatorParams& params,
                                      const ResonantPair& pair, double g);

/// Detuning at which the second-order level energies of the pair cross:
/// root of e_n(delta) + s_n(delta) g^2 = e_n'(delta) + s_n'(delta) g^2 inside
/// the bracket delta_bare +- 0.2 alpha, located to 1e-9 or better. Throws
/// NoRoot when the bracket contains no sign change.
double refine_resonance_two_level(const OscillatorParams& params,
                                  const ResonantPair& pair, double g);

// Quasienergy levels versus drive amplitude, continued adiabatically from the
// g = 0 Fock eigenbasis by maximum-overlap tracking.
struct QuasienergyCurve {
    std::vector<double> g_grid;
    Eigen::MatrixXd levels;    // (levels, g points); row i follows Fock level i
    Eigen::MatrixXd overlaps;  // dominant Fock-component weight of each tracked state
};

/// Diagonalizes the drive-coupled Hamiltonian on the ascending g_grid
/// (starting at 0) with the given Fock cutoff. Levels listed in watch_levels
/// are guarded against truncation: CutoffTooSmall is thrown if such a state
/// puts more than 1e-6 weight on the top two Fock levels.
QuasienergyCurve quasienergy_curves(const OscillatorParams& params, double delta,
                                    const std::vector<double>& g_grid, int cutoff,
                                    const std::vector<int>& watch_levels = {});

/// Detuning maximizing the peak population transfer 1 - min_t P_{n'}(t) of the
/// drive-free-noise model over two estimated transition periods, searched
/// inside delta_bare +- 0.2 alpha (golden-section refinement to 1e-6 alpha or
/// better). Throws NoTransfer when the peak transfer stays below 0.5.
double refine_resonance_full(const OscillatorParams& params, const ResonantPair& pair,
                             double g, int cutoff);

} // namespace kerr_rabi::spectrum
