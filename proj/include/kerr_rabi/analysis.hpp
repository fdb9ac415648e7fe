#pragma once

#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/oscillator.hpp"

namespace kerr_rabi::analysis {

enum class Regime { Underdamped, Critical, Overdamped };

const char* regime_name(Regime regime);

struct RegimeReport {
    double gamma = 0.0;
    double omega_r = 0.0;
    double ratio = 0.0;  // gamma / (2 omega_r)
    Regime regime = Regime::Underdamped;
    double tau_min_applicability = 0.0;
    bool white_noise_valid = false;  // tau * omega_r below 1 by the safety factor
};

/// Smallest correlation time for which the two-level reduction is justified:
///   4 pi eta^2 g0^2 / (alpha^2 omega_r),
/// with omega_r taken at the second-order resonant detuning for this g0.
double applicability_min_tau(const OscillatorParams& params, const ResonantPair& pair,
                             double g0, double eta);

struct EscapeEstimate {
    double probability = 0.0;
    bool perturbative_valid = true;  // false once the estimate exceeds 0.5
};

/// First-order probability of noise-driven escape from |n'> to the
/// non-resonant dressed level k over the given duration:
///   Q |V_{k,n'}|^2 T / (1 + (e_k - e_n')^2 tau^2),
/// with the matrix element of a + a' (amplitude) or a'a (frequency) taken
/// between eigenstates of the g0-dressed Hamiltonian at the second-order
/// resonance. Throws ResonantTarget if level k is resonant with n'.
EscapeEstimate escape_probability(const OscillatorParams& params, const ResonantPair& pair,
                                  int k, double g0, const noise::NoiseChannel& channel,
                                  double duration, int cutoff);

/// Damping classification at relative amplitude-noise level eta = sigma/g0 and
/// correlation time tau; an optional frequency-noise intensity q2 adds to the
/// rate. The safety factor operationalizes the "much smaller" in the
/// white-noise window tau << 1/omega_r.
RegimeReport overdamped_ratio(const OscillatorParams& params, const ResonantPair& pair,
                              double g0, double delta0, double eta, double tau,
                              double q2 = 0.0, double safety = 5.0);

/// Largest drive amplitude for which the overdamped regime is reachable
/// within the white-noise window:
///   (sqrt(2 pi) eta |shift difference| / coupling coefficient)^(1/(n-n'-2)),
/// everything evaluated at the bare resonance. Requires n - n' >= 3; throws
/// KerrDegenerate when the shift difference vanishes.
double overdamp_g_upper_bound(const OscillatorParams& params, const ResonantPair& pair,
                              double eta);

/// Matching lower bound on the oscillation period:
///   (2 pi / w) * (w / (sqrt(2 pi) eta |shift difference|))^((n-n')/(n-n'-2)),
/// with w the coupling coefficient at the bare resonance.
double rabi_period_lower_bound(const OscillatorParams& params, const ResonantPair& pair,
                               double eta);

} // namespace kerr_rabi::analysis
