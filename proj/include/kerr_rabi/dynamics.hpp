#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/oscillator.hpp"

namespace kerr_rabi::dynamics {

// Truncated bosonic Hilbert space; dimension is cutoff + 1.
struct FockSpace {
    int cutoff = 11;

    int dimension() const { return cutoff + 1; }
    void validate() const {
        if (cutoff < 2)
            throw std::invalid_argument("FockSpace: cutoff must be >= 2");
    }
};

using StateVector = Eigen::VectorXcd;

/// Fock basis state |k>.
StateVector fock_state(const FockSpace& space, int k);

// Piecewise-constant drive over n_steps steps of length dt. Optional noise
// paths (length n_steps, same dt) shift the amplitude and the detuning.
struct DriveSchedule {
    double g0 = 0.0;
    double delta0 = 0.0;
    const noise::NoisePath* amplitude_path = nullptr;
    const noise::NoisePath* frequency_path = nullptr;
    double dt = 1.0;
    std::size_t n_steps = 1;

    bool noisy() const { return amplitude_path != nullptr || frequency_path != nullptr; }
    void validate() const;
};

// Population-inversion record P_{n'} - P_n on times, optionally with the full
// population matrix (one row per recorded time).
struct InversionTrace {
    std::vector<double> times;
    std::vector<double> inversion;
    std::optional<Eigen::MatrixXd> populations;
    double norm_drift = 0.0;
};

/// Real symmetric matrix of the rotating-frame model: diagonal entries
/// -delta*n + (alpha/2) n^2 + kappa n^3, first off-diagonal g sqrt(n+1).
Eigen::MatrixXd build_hamiltonian(const OscillatorParams& params, double g, double delta,
                                  const FockSpace& space);

/// Output stride honouring the default recording rule: every step up to 1000
/// steps apart, and at least ~2000 points per trace when there are enough
/// steps. stride = 0 requests the default.
std::size_t default_stride(std::size_t n_steps);

/// Propagates psi0 through the schedule. Each step applies the exact matrix
/// exponential of the step's (g, delta) Hamiltonian via eigendecomposition
/// (the matrix is tridiagonal in the Fock basis); with both noise channels
/// absent a single eigendecomposition is reused. Throws NormDrift if the
/// state norm deviates by more than 1e-6 and CutoffLeak if the top two Fock
/// levels ever hold more than leak_tolerance population. The default guards
/// against truncation artifacts; noisy runs of the kappa < 0 model occupy the
/// barrier-top levels physically and need a looser setting.
InversionTrace propagate(const DriveSchedule& schedule, const OscillatorParams& params,
                         const FockSpace& space, const StateVector& psi0,
                         const ResonantPair& watch, std::size_t stride = 0,
                         bool record_populations = false, double leak_tolerance = 1e-4);

/// Drive-frame energy expectation <psi|H(g, delta)|psi>; handy for
/// conservation checks on noise-free runs.
double energy_expectation(const OscillatorParams& params, double g, double delta,
                          const FockSpace& space, const StateVector& psi);

} // namespace kerr_rabi::dynamics
