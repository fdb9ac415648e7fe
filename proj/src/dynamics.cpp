#include "kerr_rabi/dynamics.hpp"

#include <cmath>
#include <complex>

#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/spectrum.hpp"

namespace kerr_rabi::dynamics {

StateVector fock_state(const FockSpace& space, int k) {
    space.validate();
    if (k < 0 || k > space.cutoff)
        throw std::invalid_argument("fock_state: level outside the truncated space");
    StateVector psi = StateVector::Zero(space.dimension());
    psi(k) = 1.0;
    return psi;
}

void DriveSchedule::validate() const {
    if (!(dt > 0.0))
        throw InvalidStep("DriveSchedule: dt must be positive");
    if (n_steps < 1)
        throw std::invalid_argument("DriveSchedule: n_steps must be >= 1");
    for (const noise::NoisePath* path : {amplitude_path, frequency_path}) {
        if (path == nullptr)
            continue;
        if (path->values.size() != n_steps)
            throw std::invalid_argument("DriveSchedule: noise path length mismatch");
        if (path->dt != dt)
            throw std::invalid_argument("DriveSchedule: noise path dt mismatch");
    }
}

Eigen::MatrixXd build_hamiltonian(const OscillatorParams& params, double g, double delta,
                                  const FockSpace& space) {
    space.validate();
    if (!std::isfinite(g) || !std::isfinite(delta))
        throw std::invalid_argument("build_hamiltonian: g and delta must be finite");
    const int dim = space.dimension();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        h(n, n) = spectrum::bare_quasienergy(params, delta, n);
    for (int n = 0; n + 1 < dim; ++n) {
        const double coupling = g * std::sqrt(static_cast<double>(n + 1));
        h(n, n + 1) = coupling;
        h(n + 1, n) = coupling;
    }
    return h;
}

std::size_t default_stride(std::size_t n_steps) {
    const std::size_t by_points = n_steps / 2000;
    std::size_t stride = std::min<std::size_t>(1000, by_points);
    return std::max<std::size_t>(1, stride);
}

InversionTrace propagate(const DriveSchedule& schedule, const OscillatorParams& params,
                         const FockSpace& space, const StateVector& psi0,
                         const ResonantPair& watch, std::size_t stride,
                         bool record_populations, double leak_tolerance) {
    schedule.validate();
    space.validate();
    watch.validate();
    if (watch.n > space.cutoff)
        throw std::invalid_argument("propagate: watched level outside the space");
    if (psi0.size() != space.dimension())
        throw std::invalid_argument("propagate: state dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("propagate: initial state is not normalized");

    if (stride == 0)
        stride = default_stride(schedule.n_steps);
    const int dim = space.dimension();
    const std::size_t n_records = schedule.n_steps / stride + 1 +
                                  (schedule.n_steps % stride != 0 ? 1 : 0);

    InversionTrace trace;
    trace.times.reserve(n_records);
    trace.inversion.reserve(n_records);
    if (record_populations)
        trace.populations.emplace(Eigen::MatrixXd(n_records, dim));

    StateVector psi = psi0;
    Eigen::VectorXcd work(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dim);
    // The Fock-basis matrix is tridiagonal: bare energies on the diagonal,
    // g sqrt(n+1) on the first off-diagonal.
    Eigen::VectorXd diag(dim), subdiag(dim - 1), couplings(dim - 1);
    for (int n = 0; n < dim; ++n)
        diag(n) = spectrum::bare_quasienergy(params, 0.0, n);
    for (int n = 0; n + 1 < dim; ++n)
        couplings(n) = std::sqrt(static_cast<double>(n + 1));
    const auto decompose = [&](double g, double delta) {
        Eigen::VectorXd shifted = diag;
        for (int n = 1; n < dim; ++n)
            shifted(n) -= delta * static_cast<double>(n);
        subdiag = g * couplings;
        solver.computeFromTridiagonal(shifted, subdiag, Eigen::ComputeEigenvectors);
    };
    const bool noisy = schedule.noisy();
    if (!noisy)
        decompose(schedule.g0, schedule.delta0);

    double max_drift = 0.0;
    std::size_t row = 0;
    const auto record = [&](std::size_t step) {
        trace.times.push_back(static_cast<double>(step) * schedule.dt);
        double pn = std::norm(psi(watch.n));
        double pnp = std::norm(psi(watch.n_prime));
        trace.inversion.push_back(pnp - pn);
        if (record_populations) {
            for (int k = 0; k < dim; ++k)
                (*trace.populations)(static_cast<Eigen::Index>(row), k) = std::norm(psi(k));
        }
        ++row;
    };

    record(0);
    for (std::size_t step = 0; step < schedule.n_steps; ++step) {
        if (noisy) {
            const double g = schedule.g0 + (schedule.amplitude_path != nullptr
                                                ? schedule.amplitude_path->values[step]
                                                : 0.0);
            const double delta = schedule.delta0 + (schedule.frequency_path != nullptr
                                                        ? schedule.frequency_path->values[step]
                                                        : 0.0);
            decompose(g, delta);
        }
        work.noalias() = solver.eigenvectors().transpose() * psi;
        for (int k = 0; k < dim; ++k)
            work(k) *= std::exp(std::complex<double>(0.0, -solver.eigenvalues()(k) * schedule.dt));
        psi.noalias() = solver.eigenvectors() * work;

        const double leak = std::norm(psi(dim - 1)) + std::norm(psi(dim - 2));
        if (leak > leak_tolerance)
            throw CutoffLeak("top Fock levels exceed the leak tolerance; raise the cutoff");
        const double drift = std::abs(psi.norm() - 1.0);
        max_drift = std::max(max_drift, drift);
        if (drift > 1e-6)
            throw NormDrift("state norm drifted beyond 1e-6");

        if ((step + 1) % stride == 0 || step + 1 == schedule.n_steps)
            record(step + 1);
    }
    if (record_populations)
        trace.populations->conservativeResize(static_cast<Eigen::Index>(row), dim);
    trace.norm_drift = max_drift;
    return trace;
}

double energy_expectation(const OscillatorParams& params, double g, double delta,
                          const FockSpace& space, const StateVector& psi) {
    const Eigen::MatrixXd h = build_hamiltonian(params, g, delta, space);
    const std::complex<double> value = psi.dot(h * psi);
    return value.real();
}

} // namespace kerr_rabi::dynamics
