#include "kerr_rabi/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "kerr_rabi/dynamics.hpp"
#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/spectrum.hpp"
#include "kerr_rabi/twolevel.hpp"

namespace kerr_rabi::analysis {

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::Underdamped: return "underdamped";
        case Regime::Critical: return "critical";
        case Regime::Overdamped: return "overdamped";
    }
    return "unknown";
}

double applicability_min_tau(const OscillatorParams& params, const ResonantPair& pair,
                             double g0, double eta) {
    pair.validate();
    if (eta < 0.0)
        throw std::invalid_argument("applicability_min_tau: eta must be >= 0");
    if (eta == 0.0)
        return 0.0;
    const double delta = spectrum::resonant_detuning_perturbative(params, pair, g0);
    const double omega_r = std::abs(spectrum::rabi_frequency(params, delta, g0, pair));
    if (!(omega_r > 0.0))
        throw std::invalid_argument("applicability_min_tau: vanishing transition frequency");
    return 4.0 * M_PI * eta * eta * g0 * g0 / (params.alpha * params.alpha * omega_r);
}

EscapeEstimate escape_probability(const OscillatorParams& params, const ResonantPair& pair,
                                  int k, double g0, const noise::NoiseChannel& channel,
                                  double duration, int cutoff) {
    pair.validate();
    channel.validate();
    if (k < 0 || k > cutoff)
        throw std::invalid_argument("escape_probability: level outside the space");
    if (cutoff < pair.n + 4)
        throw std::invalid_argument("escape_probability: cutoff must be >= n + 4");
    if (!(duration > 0.0))
        throw std::invalid_argument("escape_probability: duration must be positive");

    const double delta = spectrum::resonant_detuning_perturbative(params, pair, g0);
    const dynamics::FockSpace space{cutoff};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        dynamics::build_hamiltonian(params, g0, delta, space));
    const Eigen::MatrixXd& vec = solver.eigenvectors();
    const int dim = space.dimension();

    // Dressed states are labelled by their dominant Fock component.
    const auto dressed_index = [&](int fock) {
        Eigen::Index best;
        vec.row(fock).cwiseAbs2().maxCoeff(&best);
        return static_cast<int>(best);
    };
    const int idx_start = dressed_index(pair.n_prime);
    const int idx_target = dressed_index(k);
    if (idx_start == idx_target)
        throw ResonantTarget("target level coincides with the initial dressed state");

    const double gap = solver.eigenvalues()(idx_target) - solver.eigenvalues()(idx_start);
    if (std::abs(gap) < spectrum::kDegeneracyTol * params.alpha)
        throw ResonantTarget("target level is resonant with the initial state");

    // Coupling operator in the Fock basis: a + a' for amplitude noise, a'a
    // for frequency noise.
    Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(dim, dim);
    if (channel.target == noise::Target::Amplitude) {
        for (int i = 0; i + 1 < dim; ++i) {
            const double value = std::sqrt(static_cast<double>(i + 1));
            coupling(i, i + 1) = value;
            coupling(i + 1, i) = value;
        }
    } else {
        for (int i = 0; i < dim; ++i)
            coupling(i, i) = static_cast<double>(i);
    }
    const double element = vec.col(idx_target).dot(coupling * vec.col(idx_start));

    const double q = noise::white_noise_intensity(channel);
    const double probability = q * element * element * duration /
                               (1.0 + gap * gap * channel.tau * channel.tau);
    return {probability, probability <= 0.5};
}

RegimeReport overdamped_ratio(const OscillatorParams& params, const ResonantPair& pair,
                              double g0, double delta0, double eta, double tau,
                              double q2, double safety) {
    pair.validate();
    if (eta < 0.0 || !(tau > 0.0) || q2 < 0.0 || !(safety > 0.0))
        throw std::invalid_argument("overdamped_ratio: invalid noise parameters");

    const double sigma = eta * g0;
    const double q1 = 2.0 * tau * sigma * sigma;
    const twolevel::DecayRate rate = twolevel::decay_rate(params, pair, g0, delta0, q1, q2);
    const double omega_r = std::abs(spectrum::rabi_frequency(params, delta0, g0, pair));

    RegimeReport report;
    report.gamma = rate.gamma;
    report.omega_r = omega_r;
    report.ratio = rate.gamma / (2.0 * omega_r);
    if (std::abs(report.ratio - 1.0) < 1e-3)
        report.regime = Regime::Critical;
    else
        report.regime = report.ratio > 1.0 ? Regime::Overdamped : Regime::Underdamped;
    report.tau_min_applicability = applicability_min_tau(params, pair, g0, eta);
    report.white_noise_valid = tau * omega_r * safety < 1.0;
    return report;
}

namespace {

double bound_base(const OscillatorParams& params, const ResonantPair& pair, double eta,
                  double& coeff_out) {
    pair.validate();
    if (pair.quanta() < 3)
        throw std::invalid_argument("overdamped bounds need n - n' >= 3");
    if (!(eta > 0.0))
        throw std::invalid_argument("overdamped bounds need eta > 0");
    const double delta0 = spectrum::resonant_detuning_bare(params, pair);
    const double diff = spectrum::shift_difference(params, pair, delta0);
    if (std::abs(diff) < 1e-12)
        throw KerrDegenerate("second-order shift difference vanishes; no overdamped window");
    coeff_out = std::abs(spectrum::rabi_coefficient(params, delta0, pair));
    return std::sqrt(2.0 * M_PI) * eta * std::abs(diff);
}

} // namespace

double overdamp_g_upper_bound(const OscillatorParams& params, const ResonantPair& pair,
                              double eta) {
    double coeff = 0.0;
    const double base = bound_base(params, pair, eta, coeff);
    const double exponent = 1.0 / static_cast<double>(pair.quanta() - 2);
    return std::pow(base / coeff, exponent);
}

double rabi_period_lower_bound(const OscillatorParams& params, const ResonantPair& pair,
                               double eta) {
    double coeff = 0.0;
    const double base = bound_base(params, pair, eta, coeff);
    const double exponent = static_cast<double>(pair.quanta()) /
                            static_cast<double>(pair.quanta() - 2);
    return 2.0 * M_PI / coeff * std::pow(coeff / base, exponent);
}

} // namespace kerr_rabi::analysis
