#include "kerr_rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "kerr_rabi/dynamics.hpp"
#include "kerr_rabi/errors.hpp"

namespace kerr_rabi::spectrum {

namespace {

double checked_denominator(double value, double alpha, int n, int m) {
    if (std::abs(value) < kDegeneracyTol * alpha)
        throw DegenerateLevels("levels " + std::to_string(n) + " and " + std::to_string(m) +
                               " are degenerate at this detuning");
    return value;
}

// Brent root finder, absolute tolerance on the abscissa.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb, double xtol) {
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double mid = 0.5 * (c - b);
        if (std::abs(mid) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * mid * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * mid * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * mid * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = mid;
                e = d;
            }
        } else {
            d = mid;
            e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (mid > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
    }
    return b;
}

} // namespace

double bare_quasienergy(const OscillatorParams& params, double delta, int n) {
    if (n < 0)
        throw std::invalid_argument("bare_quasienergy: n must be >= 0");
    const double nd = static_cast<double>(n);
    return -delta * nd + 0.5 * params.alpha * nd * nd + params.kappa * nd * nd * nd;
}

double second_order_shift(const OscillatorParams& params, double delta, int n) {
    if (n < 0)
        throw std::invalid_argument("second_order_shift: n must be >= 0");
    const double en = bare_quasienergy(params, delta, n);
    double shift = 0.0;
    if (n > 0) {
        const double d = checked_denominator(en - bare_quasienergy(params, delta, n - 1),
                                             params.alpha, n, n - 1);
        shift += static_cast<double>(n) / d;
    }
    const double d = checked_denominator(en - bare_quasienergy(params, delta, n + 1),
                                         params.alpha, n, n + 1);
    shift += static_cast<double>(n + 1) / d;
    return shift;
}

double shift_difference(const OscillatorParams& params, const ResonantPair& pair,
                        double delta) {
    return second_order_shift(params, delta, pair.n) -
           second_order_shift(params, delta, pair.n_prime);
}

double shift_difference_linear(const OscillatorParams& params, const ResonantPair& pair) {
    pair.validate();
    const double m = static_cast<double>(pair.quanta());
    const double s = static_cast<double>(pair.n + pair.n_prime + 1);
    return 4.0 * m * s * params.kappa / (params.alpha * params.alpha * (m * m - 1.0));
}

double rabi_coefficient(const OscillatorParams& params, double delta,
                        const ResonantPair& pair) {
    pair.validate();
    double ratio = 1.0;  // n!/n'! as an integer product; n stays small here
    for (int k = pair.n_prime + 1; k <= pair.n; ++k)
        ratio *= static_cast<double>(k);
    double coeff = std::sqrt(ratio);
    const double en = bare_quasienergy(params, delta, pair.n);
    for (int k = pair.n_prime + 1; k < pair.n; ++k) {
        const double d = checked_denominator(en - bare_quasienergy(params, delta, k),
                                             params.alpha, pair.n, k);
        coeff /= d;
    }
    return coeff;
}

double rabi_frequency(const OscillatorParams& params, double delta, double g,
                      const ResonantPair& pair) {
    double gm = 1.0;
    for (int k = 0; k < pair.quanta(); ++k)
        gm *= g;
    return rabi_coefficient(params, delta, pair) * gm;
}

double resonant_detuning_bare(const OscillatorParams& params, const ResonantPair& pair) {
    pair.validate();
    const double n = static_cast<double>(pair.n);
    const double np = static_cast<double>(pair.n_prime);
    return 0.5 * params.alpha * (n + np) + params.kappa * (n * n + n * np + np * np);
}

double resonant_detuning_perturbative(const OscillatorParams& params,
                                      const ResonantPair& pair, double g) {
    const double delta0 = resonant_detuning_bare(params, pair);
    const double diff = shift_difference(params, pair, delta0);
    return delta0 + diff / static_cast<double>(pair.quanta()) * g * g;
}

double refine_resonance_two_level(const OscillatorParams& params,
                                  const ResonantPair& pair, double g) {
    const double delta0 = resonant_detuning_bare(params, pair);
    const auto energy_gap = [&](double delta) {
        return bare_quasienergy(params, delta, pair.n) -
               bare_quasienergy(params, delta, pair.n_prime) +
               g * g * shift_difference(params, pair, delta);
    };
    const double a = delta0 - 0.2 * params.alpha;
    const double b = delta0 + 0.2 * params.alpha;
    const double fa = energy_gap(a);
    const double fb = energy_gap(b);
    if ((fa > 0.0) == (fb > 0.0))
        throw NoRoot("no level crossing inside the bracket around the bare resonance");
    return brent(energy_gap, a, b, fa, fb, 1e-12);
}

QuasienergyCurve quasienergy_curves(const OscillatorParams& params, double delta,
                                    const std::vector<double>& g_grid, int cutoff,
                                    const std::vector<int>& watch_levels) {
    if (g_grid.empty() || g_grid.front() != 0.0)
        throw std::invalid_argument("quasienergy_curves: g_grid must start at 0");
    if (!std::is_sorted(g_grid.begin(), g_grid.end()))
        throw std::invalid_argument("quasienergy_curves: g_grid must be ascending");
    for (int w : watch_levels)
        if (cutoff < w + 4)
            throw std::invalid_argument("quasienergy_curves: cutoff must be >= level + 4");

    const int dim = cutoff + 1;
    const std::size_t np = g_grid.size();
    QuasienergyCurve curve;
    curve.g_grid = g_grid;
    curve.levels.resize(dim, static_cast<Eigen::Index>(np));
    curve.overlaps.resize(dim, static_cast<Eigen::Index>(np));

    Eigen::MatrixXd previous = Eigen::MatrixXd::Identity(dim, dim);  // Fock basis at g = 0
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dim);
    const dynamics::FockSpace space{cutoff};

    for (std::size_t ig = 0; ig < np; ++ig) {
        solver.compute(dynamics::build_hamiltonian(params, g_grid[ig], delta, space));
        const Eigen::MatrixXd& vec = solver.eigenvectors();
        const Eigen::VectorXd& val = solver.eigenvalues();

        // Assign eigenvectors to tracked levels by largest overlap with the
        // previous grid point, greedily from the strongest match down; ties
        // fall through to eigenvalue proximity via the ordering of candidates.
        Eigen::MatrixXd overlap = (previous.transpose() * vec).cwiseAbs();
        std::vector<int> assignment(dim, -1);
        std::vector<bool> taken(dim, false);
        for (int pass = 0; pass < dim; ++pass) {
            int best_level = -1, best_col = -1;
            double best = -1.0;
            for (int lvl = 0; lvl < dim; ++lvl) {
                if (assignment[lvl] >= 0) continue;
                for (int col = 0; col < dim; ++col) {
                    if (taken[col]) continue;
                    if (overlap(lvl, col) > best) {
                        best = overlap(lvl, col);
                        best_level = lvl;
                        best_col = col;
                    }
                }
            }
            assignment[best_level] = best_col;
            taken[best_col] = true;
        }

        Eigen::MatrixXd tracked(dim, dim);
        for (int lvl = 0; lvl < dim; ++lvl) {
            const int col = assignment[lvl];
            Eigen::VectorXd v = vec.col(col);
            if (previous.col(lvl).dot(v) < 0.0)
                v = -v;  // keep a continuous sign convention along the curve
            tracked.col(lvl) = v;
            curve.levels(lvl, static_cast<Eigen::Index>(ig)) = val(col);
            Eigen::Index dominant;
            v.cwiseAbs2().maxCoeff(&dominant);
            curve.overlaps(lvl, static_cast<Eigen::Index>(ig)) = v(dominant) * v(dominant);
            const double top_weight = v(dim - 1) * v(dim - 1) + v(dim - 2) * v(dim - 2);
            if (top_weight > 1e-6 &&
                std::find(watch_levels.begin(), watch_levels.end(), lvl) != watch_levels.end())
                throw CutoffTooSmall("tracked level " + std::to_string(lvl) +
                                     " leaks onto the top Fock levels; raise the cutoff");
        }
        previous = tracked;
    }
    return curve;
}

namespace {

// Peak population transfer out of |n'> over a fixed time window, from the
// spectral decomposition of the static Hamiltonian:
//   P_{n'}(t) = | sum_m w_m exp(-i e_m t) |^2,  w_m = |<n'|m>|^2.
double peak_transfer(const OscillatorParams& params, const ResonantPair& pair,
                     double g, double delta, int cutoff, double t_window,
                     Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& solver) {
    const dynamics::FockSpace space{cutoff};
    solver.compute(dynamics::build_hamiltonian(params, g, delta, space));
    const Eigen::VectorXd w = solver.eigenvectors().row(pair.n_prime).cwiseAbs2();
    const Eigen::VectorXd& e = solver.eigenvalues();

    constexpr int kTimePoints = 2048;
    double min_population = 1.0;
    for (int it = 1; it <= kTimePoints; ++it) {
        const double t = t_window * static_cast<double>(it) / kTimePoints;
        std::complex<double> amp(0.0, 0.0);
        for (int m = 0; m < e.size(); ++m)
            amp += w(m) * std::exp(std::complex<double>(0.0, -e(m) * t));
        min_population = std::min(min_population, std::norm(amp));
    }
    return 1.0 - min_population;
}

} // namespace

double refine_resonance_full(const OscillatorParams& params, const ResonantPair& pair,
                             double g, int cutoff) {
    pair.validate();
    if (cutoff < pair.n + 4)
        throw std::invalid_argument("refine_resonance_full: cutoff must be >= n + 4");

    const double delta0 = resonant_detuning_bare(params, pair);
    const double delta_guess = resonant_detuning_perturbative(params, pair, g);
    const double omega_r = std::abs(rabi_frequency(params, delta_guess, g, pair));
    if (!(omega_r > 0.0))
        throw NoTransfer("vanishing transition frequency at this drive amplitude");
    const double t_window = 2.0 * (2.0 * M_PI / omega_r) / 2.0;  // two inversion periods

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cutoff + 1);
    const auto transfer = [&](double delta) {
        return peak_transfer(params, pair, g, delta, cutoff, t_window, solver);
    };

    // The transfer peak is only a few line widths wide, so scan a window
    // around the perturbative resonance before refining. The window stays
    // inside the bracket delta0 +- 0.2 alpha.
    const double line_width = 2.0 * omega_r / static_cast<double>(pair.quanta());
    double half_width = std::clamp(200.0 * line_width, 1e-3, 0.05) * params.alpha;
    const double lo = std::max(delta_guess - half_width, delta0 - 0.2 * params.alpha);
    const double hi = std::min(delta_guess + half_width, delta0 + 0.2 * params.alpha);

    constexpr int kScanPoints = 600;
    double best_delta = delta_guess;
    double best_value = -1.0;
    for (int i = 0; i <= kScanPoints; ++i) {
        const double delta = lo + (hi - lo) * static_cast<double>(i) / kScanPoints;
        const double value = transfer(delta);
        if (value > best_value) {
            best_value = value;
            best_delta = delta;
        }
    }
    if (best_value < 0.5)
        throw NoTransfer("peak transfer below 0.5 across the search bracket");

    // Golden-section refinement inside one scan cell on each side.
    const double step = (hi - lo) / kScanPoints;
    double a = std::max(best_delta - step, lo);
    double b = std::min(best_delta + step, hi);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = transfer(x1);
    double f2 = transfer(x2);
    while (b - a > 1e-7) {
        if (f1 < f2) {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = transfer(x2);
        } else {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = transfer(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace kerr_rabi::spectrum
