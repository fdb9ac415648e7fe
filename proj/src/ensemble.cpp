#include "kerr_rabi/ensemble.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kerr_rabi::ensemble {

int resolve_thread_count(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("KERR_RABI_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0)
            return parsed;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<std::vector<double>> run_trajectories(std::size_t n_traj, std::size_t n_points,
                                                  const TraceFn& fn, int threads) {
    std::vector<std::vector<double>> traces(n_traj, std::vector<double>(n_points, 0.0));
    const int workers = resolve_thread_count(threads);
    (void)workers;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (long long i = 0; i < static_cast<long long>(n_traj); ++i)
        fn(static_cast<std::size_t>(i), traces[static_cast<std::size_t>(i)]);
    return traces;
}

std::vector<std::vector<double>> run_trajectories_serial(std::size_t n_traj,
                                                         std::size_t n_points,
                                                         const TraceFn& fn) {
    std::vector<std::vector<double>> traces(n_traj, std::vector<double>(n_points, 0.0));
    for (std::size_t i = 0; i < n_traj; ++i)
        fn(i, traces[i]);
    return traces;
}

Stats reduce(const std::vector<std::vector<double>>& traces) {
    if (traces.empty())
        throw std::invalid_argument("ensemble::reduce: no trajectories");
    const std::size_t n = traces.size();
    const std::size_t points = traces.front().size();
    for (const auto& trace : traces)
        if (trace.size() != points)
            throw std::invalid_argument("ensemble::reduce: ragged traces");

    Stats stats;
    stats.realizations = n;
    stats.mean.assign(points, 0.0);
    stats.stderr_of_mean.assign(points, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < points; ++k)
            stats.mean[k] += traces[i][k];
    for (std::size_t k = 0; k < points; ++k)
        stats.mean[k] /= static_cast<double>(n);
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < points; ++k) {
                const double d = traces[i][k] - stats.mean[k];
                stats.stderr_of_mean[k] += d * d;
            }
        for (std::size_t k = 0; k < points; ++k)
            stats.stderr_of_mean[k] = std::sqrt(
                stats.stderr_of_mean[k] / (static_cast<double>(n - 1) * static_cast<double>(n)));
    }
    return stats;
}

Stats run(std::size_t n_traj, std::size_t n_points, const TraceFn& fn, int threads) {
    return reduce(run_trajectories(n_traj, n_points, fn, threads));
}

Stats run_serial(std::size_t n_traj, std::size_t n_points, const TraceFn& fn) {
    return reduce(run_trajectories_serial(n_traj, n_points, fn));
}

} // namespace kerr_rabi::ensemble
