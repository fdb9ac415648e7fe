#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kerr_rabi::ensemble {

// Per-point mean and standard error of the mean across realizations. The
// reduction always runs serially in trajectory-index order, so results do not
// depend on the number of workers.
struct Stats {
    std::vector<double> mean;
    std::vector<double> stderr_of_mean;
    std::size_t realizations = 0;
};

/// Trajectory simulator: fills `out` (pre-sized to the shared grid length)
/// for trajectory index `traj`. Must be pure in (traj) and thread-safe.
using TraceFn = std::function<void(std::size_t traj, std::vector<double>& out)>;

/// Number of workers to use: `requested` if positive, otherwise the
/// KERR_RABI_THREADS environment cap, otherwise all hardware threads.
int resolve_thread_count(int requested);

/// OpenMP-parallel trajectory sweep; each trajectory writes its own slot.
std::vector<std::vector<double>> run_trajectories(std::size_t n_traj, std::size_t n_points,
                                                  const TraceFn& fn, int threads = 0);

/// Serial reference implementation of the same sweep, kept for testing and
/// benchmarking against the parallel kernel.
std::vector<std::vector<double>> run_trajectories_serial(std::size_t n_traj,
                                                         std::size_t n_points,
                                                         const TraceFn& fn);

/// Index-ordered reduction to mean and standard error (sample std / sqrt(N);
/// zero for a single realization).
Stats reduce(const std::vector<std::vector<double>>& traces);

Stats run(std::size_t n_traj, std::size_t n_points, const TraceFn& fn, int threads = 0);
Stats run_serial(std::size_t n_traj, std::size_t n_points, const TraceFn& fn);

} // namespace kerr_rabi::ensemble
