// Benchmark of the parallel trajectory kernel against the serial reference.
// Both paths must produce bit-identical statistics; the parallel one should
// just get there faster.

#include <chrono>
#include <cstdio>
#include <string>

#include "kerr_rabi/config.hpp"
#include "kerr_rabi/ensemble.hpp"
#include "kerr_rabi/experiment.hpp"
#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/rng.hpp"
#include "kerr_rabi/twolevel.hpp"

namespace kr = kerr_rabi;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    int row = 6;
    std::size_t realizations = 400;
    int threads = 0;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--row") row = std::stoi(argv[i + 1]);
        else if (key == "--realizations") realizations = std::stoul(argv[i + 1]);
        else if (key == "--threads") threads = std::stoi(argv[i + 1]);
        else {
            std::fprintf(stderr, "usage: bench_ensemble [--row R] [--realizations N] [--threads T]\n");
            return 1;
        }
    }

    const auto cfg = kr::experiment::preset_table1(row);
    const double dt = cfg.amplitude_noise->tau / 20.0;
    const auto n_steps = static_cast<std::size_t>(cfg.t_end / dt);
    const std::size_t stride = kr::dynamics::default_stride(n_steps);
    const std::size_t n_points = n_steps / stride + 1 + (n_steps % stride != 0 ? 1 : 0);

    const auto simulate = [&](std::size_t traj, std::vector<double>& out) {
        const auto amp = kr::noise::sample_path(
            *cfg.amplitude_noise, dt, n_steps,
            kr::rng::derive_seed(cfg.master_seed, traj,
                                 kr::noise::channel_index(kr::noise::Target::Amplitude)));
        const auto trace = kr::twolevel::propagate_effective(
            cfg.oscillator, cfg.pair, cfg.g0, *cfg.delta0, &amp, nullptr, dt, n_steps,
            kr::twolevel::EffectiveMode::FullEffective, stride);
        out = trace.inversion;
    };

    std::printf("two-level ensemble, preset row %d, %zu realizations, %zu steps\n", row,
                realizations, n_steps);

    auto start = std::chrono::steady_clock::now();
    const auto serial = kr::ensemble::run_serial(realizations, n_points, simulate);
    const double t_serial = seconds_since(start);

    const int workers = kr::ensemble::resolve_thread_count(threads);
    start = std::chrono::steady_clock::now();
    const auto parallel = kr::ensemble::run(realizations, n_points, simulate, workers);
    const double t_parallel = seconds_since(start);

    bool identical = serial.mean == parallel.mean &&
                     serial.stderr_of_mean == parallel.stderr_of_mean;
    std::printf("serial:   %8.3f s\n", t_serial);
    std::printf("parallel: %8.3f s  (%d workers, speedup %.2fx)\n", t_parallel, workers,
                t_serial / t_parallel);
    std::printf("bit-identical statistics: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
