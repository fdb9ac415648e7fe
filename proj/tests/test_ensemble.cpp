#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "kerr_rabi/ensemble.hpp"
#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/rng.hpp"

using namespace kerr_rabi;

namespace {

// cheap stochastic trace: discounted cumulative sums of one noise stream
ensemble::TraceFn make_trace_fn(std::size_t n_points) {
    return [n_points](std::size_t traj, std::vector<double>& out) {
        const noise::NoiseChannel channel{0.5, 20.0, noise::Target::Amplitude};
        const auto path =
            noise::sample_path(channel, 1.0, n_points, rng::derive_seed(404, traj, 1));
        double acc = 0.0;
        for (std::size_t k = 0; k < n_points; ++k) {
            acc = 0.99 * acc + path.values[k];
            out[k] = acc;
        }
    };
}

} // namespace

TEST_CASE("parallel sweep is bit-identical to the serial reference") {
    const std::size_t n_points = 256;
    const auto fn = make_trace_fn(n_points);
    const auto serial = ensemble::run_serial(100, n_points, fn);
    for (int workers : {1, 2, 4}) {
        const auto parallel = ensemble::run(100, n_points, fn, workers);
        CHECK(parallel.mean == serial.mean);
        CHECK(parallel.stderr_of_mean == serial.stderr_of_mean);
    }
}

TEST_CASE("standard error shrinks as one over the square root of N") {
    const std::size_t n_points = 128;
    const auto fn = make_trace_fn(n_points);
    const auto small = ensemble::run(160, n_points, fn, 2);
    const auto large = ensemble::run(640, n_points, fn, 2);
    std::vector<double> ratios;
    for (std::size_t k = 8; k < n_points; ++k)
        ratios.push_back(small.stderr_of_mean[k] / large.stderr_of_mean[k]);
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    const double median = ratios[ratios.size() / 2];
    CHECK(median > 1.6);
    CHECK(median < 2.4);
}

TEST_CASE("reduction edge cases") {
    ensemble::Stats single = ensemble::reduce({{1.0, 2.0, 3.0}});
    CHECK(single.mean == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(single.stderr_of_mean == std::vector<double>{0.0, 0.0, 0.0});
    CHECK_THROWS_AS((void)ensemble::reduce({}), std::invalid_argument);
    CHECK_THROWS_AS((void)ensemble::reduce({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("environment variable caps the worker count") {
    setenv("KERR_RABI_THREADS", "3", 1);
    CHECK(ensemble::resolve_thread_count(0) == 3);
    CHECK(ensemble::resolve_thread_count(5) == 5);  // explicit request wins
    unsetenv("KERR_RABI_THREADS");
    CHECK(ensemble::resolve_thread_count(2) == 2);
}
