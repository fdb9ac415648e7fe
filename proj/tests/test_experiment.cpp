#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kerr_rabi/experiment.hpp"

using namespace kerr_rabi;

namespace {

config::ExperimentConfig quick_config(std::set<config::Model> models,
                                      std::size_t realizations) {
    auto cfg = experiment::preset_table1(2);  // 3 <-> 0, tau = 2000: few steps
    cfg.models = std::move(models);
    cfg.realizations = realizations;
    return cfg;
}

} // namespace

TEST_CASE("presets carry the tabulated operating points") {
    const auto row5 = experiment::preset_table1(5);
    CHECK(row5.g0 == 0.202931);
    CHECK(row5.amplitude_noise->tau == 1000.0);
    CHECK(row5.amplitude_noise->sigma == doctest::Approx(0.0202931).epsilon(1e-12));
    CHECK(*row5.delta0 == 2.5);
    CHECK(row5.cutoff == 11);
    CHECK(row5.t_end == doctest::Approx(6.0e4).epsilon(0.02));  // two periods
    CHECK(row5.realizations == 1000);

    const auto row7 = experiment::preset_table1(7);
    CHECK(row7.oscillator.kappa == 0.025);
    CHECK(*row7.delta0 == 3.125676);

    const auto row1 = experiment::preset_table1(1);
    CHECK(row1.oscillator.kappa == 0.0);
    CHECK(experiment::preset_rows()[0].ratio_reference == 0.0);

    CHECK_THROWS_AS((void)experiment::preset_table1(0), ConfigError);
    CHECK_THROWS_AS((void)experiment::preset_table1(8), ConfigError);
}

TEST_CASE("single deterministic run: mean equals the trace, zero error bars") {
    auto cfg = quick_config({config::Model::Full, config::Model::Effective}, 1);
    cfg.amplitude_noise.reset();  // no noise channels at all
    const auto result = experiment::run_experiment(cfg, 2);
    REQUIRE(result.full.has_value());
    REQUIRE(result.effective.has_value());
    CHECK(result.full->realizations == 1);
    for (double se : result.full->stderr_of_mean)
        CHECK(se == 0.0);
    CHECK(result.full->mean.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.times.size() >= 500);
    CHECK(result.times.front() == 0.0);
    CHECK(result.times.back() >= cfg.t_end);
}

TEST_CASE("result CSV columns follow the requested models") {
    auto cfg = quick_config({config::Model::Master, config::Model::Analytic}, 1);
    const auto result = experiment::run_experiment(cfg, 1);
    const auto csv = experiment::result_csv(result);
    const auto header = csv.substr(0, csv.find('\n'));
    CHECK(header == "t,mean_master,mean_analytic");
    CHECK_FALSE(result.full.has_value());
    CHECK(result.master.has_value());
    CHECK(result.analytic.has_value());
    CHECK((*result.master)[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("manifest round-trips to a byte-identical result") {
    namespace fs = std::filesystem;
    const fs::path dir_a = fs::temp_directory_path() / "kerr_rabi_test_a";
    const fs::path dir_b = fs::temp_directory_path() / "kerr_rabi_test_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    auto cfg = quick_config({config::Model::Effective, config::Model::Analytic}, 6);
    cfg.master_seed = 7;
    cfg.output_dir = dir_a.string();
    (void)experiment::run_and_write(cfg, 2);

    auto rerun = config::parse_file((dir_a / "manifest").string());
    rerun.output_dir = dir_b.string();
    (void)experiment::run_and_write(rerun, 1);

    const auto slurp = [](const fs::path& path) {
        std::ifstream file(path, std::ios::binary);
        std::stringstream buffer;
        buffer << file.rdbuf();
        return buffer.str();
    };
    CHECK(slurp(dir_a / "result.csv") == slurp(dir_b / "result.csv"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("worker count does not change the result") {
    auto cfg = quick_config({config::Model::Full, config::Model::Effective}, 8);
    cfg.master_seed = 11;
    const auto one = experiment::run_experiment(cfg, 1);
    const auto two = experiment::run_experiment(cfg, 2);
    CHECK(experiment::result_csv(one) == experiment::result_csv(two));
}

TEST_CASE("trace and noise dumps have the documented shapes") {
    dynamics::InversionTrace trace;
    trace.times = {0.0, 1.5};
    trace.inversion = {1.0, -0.25};
    trace.populations.emplace(Eigen::MatrixXd{{1.0, 0.0}, {0.75, 0.25}});
    const auto csv = experiment::trace_csv(trace);
    CHECK(csv == "t,inversion,P0,P1\n0,1,1,0\n1.5,-0.25,0.75,0.25\n");

    noise::NoisePath a{2.0, {0.5, -0.5}, 1};
    noise::NoisePath b{2.0, {0.0, 1.0}, 2};
    CHECK(experiment::noise_csv(a, b) == "t,xi1,xi2\n0,0.5,0\n2,-0.5,1\n");
}

TEST_CASE("level scan places the resonant pair at equal quasienergy") {
    const auto csv = experiment::scan_levels_csv({1.0, -0.025}, 1.8750, 8);
    std::stringstream stream(csv);
    std::string line;
    std::getline(stream, line);
    CHECK(line == "n,quasienergy");
    std::string level0, level5;
    while (std::getline(stream, line)) {
        if (line.rfind("0,", 0) == 0) level0 = line.substr(2);
        if (line.rfind("5,", 0) == 0) level5 = line.substr(2);
    }
    CHECK(level0 == "0");
    CHECK(level5 == "0");  // five-quantum resonance: equal quasienergies
}

TEST_CASE("audit covers all rows with the expected damping pattern") {
    const auto rows = experiment::audit_table1();
    REQUIRE(rows.size() == 7);
    CHECK(std::abs(rows[0].report.ratio) <= 1e-12);
    CHECK(std::abs(rows[2].report.ratio) <= 1e-12);
    CHECK(std::abs(rows[4].report.ratio) <= 1e-12);
    CHECK(rows[1].report.ratio == doctest::Approx(0.0155).epsilon(0.01));
    CHECK(rows[3].report.ratio == doctest::Approx(1.131).epsilon(0.001));
    CHECK(rows[5].report.ratio == doctest::Approx(1.371).epsilon(0.001));
    CHECK(rows[6].report.ratio == doctest::Approx(1.095).epsilon(0.001));
    const auto csv = experiment::audit_table1_csv();
    CHECK(csv.substr(0, csv.find('\n')) == "row,gamma,omega_r,ratio,regime");
}

TEST_CASE("period-bound scan emits one block per pair") {
    const std::vector<ResonantPair> pairs = {{3, 0}, {4, 0}, {5, 0}};
    const auto csv = experiment::scan_ttilde_csv(pairs, -0.1, -0.001, 5, 0.1);
    std::stringstream stream(csv);
    std::string line;
    std::getline(stream, line);
    CHECK(line == "kappa,n,nprime,T_tilde");
    int rows = 0;
    while (std::getline(stream, line))
        ++rows;
    CHECK(rows == 15);
    CHECK_THROWS_AS((void)experiment::scan_ttilde_csv(pairs, -0.1, 0.001, 5, 0.1),
                    std::invalid_argument);
}
