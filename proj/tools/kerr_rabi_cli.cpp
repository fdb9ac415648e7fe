// Command-line driver: seeded ensemble runs, reference presets, and the scan
// outputs (quasienergy levels/curves, period lower bounds, damping audit).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerr_rabi/config.hpp"
#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/experiment.hpp"
#include "kerr_rabi/rng.hpp"
#include "kerr_rabi/spectrum.hpp"

namespace kr = kerr_rabi;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file)
            throw kr::ConfigError("cannot open output file: " + out_path);
        file << text;
    }
}

std::vector<kr::ResonantPair> parse_pairs(const std::string& text) {
    std::vector<kr::ResonantPair> pairs;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = std::min(text.find(',', begin), text.size());
        const std::string item = text.substr(begin, end - begin);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw kr::ConfigError("pair list must look like 3:0,4:0,5:0");
        kr::ResonantPair pair;
        pair.n = std::stoi(item.substr(0, colon));
        pair.n_prime = std::stoi(item.substr(colon + 1));
        pair.validate();
        pairs.push_back(pair);
        begin = end + 1;
        if (end == text.size())
            break;
    }
    if (pairs.empty())
        throw kr::ConfigError("empty pair list");
    return pairs;
}

void report_run(const kr::experiment::EnsembleResult& result) {
    std::cout << "wrote " << result.resolved.output_dir << "/result.csv ("
              << result.times.size() << " points, " << result.resolved.realizations
              << " realizations, delta0 = " << *result.resolved.delta0 << ")\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-photon transition simulator for driven Kerr-type oscillators"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker cap (default: KERR_RABI_THREADS or all cores)");

    // run <config>
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    std::string config_path;
    run_cmd->add_option("config", config_path, "config file")->required();
    bool run_dump_noise = false, run_dump_trace = false;
    run_cmd->add_flag("--dump-noise", run_dump_noise, "also write trajectory-0 noise paths");
    run_cmd->add_flag("--dump-trace", run_dump_trace,
                      "also write the trajectory-0 trace with populations");

    // preset table1 --row R
    auto* preset_cmd = app.add_subcommand("preset", "run a shipped preset");
    std::string preset_set;
    preset_cmd->add_option("set", preset_set, "preset family (table1)")
        ->required()
        ->check(CLI::IsMember({"table1"}));
    int preset_row = 0;
    preset_cmd->add_option("--row", preset_row, "row 1..7")->required();
    std::string preset_models;
    preset_cmd->add_option("--models", preset_models, "comma list: full,effective,master,analytic");
    std::size_t preset_realizations = 0;
    preset_cmd->add_option("--realizations", preset_realizations, "noise realizations");
    std::uint64_t preset_seed = 0;
    bool preset_has_seed = false;
    preset_cmd->add_option("--seed", preset_seed, "master seed")
        ->each([&](const std::string&) { preset_has_seed = true; });
    std::string preset_out;
    preset_cmd->add_option("--out", preset_out, "output directory");
    bool preset_dump_noise = false, preset_dump_trace = false, preset_print = false;
    preset_cmd->add_flag("--dump-noise", preset_dump_noise, "also write trajectory-0 noise paths");
    preset_cmd->add_flag("--dump-trace", preset_dump_trace,
                         "also write the trajectory-0 trace with populations");
    preset_cmd->add_flag("--print-config", preset_print, "print the resolved config and exit");

    // scan-resonance
    auto* scanres_cmd = app.add_subcommand("scan-resonance",
                                           "quasienergy levels or level-vs-amplitude curves");
    std::string scanres_mode = "curves";
    scanres_cmd->add_option("--mode", scanres_mode, "levels | curves")
        ->check(CLI::IsMember({"levels", "curves"}));
    double scanres_kappa = 0.0, scanres_delta = 0.0, scanres_gmax = 0.3;
    bool scanres_has_delta = false;
    scanres_cmd->add_option("--kappa", scanres_kappa, "nonlinearity ratio");
    scanres_cmd->add_option("--delta", scanres_delta, "detuning")
        ->each([&](const std::string&) { scanres_has_delta = true; });
    int scanres_n = 5, scanres_nprime = 0, scanres_points = 200, scanres_cutoff = 11,
        scanres_maxlevel = 10;
    scanres_cmd->add_option("--n", scanres_n, "upper level");
    scanres_cmd->add_option("--nprime", scanres_nprime, "lower level");
    scanres_cmd->add_option("--gmax", scanres_gmax, "largest drive amplitude");
    scanres_cmd->add_option("--points", scanres_points, "grid points");
    scanres_cmd->add_option("--cutoff", scanres_cutoff, "Fock cutoff");
    scanres_cmd->add_option("--max-level", scanres_maxlevel, "highest level (levels mode)");
    std::string scanres_out;
    scanres_cmd->add_option("--out", scanres_out, "output file (default stdout)");

    // scan-ttilde
    auto* ttilde_cmd = app.add_subcommand("scan-ttilde",
                                          "period lower bound (or shift difference) vs kappa");
    std::string ttilde_mode = "ttilde";
    ttilde_cmd->add_option("--mode", ttilde_mode, "ttilde | corrdiff")
        ->check(CLI::IsMember({"ttilde", "corrdiff"}));
    std::string ttilde_pairs = "3:0,4:0,5:0";
    ttilde_cmd->add_option("--pairs", ttilde_pairs, "pair list n:nprime,...");
    double ttilde_kmin = -0.1, ttilde_kmax = -0.001, ttilde_eta = 0.1;
    int ttilde_points = 40;
    ttilde_cmd->add_option("--kappa-min", ttilde_kmin, "first kappa");
    ttilde_cmd->add_option("--kappa-max", ttilde_kmax, "last kappa");
    ttilde_cmd->add_option("--points", ttilde_points, "points per pair");
    ttilde_cmd->add_option("--eta", ttilde_eta, "relative noise level");
    std::string ttilde_out;
    ttilde_cmd->add_option("--out", ttilde_out, "output file (default stdout)");

    // audit-table1
    auto* audit_cmd = app.add_subcommand("audit-table1", "recompute the preset damping ratios");
    std::string audit_out;
    audit_cmd->add_option("--out", audit_out, "output file (default stdout)");

    // dump-noise
    auto* dump_cmd = app.add_subcommand("dump-noise", "write sampled noise paths as CSV");
    double dump_sigma = 0.0138884, dump_tau = 100.0, dump_sigma2 = 0.0, dump_tau2 = 1.0,
           dump_dt = 5.0;
    std::size_t dump_steps = 10000, dump_traj = 0;
    std::uint64_t dump_seed = 1;
    dump_cmd->add_option("--sigma", dump_sigma, "amplitude channel sigma");
    dump_cmd->add_option("--tau", dump_tau, "amplitude channel tau");
    dump_cmd->add_option("--sigma2", dump_sigma2, "frequency channel sigma");
    dump_cmd->add_option("--tau2", dump_tau2, "frequency channel tau");
    dump_cmd->add_option("--dt", dump_dt, "sampling step");
    dump_cmd->add_option("--steps", dump_steps, "number of samples");
    dump_cmd->add_option("--seed", dump_seed, "master seed");
    dump_cmd->add_option("--trajectory", dump_traj, "trajectory index");
    std::string dump_out;
    dump_cmd->add_option("--out", dump_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const auto cfg = kr::config::parse_file(config_path);
            report_run(kr::experiment::run_and_write(cfg, threads, run_dump_noise,
                                                     run_dump_trace));
        } else if (*preset_cmd) {
            auto cfg = kr::experiment::preset_table1(preset_row);
            if (!preset_models.empty())
                cfg.models = kr::config::parse_models(preset_models);
            if (preset_realizations > 0)
                cfg.realizations = preset_realizations;
            if (preset_has_seed)
                cfg.master_seed = preset_seed;
            if (!preset_out.empty())
                cfg.output_dir = preset_out;
            if (preset_print) {
                std::cout << kr::config::serialize(cfg);
            } else {
                report_run(kr::experiment::run_and_write(cfg, threads, preset_dump_noise,
                                                         preset_dump_trace));
            }
        } else if (*scanres_cmd) {
            const kr::OscillatorParams params{1.0, scanres_kappa};
            const kr::ResonantPair pair{scanres_n, scanres_nprime};
            const double delta =
                scanres_has_delta ? scanres_delta
                                  : kr::spectrum::resonant_detuning_bare(params, pair);
            if (scanres_mode == "levels")
                emit(kr::experiment::scan_levels_csv(params, delta, scanres_maxlevel),
                     scanres_out);
            else
                emit(kr::experiment::scan_curves_csv(params, pair, delta, scanres_gmax,
                                                     scanres_points, scanres_cutoff),
                     scanres_out);
        } else if (*ttilde_cmd) {
            const auto pairs = parse_pairs(ttilde_pairs);
            if (ttilde_mode == "ttilde")
                emit(kr::experiment::scan_ttilde_csv(pairs, ttilde_kmin, ttilde_kmax,
                                                     ttilde_points, ttilde_eta),
                     ttilde_out);
            else
                emit(kr::experiment::scan_shift_difference_csv(pairs, ttilde_kmin, ttilde_kmax,
                                                               ttilde_points),
                     ttilde_out);
        } else if (*audit_cmd) {
            emit(kr::experiment::audit_table1_csv(), audit_out);
        } else if (*dump_cmd) {
            const kr::noise::NoiseChannel amp{dump_sigma, dump_tau,
                                              kr::noise::Target::Amplitude};
            const kr::noise::NoiseChannel freq{dump_sigma2, dump_tau2,
                                               kr::noise::Target::Frequency};
            const auto amp_path = kr::noise::sample_path(
                amp, dump_dt, dump_steps,
                kr::rng::derive_seed(dump_seed, dump_traj,
                                     kr::noise::channel_index(kr::noise::Target::Amplitude)));
            const auto freq_path = kr::noise::sample_path(
                freq, dump_dt, dump_steps,
                kr::rng::derive_seed(dump_seed, dump_traj,
                                     kr::noise::channel_index(kr::noise::Target::Frequency)));
            emit(kr::experiment::noise_csv(amp_path, freq_path), dump_out);
        }
    } catch (const kr::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const kr::NormDrift& err) {
        std::cerr << "numerical guard: " << err.what() << "\n";
        return 3;
    } catch (const kr::CutoffLeak& err) {
        std::cerr << "numerical guard: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
