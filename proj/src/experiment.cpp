#include "kerr_rabi/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "kerr_rabi/csv.hpp"
#include "kerr_rabi/errors.hpp"
#include "kerr_rabi/rng.hpp"
#include "kerr_rabi/spectrum.hpp"
#include "kerr_rabi/twolevel.hpp"

namespace kerr_rabi::experiment {

const std::vector<PresetRow>& preset_rows() {
    static const std::vector<PresetRow> rows = {
        {0, 3, 0.000, 0.034966, 2000.0, 1.5, 1.5, 0.0},
        {0, 3, -0.025, 0.029492, 2000.0, 1.274905, 1.274905, 0.015},
        {0, 4, 0.000, 0.099034, 2000.0, 2.0, 2.0, 0.0},
        {0, 4, -0.025, 0.075692, 2000.0, 1.599393, 1.599395, 1.1},
        {0, 5, 0.000, 0.202931, 1000.0, 2.5, 2.5, 0.0},
        {0, 5, -0.025, 0.138884, 100.0, 1.872625, 1.872634, 1.3},
        {0, 5, 0.025, 0.261639, 1000.0, 3.125676, 3.125674, 1.1},
    };
    return rows;
}

config::ExperimentConfig preset_table1(int row) {
    if (row < 1 || row > static_cast<int>(preset_rows().size()))
        throw ConfigError("preset row must be in 1..7");
    const PresetRow& preset = preset_rows()[static_cast<std::size_t>(row - 1)];

    config::ExperimentConfig cfg;
    cfg.oscillator.kappa = preset.kappa;
    cfg.pair = {preset.n, preset.n_prime};
    cfg.g0 = preset.g;
    cfg.delta0 = preset.delta_full;
    cfg.amplitude_noise =
        noise::NoiseChannel{0.1 * preset.g, preset.tau, noise::Target::Amplitude};
    cfg.cutoff = 11;
    const double omega_r = std::abs(
        spectrum::rabi_frequency(cfg.oscillator, preset.delta_full, preset.g, cfg.pair));
    cfg.t_end = 2.0 * M_PI / omega_r;  // two transition periods
    cfg.realizations = 1000;
    cfg.master_seed = 1;
    return cfg;
}

namespace {

struct ResolvedGrid {
    double dt;
    std::size_t n_steps;
    std::size_t stride;
    std::vector<double> times;
};

double resolve_delta(const config::ExperimentConfig& cfg) {
    if (cfg.delta0)
        return *cfg.delta0;
    switch (cfg.auto_resonance) {
        case config::AutoResonance::Bare:
            return spectrum::resonant_detuning_bare(cfg.oscillator, cfg.pair);
        case config::AutoResonance::TwoLevel:
            return spectrum::refine_resonance_two_level(cfg.oscillator, cfg.pair, cfg.g0);
        case config::AutoResonance::Full:
            return spectrum::refine_resonance_full(cfg.oscillator, cfg.pair, cfg.g0,
                                                   cfg.cutoff);
        case config::AutoResonance::None:
            break;
    }
    throw ConfigError("no detuning specified");
}

bool channel_active(const std::optional<noise::NoiseChannel>& channel) {
    return channel && channel->enabled();
}

ResolvedGrid resolve_grid(const config::ExperimentConfig& cfg) {
    ResolvedGrid grid;
    if (cfg.dt) {
        grid.dt = *cfg.dt;
    } else {
        double tau_min = 0.0;
        if (channel_active(cfg.amplitude_noise))
            tau_min = cfg.amplitude_noise->tau;
        if (channel_active(cfg.frequency_noise))
            tau_min = tau_min > 0.0 ? std::min(tau_min, cfg.frequency_noise->tau)
                                    : cfg.frequency_noise->tau;
        grid.dt = tau_min > 0.0 ? tau_min / 20.0 : cfg.t_end / 2000.0;
    }
    grid.n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / grid.dt - 1e-9));
    grid.n_steps = std::max<std::size_t>(grid.n_steps, 1);
    grid.stride = dynamics::default_stride(grid.n_steps);
    for (std::size_t k = 0; k <= grid.n_steps; k += grid.stride)
        grid.times.push_back(static_cast<double>(k) * grid.dt);
    if (grid.n_steps % grid.stride != 0)
        grid.times.push_back(static_cast<double>(grid.n_steps) * grid.dt);
    return grid;
}

} // namespace

EnsembleResult run_experiment(const config::ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const double delta0 = resolve_delta(cfg);
    const ResolvedGrid grid = resolve_grid(cfg);

    EnsembleResult result;
    result.times = grid.times;
    result.dt = grid.dt;
    result.n_steps = grid.n_steps;
    result.stride = grid.stride;
    result.resolved = cfg;
    result.resolved.delta0 = delta0;
    result.resolved.auto_resonance = config::AutoResonance::None;
    result.resolved.dt = grid.dt;

    const bool amp_on = channel_active(cfg.amplitude_noise);
    const bool freq_on = channel_active(cfg.frequency_noise);
    const std::size_t n_points = grid.times.size();

    const auto make_paths = [&](std::size_t traj, noise::NoisePath& amp,
                                noise::NoisePath& freq) {
        if (amp_on)
            amp = noise::sample_path(
                *cfg.amplitude_noise, grid.dt, grid.n_steps,
                rng::derive_seed(cfg.master_seed, traj,
                                 noise::channel_index(noise::Target::Amplitude)));
        if (freq_on)
            freq = noise::sample_path(
                *cfg.frequency_noise, grid.dt, grid.n_steps,
                rng::derive_seed(cfg.master_seed, traj,
                                 noise::channel_index(noise::Target::Frequency)));
    };

    if (cfg.models.count(config::Model::Full)) {
        const dynamics::FockSpace space{cfg.cutoff};
        // For kappa < 0 the quasienergy ladder bends over near the cutoff and
        // noise parks a little population at the barrier top; that occupancy
        // belongs to the truncated model, so only guard against gross loss.
        const bool noisy_run = amp_on || freq_on;
        const double leak_tolerance =
            (noisy_run && cfg.oscillator.kappa < 0.0) ? 0.1 : 1e-4;
        const auto fn = [&, leak_tolerance](std::size_t traj, std::vector<double>& out) {
            noise::NoisePath amp, freq;
            make_paths(traj, amp, freq);
            dynamics::DriveSchedule schedule;
            schedule.g0 = cfg.g0;
            schedule.delta0 = delta0;
            schedule.amplitude_path = amp_on ? &amp : nullptr;
            schedule.frequency_path = freq_on ? &freq : nullptr;
            schedule.dt = grid.dt;
            schedule.n_steps = grid.n_steps;
            const auto trace = dynamics::propagate(schedule, cfg.oscillator, space,
                                                   dynamics::fock_state(space, cfg.pair.n_prime),
                                                   cfg.pair, grid.stride, false, leak_tolerance);
            out = trace.inversion;
        };
        const std::size_t n = noisy_run ? cfg.realizations : 1;
        result.full = ensemble::run(n, n_points, fn, threads);
    }

    if (cfg.models.count(config::Model::Effective)) {
        const auto fn = [&](std::size_t traj, std::vector<double>& out) {
            noise::NoisePath amp, freq;
            make_paths(traj, amp, freq);
            const auto trace = twolevel::propagate_effective(
                cfg.oscillator, cfg.pair, cfg.g0, delta0, amp_on ? &amp : nullptr,
                freq_on ? &freq : nullptr, grid.dt, grid.n_steps,
                twolevel::EffectiveMode::FullEffective, grid.stride);
            out = trace.inversion;
        };
        const std::size_t n = (amp_on || freq_on) ? cfg.realizations : 1;
        result.effective = ensemble::run(n, n_points, fn, threads);
    }

    const double q1 = amp_on ? noise::white_noise_intensity(*cfg.amplitude_noise) : 0.0;
    const double q2 = freq_on ? noise::white_noise_intensity(*cfg.frequency_noise) : 0.0;

    if (cfg.models.count(config::Model::Master)) {
        const auto blocks = twolevel::build_blocks(cfg.oscillator, cfg.pair, cfg.g0, delta0);
        const auto bloch = twolevel::solve_master_equation(blocks, q1, q2, grid.times);
        std::vector<double> inversion(bloch.z.size());
        for (std::size_t k = 0; k < bloch.z.size(); ++k)
            inversion[k] = 2.0 * bloch.z[k];
        result.master = std::move(inversion);
    }

    if (cfg.models.count(config::Model::Analytic)) {
        std::vector<double> curve(n_points, 1.0);
        if (cfg.oscillator.kappa == 0.0 && q2 == 0.0) {
            // Symmetric spectrum: amplitude noise only randomizes the phase of
            // the oscillation, giving the damped cosine in closed form.
            const auto blocks =
                twolevel::build_blocks(cfg.oscillator, cfg.pair, cfg.g0, delta0);
            for (std::size_t k = 0; k < n_points; ++k)
                curve[k] =
                    twolevel::analytic_kerr_white(blocks.v12, blocks.h12, q1, grid.times[k]);
        } else {
            const auto rate =
                twolevel::decay_rate(cfg.oscillator, cfg.pair, cfg.g0, delta0, q1, q2);
            const double omega_r =
                spectrum::rabi_frequency(cfg.oscillator, delta0, cfg.g0, cfg.pair);
            for (std::size_t k = 0; k < n_points; ++k)
                curve[k] = twolevel::analytic_overkerr(rate.gamma, omega_r, grid.times[k]);
        }
        result.analytic = std::move(curve);
    }
    return result;
}

std::string result_csv(const EnsembleResult& result) {
    std::string out = "t";
    if (result.full) out += ",mean_full,se_full";
    if (result.effective) out += ",mean_eff,se_eff";
    if (result.master) out += ",mean_master";
    if (result.analytic) out += ",mean_analytic";
    out += "\n";
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        out += csv::format_double(result.times[k]);
        if (result.full) {
            out += "," + csv::format_double(result.full->mean[k]);
            out += "," + csv::format_double(result.full->stderr_of_mean[k]);
        }
        if (result.effective) {
            out += "," + csv::format_double(result.effective->mean[k]);
            out += "," + csv::format_double(result.effective->stderr_of_mean[k]);
        }
        if (result.master)
            out += "," + csv::format_double((*result.master)[k]);
        if (result.analytic)
            out += "," + csv::format_double((*result.analytic)[k]);
        out += "\n";
    }
    return out;
}

std::string manifest_text(const EnsembleResult& result) {
    std::string out;
    out += "# kerr-rabi run manifest (re-runnable config)\n";
    out += "# version: ";
    out += kVersion;
    out += "\n# rng: ";
    out += kGenerator;
    out += "\n";
    out += config::serialize(result.resolved);
    return out;
}

EnsembleResult run_and_write(const config::ExperimentConfig& cfg, int threads,
                             bool dump_noise, bool dump_trace) {
    EnsembleResult result = run_experiment(cfg, threads);
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    std::ofstream csv_file(dir / "result.csv", std::ios::binary);
    csv_file << result_csv(result);
    std::ofstream manifest_file(dir / "manifest", std::ios::binary);
    manifest_file << manifest_text(result);

    if (dump_noise) {
        noise::NoiseChannel amp = cfg.amplitude_noise.value_or(
            noise::NoiseChannel{0.0, 1.0, noise::Target::Amplitude});
        noise::NoiseChannel freq = cfg.frequency_noise.value_or(
            noise::NoiseChannel{0.0, 1.0, noise::Target::Frequency});
        const auto amp_path = noise::sample_path(
            amp, result.dt, result.n_steps,
            rng::derive_seed(cfg.master_seed, 0, noise::channel_index(noise::Target::Amplitude)));
        const auto freq_path = noise::sample_path(
            freq, result.dt, result.n_steps,
            rng::derive_seed(cfg.master_seed, 0, noise::channel_index(noise::Target::Frequency)));
        std::ofstream noise_file(dir / "noise.csv", std::ios::binary);
        noise_file << noise_csv(amp_path, freq_path);
    }

    if (dump_trace) {
        const double delta0 = *result.resolved.delta0;
        const dynamics::FockSpace space{cfg.cutoff};
        noise::NoisePath amp, freq;
        dynamics::DriveSchedule schedule;
        schedule.g0 = cfg.g0;
        schedule.delta0 = delta0;
        if (channel_active(cfg.amplitude_noise)) {
            amp = noise::sample_path(*cfg.amplitude_noise, result.dt, result.n_steps,
                                     rng::derive_seed(cfg.master_seed, 0,
                                                      noise::channel_index(noise::Target::Amplitude)));
            schedule.amplitude_path = &amp;
        }
        if (channel_active(cfg.frequency_noise)) {
            freq = noise::sample_path(*cfg.frequency_noise, result.dt, result.n_steps,
                                      rng::derive_seed(cfg.master_seed, 0,
                                                       noise::channel_index(noise::Target::Frequency)));
            schedule.frequency_path = &freq;
        }
        schedule.dt = result.dt;
        schedule.n_steps = result.n_steps;
        const double leak_tolerance =
            (schedule.noisy() && cfg.oscillator.kappa < 0.0) ? 0.1 : 1e-4;
        const auto trace = dynamics::propagate(schedule, cfg.oscillator, space,
                                               dynamics::fock_state(space, cfg.pair.n_prime),
                                               cfg.pair, result.stride, true, leak_tolerance);
        std::ofstream trace_file(dir / "trace_full.csv", std::ios::binary);
        trace_file << trace_csv(trace);
    }
    return result;
}

namespace {

std::string format_12g(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

} // namespace

std::string trace_csv(const dynamics::InversionTrace& trace) {
    std::string out = "t,inversion";
    const bool with_pop = trace.populations.has_value();
    if (with_pop)
        for (Eigen::Index k = 0; k < trace.populations->cols(); ++k)
            out += ",P" + std::to_string(k);
    out += "\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out += format_12g(trace.times[i]);
        out += ",";
        out += format_12g(trace.inversion[i]);
        if (with_pop)
            for (Eigen::Index k = 0; k < trace.populations->cols(); ++k)
                out += "," + format_12g((*trace.populations)(static_cast<Eigen::Index>(i), k));
        out += "\n";
    }
    return out;
}

std::string noise_csv(const noise::NoisePath& amplitude, const noise::NoisePath& frequency) {
    if (amplitude.values.size() != frequency.values.size())
        throw std::invalid_argument("noise_csv: path length mismatch");
    std::string out = "t,xi1,xi2\n";
    for (std::size_t k = 0; k < amplitude.values.size(); ++k) {
        out += csv::format_double(static_cast<double>(k) * amplitude.dt);
        out += "," + csv::format_double(amplitude.values[k]);
        out += "," + csv::format_double(frequency.values[k]);
        out += "\n";
    }
    return out;
}

std::string scan_levels_csv(const OscillatorParams& params, double delta, int max_level) {
    std::string out = "n,quasienergy\n";
    for (int n = 0; n <= max_level; ++n) {
        out += std::to_string(n);
        out += "," + csv::format_double(spectrum::bare_quasienergy(params, delta, n));
        out += "\n";
    }
    return out;
}

std::string scan_curves_csv(const OscillatorParams& params, const ResonantPair& pair,
                            double delta, double g_max, int points, int cutoff) {
    if (points < 2)
        throw std::invalid_argument("scan_curves_csv: need at least 2 points");
    std::vector<double> g_grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g_grid[static_cast<std::size_t>(i)] = g_max * static_cast<double>(i) / (points - 1);
    const auto curve = spectrum::quasienergy_curves(params, delta, g_grid, cutoff,
                                                    {pair.n_prime, pair.n});
    std::string out = "g,eps_lower,eps_upper,gap,overlap_lower,overlap_upper\n";
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double lower = curve.levels(pair.n_prime, col);
        const double upper = curve.levels(pair.n, col);
        out += csv::format_double(g_grid[i]);
        out += "," + csv::format_double(lower);
        out += "," + csv::format_double(upper);
        out += "," + csv::format_double(std::abs(upper - lower));
        out += "," + csv::format_double(curve.overlaps(pair.n_prime, col));
        out += "," + csv::format_double(curve.overlaps(pair.n, col));
        out += "\n";
    }
    return out;
}

namespace {

std::vector<double> kappa_grid(double kappa_min, double kappa_max, int points) {
    if (points < 2)
        throw std::invalid_argument("kappa scan: need at least 2 points");
    if (kappa_min == 0.0 || kappa_max == 0.0 || (kappa_min < 0.0) != (kappa_max < 0.0))
        throw std::invalid_argument("kappa scan: range must exclude 0 and not change sign");
    // Log-spaced in |kappa|.
    const double lo = std::log(std::abs(kappa_min));
    const double hi = std::log(std::abs(kappa_max));
    const double sign = kappa_min < 0.0 ? -1.0 : 1.0;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            sign * std::exp(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return grid;
}

} // namespace

std::string scan_ttilde_csv(const std::vector<ResonantPair>& pairs, double kappa_min,
                            double kappa_max, int points, double eta) {
    const auto grid = kappa_grid(kappa_min, kappa_max, points);
    std::string out = "kappa,n,nprime,T_tilde\n";
    for (const auto& pair : pairs)
        for (double kappa : grid) {
            const OscillatorParams params{1.0, kappa};
            out += csv::format_double(kappa);
            out += "," + std::to_string(pair.n) + "," + std::to_string(pair.n_prime);
            out += "," + csv::format_double(analysis::rabi_period_lower_bound(params, pair, eta));
            out += "\n";
        }
    return out;
}

std::string scan_shift_difference_csv(const std::vector<ResonantPair>& pairs,
                                      double kappa_min, double kappa_max, int points) {
    const auto grid = kappa_grid(kappa_min, kappa_max, points);
    std::string out = "kappa,n,nprime,diff_exact,diff_linear\n";
    for (const auto& pair : pairs)
        for (double kappa : grid) {
            const OscillatorParams params{1.0, kappa};
            const double delta0 = spectrum::resonant_detuning_bare(params, pair);
            out += csv::format_double(kappa);
            out += "," + std::to_string(pair.n) + "," + std::to_string(pair.n_prime);
            out += "," + csv::format_double(spectrum::shift_difference(params, pair, delta0));
            out += "," + csv::format_double(spectrum::shift_difference_linear(params, pair));
            out += "\n";
        }
    return out;
}

std::vector<AuditRow> audit_table1() {
    std::vector<AuditRow> rows;
    int index = 1;
    for (const PresetRow& preset : preset_rows()) {
        const OscillatorParams params{1.0, preset.kappa};
        const ResonantPair pair{preset.n, preset.n_prime};
        rows.push_back({index, analysis::overdamped_ratio(params, pair, preset.g,
                                                          preset.delta_full, 0.1, preset.tau)});
        ++index;
    }
    return rows;
}

std::string audit_table1_csv() {
    std::string out = "row,gamma,omega_r,ratio,regime\n";
    for (const AuditRow& row : audit_table1()) {
        out += std::to_string(row.row);
        out += "," + csv::format_double(row.report.gamma);
        out += "," + csv::format_double(row.report.omega_r);
        out += "," + csv::format_double(row.report.ratio);
        out += ",";
        out += analysis::regime_name(row.report.regime);
        out += "\n";
    }
    return out;
}

} // namespace kerr_rabi::experiment
