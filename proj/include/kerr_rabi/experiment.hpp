#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kerr_rabi/analysis.hpp"
#include "kerr_rabi/config.hpp"
#include "kerr_rabi/dynamics.hpp"
#include "kerr_rabi/ensemble.hpp"

namespace kerr_rabi::experiment {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kGenerator = "xoshiro256++ / splitmix64 / Box-Muller";

// Reference simulation presets: one row per resonant pair / nonlinearity
// combination, all with eta = 0.1 amplitude noise and a period near 3e4.
struct PresetRow {
    int n_prime;
    int n;
    double kappa;
    double g;
    double tau;
    double delta_full;
    double delta_two_level;
    double ratio_reference;  // published damping ratio, 2 significant figures
};

const std::vector<PresetRow>& preset_rows();

/// Shipped preset for row 1..7: amplitude noise sigma = 0.1 g, cutoff 11,
/// initial state |n'>, delta0 = the row's full-model resonance, and a run
/// length of two transition periods (about 6e4).
config::ExperimentConfig preset_table1(int row);

// All time series of one run on the shared recording grid.
struct EnsembleResult {
    std::vector<double> times;
    std::optional<ensemble::Stats> full;
    std::optional<ensemble::Stats> effective;
    std::optional<std::vector<double>> master;
    std::optional<std::vector<double>> analytic;
    config::ExperimentConfig resolved;  // delta0 and dt made explicit
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t stride = 0;
};

/// Runs every requested model. Stochastic models average over
/// `realizations` trajectories whose noise paths derive from
/// (master_seed, trajectory, channel); the result is identical for any
/// worker count. threads = 0 defers to KERR_RABI_THREADS / hardware.
EnsembleResult run_experiment(const config::ExperimentConfig& cfg, int threads = 0);

/// result.csv body: column t plus, per requested model,
/// mean_full,se_full,mean_eff,se_eff,mean_master,mean_analytic.
std::string result_csv(const EnsembleResult& result);

/// Manifest: header comments (generator, version) plus the resolved config;
/// parsing it back re-runs the experiment byte-identically.
std::string manifest_text(const EnsembleResult& result);

/// Writes result.csv and manifest under cfg.output_dir; returns the result.
EnsembleResult run_and_write(const config::ExperimentConfig& cfg, int threads = 0,
                             bool dump_noise = false, bool dump_trace = false);

/// Deterministic trace export, 12 significant digits:
/// t,inversion[,P0..Pcutoff].
std::string trace_csv(const dynamics::InversionTrace& trace);

/// Noise-path debug dump: t,xi1,xi2.
std::string noise_csv(const noise::NoisePath& amplitude, const noise::NoisePath& frequency);

// --- scan and audit outputs -------------------------------------------------

/// Bare quasienergy versus level index: CSV n,quasienergy.
std::string scan_levels_csv(const OscillatorParams& params, double delta, int max_level);

/// Tracked quasienergies of the pair versus drive amplitude:
/// CSV g,eps_lower,eps_upper,gap,overlap_lower,overlap_upper.
std::string scan_curves_csv(const OscillatorParams& params, const ResonantPair& pair,
                            double delta, double g_max, int points, int cutoff);

/// Period lower bound versus kappa for several pairs: CSV kappa,n,nprime,T_tilde.
std::string scan_ttilde_csv(const std::vector<ResonantPair>& pairs, double kappa_min,
                            double kappa_max, int points, double eta);

/// Exact and linear-in-kappa shift differences at the bare resonance:
/// CSV kappa,n,nprime,diff_exact,diff_linear.
std::string scan_shift_difference_csv(const std::vector<ResonantPair>& pairs,
                                      double kappa_min, double kappa_max, int points);

struct AuditRow {
    int row;
    analysis::RegimeReport report;
};

/// Recomputed damping ratios for all preset rows (amplitude noise only).
std::vector<AuditRow> audit_table1();

/// CSV row,gamma,omega_r,ratio,regime.
std::string audit_table1_csv();

} // namespace kerr_rabi::experiment
