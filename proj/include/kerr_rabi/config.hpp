#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "kerr_rabi/noise.hpp"
#include "kerr_rabi/oscillator.hpp"

namespace kerr_rabi::config {

enum class Model { Full, Effective, Master, Analytic };

const char* model_name(Model model);
std::set<Model> parse_models(const std::string& csv);
std::string format_models(const std::set<Model>& models);

enum class AutoResonance { None, Bare, TwoLevel, Full };

// One experiment: plain `key = value` text with `#` comments and dotted keys.
// Schema (defaults in brackets):
//   oscillator.kappa          sixth-order coefficient / alpha        [0]
//   pair.n, pair.n_prime      resonant pair                          (required)
//   drive.g0                  mean drive amplitude                   (required)
//   drive.delta0              mean detuning      } exactly one of
//   drive.auto_resonance      bare|two_level|full } the two
//   noise.amplitude.sigma/.tau  amplitude channel (sigma 0 disables) [disabled]
//   noise.frequency.sigma/.tau  frequency channel                    [disabled]
//   fock.cutoff               Fock truncation                        [11]
//   grid.t_end                run length                             (required)
//   grid.dt                   step, or "auto" = min(tau)/20          [auto]
//   ensemble.realizations     noise realizations                     [1000]
//   ensemble.master_seed      64-bit seed                            [1]
//   models                    comma list of full,effective,master,analytic [all]
//   output.dir                output directory                       [.]
struct ExperimentConfig {
    OscillatorParams oscillator;
    ResonantPair pair;
    double g0 = 0.0;
    std::optional<double> delta0;
    AutoResonance auto_resonance = AutoResonance::None;
    std::optional<noise::NoiseChannel> amplitude_noise;
    std::optional<noise::NoiseChannel> frequency_noise;
    int cutoff = 11;
    double t_end = 0.0;
    std::optional<double> dt;  // empty = auto
    std::size_t realizations = 1000;
    std::uint64_t master_seed = 1;
    std::set<Model> models{Model::Full, Model::Effective, Model::Master, Model::Analytic};
    std::string output_dir = ".";

    void validate() const;  // throws ConfigError
};

ExperimentConfig parse_string(const std::string& text);
ExperimentConfig parse_file(const std::string& path);

/// Serializes a fully resolved config; the output parses back to an
/// identical config, so a written manifest re-runs the experiment as-is.
std::string serialize(const ExperimentConfig& cfg);

} // namespace kerr_rabi::config
