#include "kerr_rabi/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "kerr_rabi/csv.hpp"
#include "kerr_rabi/errors.hpp"

namespace kerr_rabi::config {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto result = std::from_chars(first, last, out);
    if (result.ec != std::errc{} || result.ptr != last)
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    return out;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long out = 0;
    const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
    if (result.ec != std::errc{} || result.ptr != value.data() + value.size())
        throw ConfigError("bad integer value for '" + key + "': " + value);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
    if (result.ec != std::errc{} || result.ptr != value.data() + value.size())
        throw ConfigError("bad seed value for '" + key + "': " + value);
    return out;
}

} // namespace

const char* model_name(Model model) {
    switch (model) {
        case Model::Full: return "full";
        case Model::Effective: return "effective";
        case Model::Master: return "master";
        case Model::Analytic: return "analytic";
    }
    return "unknown";
}

std::set<Model> parse_models(const std::string& csv) {
    std::set<Model> models;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item == "full") models.insert(Model::Full);
        else if (item == "effective") models.insert(Model::Effective);
        else if (item == "master") models.insert(Model::Master);
        else if (item == "analytic") models.insert(Model::Analytic);
        else throw ConfigError("unknown model '" + item + "'");
    }
    if (models.empty())
        throw ConfigError("empty model list");
    return models;
}

std::string format_models(const std::set<Model>& models) {
    std::string out;
    for (Model model : models) {
        if (!out.empty())
            out += ",";
        out += model_name(model);
    }
    return out;
}

void ExperimentConfig::validate() const {
    try {
        oscillator.validate();
        pair.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (delta0.has_value() == (auto_resonance != AutoResonance::None))
        throw ConfigError("set exactly one of drive.delta0 and drive.auto_resonance");
    if (!(t_end > 0.0))
        throw ConfigError("grid.t_end must be positive");
    if (dt.has_value() && !(*dt > 0.0))
        throw ConfigError("grid.dt must be positive (or 'auto')");
    if (realizations < 1)
        throw ConfigError("ensemble.realizations must be >= 1");
    if (cutoff < pair.n + 2)
        throw ConfigError("fock.cutoff must leave headroom above pair.n");
    if (models.empty())
        throw ConfigError("no models requested");
    for (const auto& channel : {amplitude_noise, frequency_noise}) {
        if (!channel)
            continue;
        try {
            channel->validate();
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }
}

ExperimentConfig parse_string(const std::string& text) {
    std::map<std::string, std::string> entries;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        if (!entries.emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "'");
    }

    ExperimentConfig cfg;
    double amp_sigma = 0.0, amp_tau = 1.0, freq_sigma = 0.0, freq_tau = 1.0;
    bool has_amp = false, has_freq = false;

    for (const auto& [key, value] : entries) {
        if (key == "oscillator.kappa") cfg.oscillator.kappa = parse_double(key, value);
        else if (key == "pair.n") cfg.pair.n = static_cast<int>(parse_int(key, value));
        else if (key == "pair.n_prime") cfg.pair.n_prime = static_cast<int>(parse_int(key, value));
        else if (key == "drive.g0") cfg.g0 = parse_double(key, value);
        else if (key == "drive.delta0") cfg.delta0 = parse_double(key, value);
        else if (key == "drive.auto_resonance") {
            if (value == "bare") cfg.auto_resonance = AutoResonance::Bare;
            else if (value == "two_level") cfg.auto_resonance = AutoResonance::TwoLevel;
            else if (value == "full") cfg.auto_resonance = AutoResonance::Full;
            else throw ConfigError("drive.auto_resonance must be bare|two_level|full");
        } else if (key == "noise.amplitude.sigma") { amp_sigma = parse_double(key, value); has_amp = true; }
        else if (key == "noise.amplitude.tau") { amp_tau = parse_double(key, value); has_amp = true; }
        else if (key == "noise.frequency.sigma") { freq_sigma = parse_double(key, value); has_freq = true; }
        else if (key == "noise.frequency.tau") { freq_tau = parse_double(key, value); has_freq = true; }
        else if (key == "fock.cutoff") cfg.cutoff = static_cast<int>(parse_int(key, value));
        else if (key == "grid.t_end") cfg.t_end = parse_double(key, value);
        else if (key == "grid.dt") {
            if (value != "auto")
                cfg.dt = parse_double(key, value);
        } else if (key == "ensemble.realizations") {
            const long long n = parse_int(key, value);
            if (n < 1)
                throw ConfigError("ensemble.realizations must be >= 1");
            cfg.realizations = static_cast<std::size_t>(n);
        } else if (key == "ensemble.master_seed") cfg.master_seed = parse_u64(key, value);
        else if (key == "models") cfg.models = parse_models(value);
        else if (key == "output.dir") cfg.output_dir = value;
        else throw ConfigError("unknown key '" + key + "'");
    }

    if (!entries.count("pair.n") || !entries.count("pair.n_prime"))
        throw ConfigError("pair.n and pair.n_prime are required");
    if (!entries.count("drive.g0"))
        throw ConfigError("drive.g0 is required");
    if (!entries.count("grid.t_end"))
        throw ConfigError("grid.t_end is required");

    if (has_amp)
        cfg.amplitude_noise = noise::NoiseChannel{amp_sigma, amp_tau, noise::Target::Amplitude};
    if (has_freq)
        cfg.frequency_noise = noise::NoiseChannel{freq_sigma, freq_tau, noise::Target::Frequency};
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_file(const std::string& path) {
    std::ifstream file(path);
    if (!file)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_string(buffer.str());
}

std::string serialize(const ExperimentConfig& cfg) {
    std::string out;
    const auto kv = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    };
    kv("oscillator.kappa", csv::format_double(cfg.oscillator.kappa));
    kv("pair.n", std::to_string(cfg.pair.n));
    kv("pair.n_prime", std::to_string(cfg.pair.n_prime));
    kv("drive.g0", csv::format_double(cfg.g0));
    if (cfg.delta0)
        kv("drive.delta0", csv::format_double(*cfg.delta0));
    else
        kv("drive.auto_resonance", cfg.auto_resonance == AutoResonance::Bare ? "bare"
                                   : cfg.auto_resonance == AutoResonance::TwoLevel ? "two_level"
                                                                                   : "full");
    if (cfg.amplitude_noise) {
        kv("noise.amplitude.sigma", csv::format_double(cfg.amplitude_noise->sigma));
        kv("noise.amplitude.tau", csv::format_double(cfg.amplitude_noise->tau));
    }
    if (cfg.frequency_noise) {
        kv("noise.frequency.sigma", csv::format_double(cfg.frequency_noise->sigma));
        kv("noise.frequency.tau", csv::format_double(cfg.frequency_noise->tau));
    }
    kv("fock.cutoff", std::to_string(cfg.cutoff));
    kv("grid.t_end", csv::format_double(cfg.t_end));
    kv("grid.dt", cfg.dt ? csv::format_double(*cfg.dt) : "auto");
    kv("ensemble.realizations", std::to_string(cfg.realizations));
    kv("ensemble.master_seed", csv::format_u64(cfg.master_seed));
    kv("models", format_models(cfg.models));
    kv("output.dir", cfg.output_dir);
    return out;
}

} // namespace kerr_rabi::config
