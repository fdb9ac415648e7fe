#pragma once

#include <stdexcept>
#include <string>

namespace kerr_rabi {

// Numerical guards and contract violations. The CLI maps ConfigError to exit
// code 2 and the propagation guards (NormDrift, CutoffLeak) to exit code 3.

struct DegenerateLevels : std::runtime_error {
    explicit DegenerateLevels(const std::string& what) : std::runtime_error(what) {}
};

struct NoRoot : std::runtime_error {
    explicit NoRoot(const std::string& what) : std::runtime_error(what) {}
};

struct NoTransfer : std::runtime_error {
    explicit NoTransfer(const std::string& what) : std::runtime_error(what) {}
};

struct CutoffTooSmall : std::runtime_error {
    explicit CutoffTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidStep : std::runtime_error {
    explicit InvalidStep(const std::string& what) : std::runtime_error(what) {}
};

struct PathTooShort : std::runtime_error {
    explicit PathTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct NormDrift : std::runtime_error {
    explicit NormDrift(const std::string& what) : std::runtime_error(what) {}
};

struct CutoffLeak : std::runtime_error {
    explicit CutoffLeak(const std::string& what) : std::runtime_error(what) {}
};

struct ResonantTarget : std::runtime_error {
    explicit ResonantTarget(const std::string& what) : std::runtime_error(what) {}
};

struct KerrDegenerate : std::runtime_error {
    explicit KerrDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kerr_rabi
