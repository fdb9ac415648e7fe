#pragma once

#include <cmath>
#include <stdexcept>

namespace kerr_rabi {

// Rotating-frame oscillator model
//
//   H = -delta a'a + (alpha/2)(a'a)^2 + kappa (a'a)^3 + g (a + a')
//
// alpha sets the global energy/time unit (alpha = 1 throughout); kappa is the
// sixth-order coefficient expressed in units of alpha.
struct OscillatorParams {
    double alpha = 1.0;
    double kappa = 0.0;

    void validate() const {
        if (!(alpha > 0.0))
            throw std::invalid_argument("OscillatorParams: alpha must be positive");
        if (!(std::abs(kappa / alpha) <= 0.25))
            throw std::invalid_argument("OscillatorParams: |kappa/alpha| must be <= 0.25");
    }
};

// A pair of levels connected by an (n - n_prime)-quantum transition.
// Basis convention everywhere: |n_prime> is the lower level and comes first.
struct ResonantPair {
    int n = 2;
    int n_prime = 0;

    int quanta() const { return n - n_prime; }

    void validate() const {
        if (n_prime < 0)
            throw std::invalid_argument("ResonantPair: n_prime must be >= 0");
        if (n <= n_prime)
            throw std::invalid_argument("ResonantPair: n must exceed n_prime");
        if (quanta() < 2)
            throw std::invalid_argument("ResonantPair: n - n_prime must be >= 2");
    }
};

} // namespace kerr_rabi
