#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace kerr_rabi::ode {

// Dormand-Prince 5(4) with step-doubling-free embedded error estimate and a
// PI step controller. Small fixed-size systems only; rhs(t, y, dydt).
template <std::size_t N, class Rhs>
void integrate_adaptive(Rhs&& rhs, std::array<double, N>& y, double t0, double t1,
                        double rtol = 1e-9, double atol = 1e-12) {
    if (t1 <= t0)
        return;

    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    double t = t0;
    double h = (t1 - t0) / 100.0;
    double error_old = 1e-4;
    rhs(t, y, k1);

    int rejected_in_a_row = 0;
    while (t < t1) {
        h = std::min(h, t1 - t);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double error = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double scale =
                atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            error = std::max(error, std::abs(ei) / scale);
        }

        if (error <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // first-same-as-last
            const double grow =
                0.9 * std::pow(error > 0.0 ? error : 1e-16, -0.7 / 5.0) *
                std::pow(error_old, 0.4 / 5.0);
            h *= std::clamp(grow, 0.2, 5.0);
            error_old = std::max(error, 1e-4);
            rejected_in_a_row = 0;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(error, -1.0 / 5.0));
            if (++rejected_in_a_row > 100)
                throw std::runtime_error("ode: step size collapsed");
        }
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::runtime_error("ode: nonfinite step size");
    }
}

} // namespace kerr_rabi::ode
