#pragma once

// Independent brute-force oracles used by the test suite.  Everything here
// deliberately avoids the library's integration path: fixed-step classical
// RK4, no adaptivity, no symmetrization tricks.

#include <cmath>
#include <functional>
#include <vector>

namespace test_oracle {

/// Fixed-step RK4 for the scalar Riccati equation u' = -u^2 - K(t).
inline double riccati_rk4(const std::function<double(double)>& K, double u0,
                          double t0, double t1, double h = 2e-5) {
    const long n = std::lround((t1 - t0) / h);
    double u = u0;
    auto f = [&](double t, double v) { return -v * v - K(t); };
    for (long i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * double(i) / double(n);
        const double hh = (t1 - t0) / double(n);
        const double k1 = f(t, u);
        const double k2 = f(t + 0.5 * hh, u + 0.5 * hh * k1);
        const double k3 = f(t + 0.5 * hh, u + 0.5 * hh * k2);
        const double k4 = f(t + hh, u + hh * k3);
        u += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

/// The attracting periodic solution of the scalar Riccati flow, found by the
/// long-settle construction: integrate from t = -settle with u = seed and
/// return samples over one period starting at t = 0.
inline std::vector<double> periodic_riccati_samples(
    const std::function<double(double)>& K, double period, double seed,
    const std::vector<double>& sample_times, double settle = 200.0) {
    double u = riccati_rk4(K, seed, -settle, 0.0, 1e-4);
    std::vector<double> out;
    double t_prev = 0.0;
    for (double t : sample_times) {
        u = riccati_rk4(K, u, t_prev, t, 2e-6);
        t_prev = t;
        out.push_back(u);
    }
    return out;
}

/// Period-average of the attracting periodic solution (trapezoid over a
/// dense uniform grid), i.e. the top exponent of the periodic profile.
inline double periodic_exponent(const std::function<double(double)>& K, double period,
                                double seed, int grid = 20000) {
    double u = riccati_rk4(K, seed, -200.0, 0.0, 1e-4);
    double acc = 0.5 * u;
    for (int i = 1; i <= grid; ++i) {
        u = riccati_rk4(K, u, period * double(i - 1) / grid, period * double(i) / grid, 1e-6);
        acc += (i == grid) ? 0.5 * u : u;
    }
    return acc / grid;
}

/// Growth rate of the scalar Jacobi equation J'' + K J = 0 from (1, c),
/// fixed-step RK4 with renormalization each unit of time; slope of log||.||
/// over the tail half.
inline double jacobi_exponent(const std::function<double(double)>& K, double horizon,
                              double c = 1.0, double h = 1e-4) {
    double j = 1.0, jp = c;
    double log_norm = 0.0;
    std::vector<double> checkpoints;
    checkpoints.push_back(0.0);
    const int blocks = static_cast<int>(std::round(horizon));
    for (int b = 0; b < blocks; ++b) {
        const long n = std::lround(1.0 / h);
        for (long i = 0; i < n; ++i) {
            const double t = b + double(i) / double(n);
            const double hh = 1.0 / double(n);
            auto f = [&](double tt, double a, double ap, double& da, double& dap) {
                da = ap;
                dap = -K(tt) * a;
            };
            double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
            f(t, j, jp, k1a, k1b);
            f(t + 0.5 * hh, j + 0.5 * hh * k1a, jp + 0.5 * hh * k1b, k2a, k2b);
            f(t + 0.5 * hh, j + 0.5 * hh * k2a, jp + 0.5 * hh * k2b, k3a, k3b);
            f(t + hh, j + hh * k3a, jp + hh * k3b, k4a, k4b);
            j += hh / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
            jp += hh / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
        }
        const double nrm = std::sqrt(j * j + jp * jp);
        log_norm += std::log(nrm);
        j /= nrm;
        jp /= nrm;
        checkpoints.push_back(log_norm);
    }
    const int i0 = blocks / 2;
    return (checkpoints[blocks] - checkpoints[i0]) / double(blocks - i0);
}

}  // namespace test_oracle
