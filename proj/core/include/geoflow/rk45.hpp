#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "geoflow/errors.hpp"

namespace geoflow {

/// Error-control settings for the embedded Runge-Kutta 4(5) stepper.
struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double min_step = 1e-14;
    /// Norm ceiling; crossing it raises BlowUpError with the current time.
    double blowup_ceiling = std::numeric_limits<double>::infinity();
};

namespace detail {

// Dormand-Prince RK5(4)7M coefficients.
inline constexpr double DP_C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double DP_A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights equal the last A row (FSAL); 4th-order embedded weights:
inline constexpr double DP_B4[7] = {5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace detail

/// Adaptive Dormand-Prince 4(5) integrator over Eigen vector states.
///
/// rhs(t, y, dydt) fills the derivative.  observer(t, y) is called after every
/// accepted step (and once for the initial state).  Integration runs from t0
/// to t1 in either direction.
template <typename Rhs, typename Observer>
void integrate_rk45(Rhs&& rhs, Eigen::VectorXd& y, double t0, double t1,
                    const StepControl& ctl, Observer&& observer) {
    const int dir = (t1 >= t0) ? 1 : -1;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) {
        observer(t0, y);
        return;
    }

    const int n = static_cast<int>(y.size());
    Eigen::MatrixXd k(n, 7);
    Eigen::VectorXd ytmp(n), y5(n), y4(n), ks(n);

    double t = t0;
    double h = std::min(ctl.max_step, span);
    observer(t, y);

    rhs(t, y, ytmp);  // first stage, reused FSAL-style
    k.col(0) = ytmp;

    int consecutive_rejects = 0;
    while (dir * (t1 - t) > 0) {
        h = std::min(h, std::abs(t1 - t));
        const double hs = dir * h;

        for (int s = 1; s < 7; ++s) {
            ytmp = y;
            for (int j = 0; j < s; ++j)
                if (detail::DP_A[s][j] != 0.0) ytmp += hs * detail::DP_A[s][j] * k.col(j);
            rhs(t + detail::DP_C[s] * hs, ytmp, ks);
            k.col(s) = ks;
        }

        y5 = y;
        for (int s = 0; s < 6; ++s)
            if (detail::DP_A[6][s] != 0.0) y5 += hs * detail::DP_A[6][s] * k.col(s);
        y4 = y;
        for (int s = 0; s < 7; ++s)
            if (detail::DP_B4[s] != 0.0) y4 += hs * detail::DP_B4[s] * k.col(s);

        const double sc = ctl.abs_tol + ctl.rel_tol * std::max(y.norm(), y5.norm());
        const double err = (y5 - y4).norm() / sc;

        if (err <= 1.0) {
            t += hs;
            y = y5;
            observer(t, y);
            if (y.norm() > ctl.blowup_ceiling) throw BlowUpError(t, y.norm());
            // FSAL: stage 7 of the accepted step is stage 1 of the next.
            k.col(0) = k.col(6);
            consecutive_rejects = 0;
            const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h = std::min(ctl.max_step, h * std::min(5.0, grow));
        } else {
            // k.col(0) is still the derivative at the unchanged (t, y).
            ++consecutive_rejects;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < ctl.min_step || consecutive_rejects > 60)
                throw ToleranceFailure("rk45 step size underflow at t = " + std::to_string(t));
        }
    }
}

/// Convenience overload without an observer.
template <typename Rhs>
void integrate_rk45(Rhs&& rhs, Eigen::VectorXd& y, double t0, double t1,
                    const StepControl& ctl) {
    integrate_rk45(std::forward<Rhs>(rhs), y, t0, t1, ctl, [](double, const Eigen::VectorXd&) {});
}

}  // namespace geoflow
