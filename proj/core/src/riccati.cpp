#include "geoflow/riccati.hpp"

#include <algorithm>
#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

double simpson(const std::vector<double>& values, double dt) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dt * (values[0] + values[1]);
    // Composite Simpson over even interval counts; one trapezoid corrects an
    // odd tail.
    std::size_t m = n - 1;  // interval count
    double total = 0.0;
    std::size_t last = 0;
    if (m % 2 == 1) {
        total += 0.5 * dt * (values[0] + values[1]);
        last = 1;
        m -= 1;
    }
    double s = values[last] + values[last + m];
    for (std::size_t i = 1; i < m; i += 2) s += 4.0 * values[last + i];
    for (std::size_t i = 2; i < m; i += 2) s += 2.0 * values[last + i];
    total += s * dt / 3.0;
    return total;
}

double RiccatiSolution::u_at(double t) const {
    const double t0 = times.front(), t1 = times.back();
    double x = t;
    if (profile.is_periodic()) {
        const double tau = t1 - t0;
        x = std::fmod(t - t0, tau);
        if (x < 0) x += tau;
        x += t0;
    }
    if (x <= t0) return values.front()(0, 0);
    if (x >= t1) return values.back()(0, 0);
    const double dt = times[1] - times[0];
    const std::size_t i = std::min(values.size() - 2, static_cast<std::size_t>((x - t0) / dt));
    const double w = (x - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * values[i](0, 0) + w * values[i + 1](0, 0);
}

namespace {

void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

double ceiling_for(const CurvatureProfile& profile, const RiccatiOptions& opts) {
    if (profile.declared_bounds() && profile.declared_bounds()->c > 0.0)
        return opts.ceiling_factor * profile.declared_bounds()->c;
    return opts.absolute_ceiling;
}

StepControl step_control(const RiccatiOptions& opts, double grid_dt, double ceiling) {
    StepControl ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.max_step = grid_dt;
    ctl.blowup_ceiling = ceiling;
    return ctl;
}

int grid_points(const CurvatureProfile& profile, double span, const RiccatiOptions& opts) {
    int n;
    if (profile.is_periodic()) {
        const double periods = span / profile.period();
        n = static_cast<int>(std::ceil(opts.samples_per_period * periods));
    } else {
        n = static_cast<int>(std::ceil(opts.samples_per_unit * span));
    }
    n = std::max(n, 16);
    if (n % 2 == 1) ++n;  // even interval count for Simpson
    return n;
}

// March the Riccati flow across a uniform grid, landing on every grid point.
// direction=+1 integrates t0 -> t1 with increasing time; direction=-1 expects
// t0 > t1.  Samples are returned in integration order.
void march(const CurvatureProfile& profile, Eigen::MatrixXd& u, double t0, double t1,
           int n_intervals, const RiccatiOptions& opts,
           std::vector<double>& times, std::vector<Eigen::MatrixXd>& values) {
    const int d = profile.dimension();
    const double dt = (t1 - t0) / n_intervals;
    const double ceiling = ceiling_for(profile, opts);
    StepControl ctl = step_control(opts, std::abs(dt), ceiling);

    auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        if (d == 1) {
            dydt.resize(1);
            dydt[0] = -y[0] * y[0] - profile.k(t);
            return;
        }
        Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(y.data(), d, d);
        Eigen::MatrixXd dm = -(m * m) - profile.r(t);
        dydt = Eigen::Map<Eigen::VectorXd>(dm.data(), d * d);
    };

    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(u.data(), d * d);
    times.reserve(times.size() + n_intervals + 1);
    values.reserve(values.size() + n_intervals + 1);
    times.push_back(t0);
    values.push_back(u);
    for (int i = 1; i <= n_intervals; ++i) {
        const double ta = t0 + dt * (i - 1);
        const double tb = (i == n_intervals) ? t1 : t0 + dt * i;
        integrate_rk45(rhs, y, ta, tb, ctl);
        Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(y.data(), d, d);
        symmetrize(m);
        y = Eigen::Map<Eigen::VectorXd>(m.data(), d * d);
        times.push_back(tb);
        values.push_back(m);
    }
    u = values.back();
}

void finalize_diagnostics(RiccatiSolution& sol) {
    const auto& ts = sol.times;
    const auto& us = sol.values;
    double res = 0.0;
    for (std::size_t i = 1; i + 1 < us.size(); ++i) {
        const double hm = ts[i] - ts[i - 1];
        const double hp = ts[i + 1] - ts[i];
        // Nonuniform centered difference, exact for quadratics.
        Eigen::MatrixXd du = (hm / (hp * (hm + hp))) * us[i + 1] +
                             ((hp - hm) / (hp * hm)) * us[i] -
                             (hp / (hm * (hm + hp))) * us[i - 1];
        Eigen::MatrixXd r = du + us[i] * us[i] + sol.profile.r(ts[i]);
        res = std::max(res, r.norm());
    }
    sol.residual = res;

    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (const auto& m : us) {
        if (m.rows() == 1) {
            mn = std::min(mn, m(0, 0));
            mx = std::max(mx, m(0, 0));
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
            mn = std::min(mn, es.eigenvalues().minCoeff());
            mx = std::max(mx, es.eigenvalues().maxCoeff());
        }
    }
    sol.min_eigenvalue = mn;
    sol.max_eigenvalue = mx;
    if (sol.profile.is_periodic() && !us.empty())
        sol.periodicity_defect = (us.back() - us.front()).norm();
}

bool profile_is_flat(const CurvatureProfile& profile) {
    const double span = profile.is_periodic() ? profile.period()
                                              : std::min(profile.horizon(), 100.0);
    for (int i = 0; i <= 257; ++i) {
        const double t = span * double(i) / 257.0;
        if (profile.r(t).norm() > 1e-14) return false;
    }
    return true;
}

double settle_horizon_for(const CurvatureProfile& profile, const RiccatiOptions& opts) {
    if (opts.settle_horizon > 0.0) return opts.settle_horizon;
    const double b = profile.declared_bounds() ? profile.declared_bounds()->b : 0.0;
    return b > 0.0 ? 20.0 / b : 20.0;
}

RiccatiSolution periodic_branch(const CurvatureProfile& profile, const RiccatiOptions& opts,
                                bool unstable) {
    if (!profile.declared_bounds())
        throw NoConvergence("periodic branch construction requires declared pinching bounds");
    const auto bounds = *profile.declared_bounds();
    const int d = profile.dimension();
    const double tau = profile.period();

    RiccatiSolution sol;
    sol.profile = profile;
    sol.kind = unstable ? BranchKind::unstable : BranchKind::stable;

    if (profile_is_flat(profile)) {
        // Flat case: the branch collapses to U == 0 and the attraction is
        // only polynomial, so the fixed point is returned directly.
        const int n = grid_points(profile, tau, opts);
        sol.parabolic = true;
        for (int i = 0; i <= n; ++i) {
            sol.times.push_back(tau * double(i) / n);
            sol.values.push_back(Eigen::MatrixXd::Zero(d, d));
        }
        finalize_diagnostics(sol);
        return sol;
    }
    if (bounds.b <= 0.0)
        throw NoConvergence("profile is not strictly pinched (b = 0); no hyperbolic branch");

    const double sign = unstable ? 1.0 : -1.0;
    Eigen::MatrixXd u = sign * bounds.c * Eigen::MatrixXd::Identity(d, d);
    const int n = grid_points(profile, tau, opts);
    const int max_iter =
        std::max(4, static_cast<int>(std::ceil(settle_horizon_for(profile, opts) / tau)) + 8);

    std::vector<double> history;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::MatrixXd u_prev = u;
        std::vector<double> ts;
        std::vector<Eigen::MatrixXd> us;
        if (unstable)
            march(profile, u, 0.0, tau, n, opts, ts, us);
        else
            march(profile, u, tau, 0.0, n, opts, ts, us);
        const double defect = (u - u_prev).norm();
        history.push_back(defect);
        if (defect < opts.periodic_defect_tol) {
            // One clean pass from the converged value records the solution.
            sol.times.clear();
            sol.values.clear();
            Eigen::MatrixXd uc = u;
            if (unstable) {
                march(profile, uc, 0.0, tau, n, opts, sol.times, sol.values);
            } else {
                march(profile, uc, tau, 0.0, n, opts, sol.times, sol.values);
                std::reverse(sol.times.begin(), sol.times.end());
                std::reverse(sol.values.begin(), sol.values.end());
            }
            finalize_diagnostics(sol);
            return sol;
        }
        // Stall detection: defect no longer contracting.
        if (it > 6 && history[it] > 0.5 * history[it - 3])
            throw NoConvergence("periodicity defect stalled at " + std::to_string(defect),
                                history);
    }
    throw NoConvergence("periodicity defect above tolerance after " +
                            std::to_string(max_iter) + " period-map iterations",
                        history);
}

RiccatiSolution aperiodic_branch(const CurvatureProfile& profile, const RiccatiOptions& opts,
                                 bool unstable) {
    const double horizon = profile.horizon();
    const double settle = settle_horizon_for(profile, opts);
    if (!(horizon >= settle))
        throw NoConvergence("aperiodic profile horizon " + std::to_string(horizon) +
                            " shorter than settle horizon " + std::to_string(settle));
    const int d = profile.dimension();
    RiccatiSolution sol;
    sol.profile = profile;
    sol.kind = unstable ? BranchKind::unstable : BranchKind::stable;
    if (profile_is_flat(profile)) {
        const int n = grid_points(profile, horizon, opts);
        sol.parabolic = true;
        for (int i = 0; i <= n; ++i) {
            sol.times.push_back(horizon * double(i) / n);
            sol.values.push_back(Eigen::MatrixXd::Zero(d, d));
        }
        finalize_diagnostics(sol);
        return sol;
    }
    double c = profile.declared_bounds() ? profile.declared_bounds()->c : 0.0;
    if (c <= 0.0) c = std::max(1e-3, profile.scan_bounds().c);
    Eigen::MatrixXd u = (unstable ? 1.0 : -1.0) * c * Eigen::MatrixXd::Identity(d, d);
    const int n = grid_points(profile, horizon, opts);
    if (unstable) {
        march(profile, u, 0.0, horizon, n, opts, sol.times, sol.values);
    } else {
        march(profile, u, horizon, 0.0, n, opts, sol.times, sol.values);
        std::reverse(sol.times.begin(), sol.times.end());
        std::reverse(sol.values.begin(), sol.values.end());
    }
    finalize_diagnostics(sol);
    return sol;
}

}  // namespace

RiccatiSolution integrate_riccati(const CurvatureProfile& profile,
                                  const Eigen::MatrixXd& u0, double t0, double t1,
                                  const RiccatiOptions& opts) {
    if (!(t0 < t1)) throw Error("integrate_riccati requires t0 < t1");
    if ((u0 - u0.transpose()).norm() > 1e-10 * (1.0 + u0.norm()))
        throw Error("initial Riccati value must be symmetric");
    RiccatiSolution sol;
    sol.profile = profile;
    Eigen::MatrixXd u = 0.5 * (u0 + u0.transpose());
    const int n = grid_points(profile, t1 - t0, opts);
    march(profile, u, t0, t1, n, opts, sol.times, sol.values);
    finalize_diagnostics(sol);
    return sol;
}

RiccatiSolution integrate_riccati(const CurvatureProfile& profile, double u0,
                                  double t0, double t1, const RiccatiOptions& opts) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = u0;
    return integrate_riccati(profile, m, t0, t1, opts);
}

RiccatiSolution unstable_solution(const CurvatureProfile& profile,
                                  const RiccatiOptions& opts) {
    return profile.is_periodic() ? periodic_branch(profile, opts, true)
                                 : aperiodic_branch(profile, opts, true);
}

RiccatiSolution stable_solution(const CurvatureProfile& profile,
                                const RiccatiOptions& opts) {
    return profile.is_periodic() ? periodic_branch(profile, opts, false)
                                 : aperiodic_branch(profile, opts, false);
}

LyapunovReport lyapunov_exponent_periodic(const RiccatiSolution& sol) {
    const auto& profile = sol.profile;
    if (!profile.is_periodic())
        throw Error("lyapunov_exponent_periodic requires a periodic profile");
    const double tau = profile.period();
    const double dt = sol.times[1] - sol.times[0];
    const int d = profile.dimension();

    LyapunovReport rep;
    rep.parabolic = sol.parabolic;

    std::vector<double> tr(sol.values.size());
    for (std::size_t i = 0; i < sol.values.size(); ++i) tr[i] = sol.values[i].trace();
    rep.trace_average = simpson(tr, dt) / tau;

    if (d == 1) {
        rep.chi_plus = rep.trace_average;
        rep.exponents = {rep.chi_plus};
    } else {
        rep.chi_plus = rep.trace_average / d;
        std::vector<std::vector<double>> eig(d, std::vector<double>(sol.values.size()));
        for (std::size_t i = 0; i < sol.values.size(); ++i) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.values[i]);
            for (int j = 0; j < d; ++j) eig[j][i] = es.eigenvalues()[j];
        }
        rep.exponents.resize(d);
        for (int j = 0; j < d; ++j) rep.exponents[j] = simpson(eig[j], dt) / tau;
        std::sort(rep.exponents.begin(), rep.exponents.end());
    }

    std::vector<double> mk(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        mk[i] = profile.mean_curvature(sol.times[i]);
    const double mean_k = simpson(mk, dt) / tau;
    rep.mean_curvature_bound = std::sqrt(std::max(0.0, -mean_k));
    rep.gap = rep.mean_curvature_bound - rep.chi_plus;
    return rep;
}

LyapunovReport lyapunov_exponent_periodic(const CurvatureProfile& profile,
                                          const RiccatiOptions& opts) {
    return lyapunov_exponent_periodic(unstable_solution(profile, opts));
}

double jacobi_growth_oracle(const CurvatureProfile& profile, double horizon,
                            const RiccatiOptions& opts) {
    const int d = profile.dimension();
    double seed = 1.0;
    if (profile.declared_bounds() && profile.declared_bounds()->c > 0.0)
        seed = profile.declared_bounds()->c;

    // State is (Y, Y') flattened.
    auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        dydt.resize(2 * d * d);
        if (d == 1) {
            dydt[0] = y[1];
            dydt[1] = -profile.k(t) * y[0];
            return;
        }
        Eigen::MatrixXd Y = Eigen::Map<const Eigen::MatrixXd>(y.data(), d, d);
        Eigen::MatrixXd Yp = Eigen::Map<const Eigen::MatrixXd>(y.data() + d * d, d, d);
        Eigen::MatrixXd Ypp = -profile.r(t) * Y;
        dydt.segment(0, d * d) = Eigen::Map<Eigen::VectorXd>(Yp.data(), d * d);
        dydt.segment(d * d, d * d) = Eigen::Map<Eigen::VectorXd>(Ypp.data(), d * d);
    };

    Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * d * d);
    Eigen::Map<Eigen::MatrixXd>(y.data(), d, d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::Map<Eigen::MatrixXd>(y.data() + d * d, d, d) =
        seed * Eigen::MatrixXd::Identity(d, d);

    StepControl ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.max_step = 0.05;

    // Renormalize at checkpoints commensurate with the period so the
    // periodic factor in the solution cancels between checkpoints.
    const double block = profile.is_periodic() ? profile.period() : 1.0;
    const int n_blocks = std::max(2, static_cast<int>(std::round(horizon / block)));
    const double T = n_blocks * block;

    double log_norm = 0.0;
    std::vector<double> log_at;  // accumulated log ||(Y, Y')|| at checkpoints
    log_at.push_back(0.0);
    double t = 0.0;
    const double y0_norm = y.norm();
    for (int i = 1; i <= n_blocks; ++i) {
        integrate_rk45(rhs, y, t, i * block, ctl);
        t = i * block;
        const double nrm = y.norm();
        log_norm += std::log(nrm / y0_norm);
        y *= y0_norm / nrm;
        log_at.push_back(log_norm);
    }

    // Slope over the tail half: (log N(T) - log N(T0)) / (T - T0).
    const int i0 = n_blocks / 2;
    const double t0 = i0 * block;
    if (T - t0 <= 0.0) throw ToleranceFailure("oracle horizon too short");
    return (log_at[n_blocks] - log_at[i0]) / (T - t0);
}

TraceFloorReport trace_floor_check(const RiccatiSolution& sol, double b,
                                   double hypothesis_tol) {
    const auto& profile = sol.profile;
    const double tau = profile.period();
    const double dt = sol.times[1] - sol.times[0];
    const int d = profile.dimension();

    TraceFloorReport rep;
    rep.b = b;
    std::vector<double> tr(sol.values.size());
    for (std::size_t i = 0; i < sol.values.size(); ++i) tr[i] = sol.values[i].trace();
    rep.mean_trace = simpson(tr, dt) / tau;

    double excess = -std::numeric_limits<double>::infinity();
    for (double v : tr) excess = std::max(excess, v - d * b);
    rep.pointwise_trace_excess = excess;

    rep.hypothesis_met = rep.mean_trace - d * b < hypothesis_tol;
    if (rep.hypothesis_met) {
        double dev = 0.0;
        for (double t : sol.times)
            dev = std::max(dev, std::abs(profile.mean_curvature(t) + b * b));
        rep.ricci_deviation = dev;
    }
    return rep;
}

TraceFloorReport trace_floor_check(const CurvatureProfile& profile, double b,
                                   const RiccatiOptions& opts, double hypothesis_tol) {
    return trace_floor_check(unstable_solution(profile, opts), b, hypothesis_tol);
}

MomentChainReport trace_moment_chain(const RiccatiSolution& sol, double c, double tol) {
    const auto& profile = sol.profile;
    const double tau = profile.period();
    const double dt = sol.times[1] - sol.times[0];
    const int d = profile.dimension();

    const std::size_t n = sol.values.size();
    std::vector<double> tr(n), tr_sq(n), tr_usq(n), ric(n);
    for (std::size_t i = 0; i < n; ++i) {
        tr[i] = sol.values[i].trace();
        tr_sq[i] = tr[i] * tr[i];
        tr_usq[i] = (sol.values[i] * sol.values[i]).trace();
        ric[i] = profile.mean_curvature(sol.times[i]);
    }

    MomentChainReport rep;
    rep.c = c;
    rep.A = simpson(tr, dt) / tau;
    rep.B = std::sqrt(std::max(0.0, simpson(tr_sq, dt) / tau));
    rep.C = std::sqrt(std::max(0.0, d * simpson(tr_usq, dt) / tau));
    rep.D = std::sqrt(std::max(0.0, -double(d) * double(d) * simpson(ric, dt) / tau));
    rep.end_bound = d * c;

    struct Link {
        const char* name;
        double violation;
    };
    const Link links[] = {
        {"A<=B", rep.A - rep.B},
        {"B<=C", rep.B - rep.C},
        {"C=D", std::abs(rep.C - rep.D)},
        {"D<=(n-1)c", rep.D - rep.end_bound},
    };
    double worst = 0.0;
    for (const auto& l : links) {
        worst = std::max(worst, l.violation);
        if (l.violation > tol) throw ChainViolation(l.name, l.violation);
    }
    rep.max_violation = worst;
    // In dimension 1 the B <= C link is an identity, so strictness there is
    // only demanded of genuine matrix profiles.
    rep.all_links_strict = (rep.B - rep.A > tol) && (rep.end_bound - rep.D > tol) &&
                           (d == 1 || rep.C - rep.B > tol);
    return rep;
}

MomentChainReport trace_moment_chain(const CurvatureProfile& profile, double c,
                                     const RiccatiOptions& opts, double tol) {
    return trace_moment_chain(unstable_solution(profile, opts), c, tol);
}

}  // namespace geoflow
