#include "geoflow/flow.hpp"

#include <cmath>

#include "geoflow/errors.hpp"
#include "geoflow/rk45.hpp"

namespace geoflow {

namespace {

// State layout: (x, y, vx, vy) with v the chart velocity; metric unit speed
// means e^{sigma} |v| = 1.
struct FlowSystem {
    const ConformalMetric& metric;

    void operator()(double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) const {
        const Complex z(y[0], y[1]);
        const Complex v(y[2], y[3]);
        const Complex g = metric.sigma_gradient(z);
        const double gv = g.real() * v.real() + g.imag() * v.imag();
        const double v2 = std::norm(v);
        // geodesic equation of a conformal metric: v' = -2 (grad.v) v + |v|^2 grad
        const Complex acc = -2.0 * gv * v + v2 * g;
        dydt.resize(4);
        dydt[0] = v.real();
        dydt[1] = v.imag();
        dydt[2] = acc.real();
        dydt[3] = acc.imag();
    }
};

Eigen::VectorXd pack(const ConformalMetric& metric, const PhasePoint& p) {
    const double speed = std::exp(-metric.sigma(p.position));  // |v| for unit metric speed
    Eigen::VectorXd y(4);
    y[0] = p.position.real();
    y[1] = p.position.imag();
    y[2] = speed * std::cos(p.angle);
    y[3] = speed * std::sin(p.angle);
    return y;
}

Complex pos_of(const Eigen::VectorXd& y) { return {y[0], y[1]}; }
Complex vel_of(const Eigen::VectorXd& y) { return {y[2], y[3]}; }

}  // namespace

Trajectory flow(const ConformalMetric& metric, const PhasePoint& start, double time,
                const FlowOptions& opts) {
    if (time < 0.0) throw Error("flow requires time >= 0");
    const auto& group = metric.group();
    if (!group.in_fundamental_domain(start.position))
        throw Error("flow start must lie in the fundamental domain");

    FlowSystem sys{metric};
    StepControl ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.max_step = opts.max_step;

    Trajectory traj;
    Eigen::VectorXd y = pack(metric, start);
    double t = 0.0;
    traj.samples.push_back({0.0, start.position, start.angle, 0});

    double max_drift = 0.0;
    auto renormalize = [&](Eigen::VectorXd& state) {
        const Complex z = pos_of(state);
        const Complex v = vel_of(state);
        const double speed = std::exp(metric.sigma(z)) * std::abs(v);
        max_drift = std::max(max_drift, std::abs(speed - 1.0));
        state[2] /= speed;
        state[3] /= speed;
    };

    // Advance by dt from state; returns the state at dt (no wall handling).
    auto advance = [&](Eigen::VectorXd state, double t0, double dt) {
        if (dt > 0.0) integrate_rk45(sys, state, t0, t0 + dt, ctl);
        return state;
    };

    if (time == 0.0) {
        traj.total_time = 0.0;
        return traj;
    }

    while (t < time - 1e-15) {
        const double dt = std::min(opts.output_dt, time - t);
        Eigen::VectorXd y_next = advance(y, t, dt);

        const int wall = group.wall_hit(pos_of(y_next));
        if (wall < 0) {
            t += dt;
            y = y_next;
            renormalize(y);
            traj.samples.push_back({t, pos_of(y), std::arg(vel_of(y)), traj.deck_word.size()});
        } else {
            // Bisect the crossing time within [0, dt] on "inside any wall";
            // near a vertex this lands on whichever wall is entered first.
            double lo = 0.0, hi = dt;
            Eigen::VectorXd y_hi = y_next;
            int hit = wall;
            for (int it = 0; it < 80 && hi - lo > opts.crossing_tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                Eigen::VectorXd y_mid = advance(y, t, mid);
                const int mid_hit = group.wall_hit(pos_of(y_mid));
                if (mid_hit >= 0) {
                    hi = mid;
                    y_hi = y_mid;
                    hit = mid_hit;
                } else {
                    lo = mid;
                }
            }
            const auto& w = group.walls()[hit];
            // Apply the pairing transform at the crossing state.
            const Complex zc = pos_of(y_hi);
            const Complex vc = vel_of(y_hi);
            const MobiusTransform deck = group.generator(w.letter).inverse();
            const Complex z_new = deck.apply(zc);
            const Complex v_new = deck.derivative(zc) * vc;
            t += hi;
            y[0] = z_new.real();
            y[1] = z_new.imag();
            y[2] = v_new.real();
            y[3] = v_new.imag();
            renormalize(y);
            traj.deck_word.push_back(w.letter);
            traj.samples.push_back({t, pos_of(y), std::arg(vel_of(y)), traj.deck_word.size()});
        }

        if (opts.stop_at_core_exit && !group.in_core(pos_of(y))) {
            traj.escaped = true;
            traj.escape_time = t;
            break;
        }
    }

    traj.total_time = t;
    traj.speed_drift = max_drift / std::max(opts.output_dt, 1e-12);
    return traj;
}

CurvatureProfile curvature_along(const ConformalMetric& metric, const Trajectory& traj,
                                 bool periodic) {
    if (traj.samples.size() < 2)
        return CurvatureProfile::constant(metric.base_curvature());
    std::vector<double> ts, ks;
    ts.reserve(traj.samples.size());
    ks.reserve(traj.samples.size());
    double last_t = -1.0;
    for (const auto& s : traj.samples) {
        if (s.t <= last_t + 1e-15) continue;  // skip duplicate crossing stamps
        last_t = s.t;
        ts.push_back(s.t);
        ks.push_back(metric.gaussian_curvature(s.z));
    }
    auto p = CurvatureProfile::sampled(ts, ks, periodic);
    return p;
}

}  // namespace geoflow
