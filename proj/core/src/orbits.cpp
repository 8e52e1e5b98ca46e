#include "geoflow/orbits.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

/// Project a universal-cover phase point into the fundamental domain.
PhasePoint project_phase(const FuchsianGroup& group, Complex z, double angle) {
    auto [z0, h] = group.project(z);
    const Complex dir = h.derivative(z) * std::polar(1.0, angle);
    return {z0, std::arg(dir)};
}

struct SegmentResult {
    PhasePoint end;
    std::string word;
    Complex end_velocity_chart;  // chart velocity at the endpoint
};

SegmentResult flow_segment(const ConformalMetric& metric, const PhasePoint& s, double dt,
                           const FlowOptions& fopts) {
    const Trajectory tr = flow(metric, s, dt, fopts);
    SegmentResult res;
    res.end = tr.state_at_end();
    res.word = tr.deck_word;
    const double speed = std::exp(-metric.sigma(res.end.position));
    res.end_velocity_chart = speed * std::polar(1.0, res.end.angle);
    return res;
}

bool is_cyclic_rotation(const std::string& w, const std::string& of) {
    if (w.size() != of.size()) return false;
    const std::string doubled = of + of;
    return doubled.find(w) != std::string::npos;
}

}  // namespace

PeriodicOrbit refine_orbit(const ConformalMetric& metric, const GeodesicClass& seed,
                           const ShootingOptions& opts) {
    const auto& group = metric.group();
    const int m = std::max(2, static_cast<int>(std::ceil(seed.length / 1.0)));
    const int n_unknowns = 3 * m + 1;

    // Seed segment starts along the axis of the unperturbed class transform.
    const auto axis = axis_points(seed.transform, m);
    std::vector<PhasePoint> pts(m);
    for (int i = 0; i < m; ++i)
        pts[i] = project_phase(group, axis[i].first, std::arg(axis[i].second));
    double period = seed.length;

    // Phase condition data: the first segment start may move only on the
    // line through the seed point transversal to the seed direction.
    const Complex anchor = pts[0].position;
    const Complex tangent = std::polar(1.0, pts[0].angle);

    FlowOptions fopts = opts.flow;

    auto residual = [&](const std::vector<PhasePoint>& s, double T,
                        std::vector<SegmentResult>* segs = nullptr) {
        Eigen::VectorXd r(n_unknowns);
        for (int i = 0; i < m; ++i) {
            const auto seg = flow_segment(metric, s[i], T / m, fopts);
            const auto& nxt = s[(i + 1) % m];
            r[3 * i + 0] = seg.end.position.real() - nxt.position.real();
            r[3 * i + 1] = seg.end.position.imag() - nxt.position.imag();
            r[3 * i + 2] = wrap_angle(seg.end.angle - nxt.angle);
            if (segs) segs->push_back(seg);
        }
        const Complex d = s[0].position - anchor;
        r[3 * m] = d.real() * tangent.real() + d.imag() * tangent.imag();
        return r;
    };

    std::vector<double> history;
    Eigen::VectorXd r = residual(pts, period);
    history.push_back(r.norm());

    int iters = 0;
    for (; iters < opts.max_newton_iters && history.back() > 0.25 * opts.closure_tol;
         ++iters) {
        // Finite-difference Jacobian; each unknown only affects its own
        // segment block (plus the identity coupling already in the residual).
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_unknowns, n_unknowns);
        for (int i = 0; i < m; ++i) {
            const auto base = flow_segment(metric, pts[i], period / m, fopts);
            for (int k = 0; k < 3; ++k) {
                PhasePoint p = pts[i];
                if (k == 0) p.position += Complex(opts.fd_step, 0.0);
                if (k == 1) p.position += Complex(0.0, opts.fd_step);
                if (k == 2) p.angle += opts.fd_step;
                const auto pert = flow_segment(metric, p, period / m, fopts);
                const int col = 3 * i + k;
                J(3 * i + 0, col) =
                    (pert.end.position.real() - base.end.position.real()) / opts.fd_step;
                J(3 * i + 1, col) =
                    (pert.end.position.imag() - base.end.position.imag()) / opts.fd_step;
                J(3 * i + 2, col) = wrap_angle(pert.end.angle - base.end.angle) / opts.fd_step;
            }
            // -identity block toward the next segment start.
            const int nxt = (i + 1) % m;
            J(3 * i + 0, 3 * nxt + 0) -= 1.0;
            J(3 * i + 1, 3 * nxt + 1) -= 1.0;
            J(3 * i + 2, 3 * nxt + 2) -= 1.0;
            // Period column: d(end)/dT = (1/m) * phase velocity at the endpoint.
            const Complex v = base.end_velocity_chart;
            const Complex z = base.end.position;
            const Complex g = metric.sigma_gradient(z);
            const double gv = g.real() * v.real() + g.imag() * v.imag();
            const Complex acc = -2.0 * gv * v + std::norm(v) * g;
            // dpsi/dt = Im(conj(v) v') / |v|^2
            const double dpsi = (v.real() * acc.imag() - v.imag() * acc.real()) / std::norm(v);
            J(3 * i + 0, 3 * m) = v.real() / m;
            J(3 * i + 1, 3 * m) = v.imag() / m;
            J(3 * i + 2, 3 * m) = dpsi / m;
        }
        // Phase condition row.
        J(3 * m, 0) = tangent.real();
        J(3 * m, 1) = tangent.imag();

        const Eigen::VectorXd step = J.partialPivLu().solve(-r);

        double damping = 1.0;
        while (true) {
            std::vector<PhasePoint> trial = pts;
            for (int i = 0; i < m; ++i) {
                trial[i].position += damping * Complex(step[3 * i], step[3 * i + 1]);
                trial[i].angle += damping * step[3 * i + 2];
            }
            const double trial_T = period + damping * step[3 * m];
            if (trial_T <= 0.0) {
                damping *= 0.5;
                if (damping < opts.min_damping)
                    throw NoConvergence("shooting period collapsed", history);
                continue;
            }
            bool valid = true;
            for (const auto& p : trial)
                if (!group.in_fundamental_domain(p.position)) valid = false;
            Eigen::VectorXd r_trial;
            if (valid) r_trial = residual(trial, trial_T);
            if (valid && r_trial.norm() < history.back() * (1.0 - 0.25 * damping) + 1e-15) {
                pts = trial;
                period = trial_T;
                r = r_trial;
                break;
            }
            damping *= 0.5;
            if (damping < opts.min_damping)
                throw NoConvergence("shooting line search stalled at residual " +
                                        std::to_string(history.back()),
                                    history);
        }
        history.push_back(r.norm());
    }
    if (history.back() > 0.25 * opts.closure_tol)
        throw NoConvergence("shooting did not reach closure tolerance", history);

    // Certification: one full loop from the first segment start.
    FlowOptions cert = fopts;
    const Trajectory loop = flow(metric, pts[0], period, cert);
    const PhasePoint end = loop.state_at_end();
    const double defect =
        std::hypot(std::abs(end.position - pts[0].position), wrap_angle(end.angle - pts[0].angle));
    if (defect > opts.closure_tol)
        throw NoConvergence("certification loop defect " + std::to_string(defect), history);

    const std::string loop_word = group.reduce_word(loop.deck_word);
    if (!is_cyclic_rotation(loop_word, seed.word) &&
        group.canonical_class_word(loop_word) != seed.word)
        throw WrongDeckWord(seed.word, loop_word);

    PeriodicOrbit orbit;
    orbit.cls = seed;
    orbit.period = period;
    orbit.start = pts[0];
    orbit.closure_defect = defect;
    orbit.deck_word = loop_word;
    orbit.profile = curvature_along(metric, loop, /*periodic=*/true);
    orbit.newton_iterations = iters;
    return orbit;
}

LyapunovReport orbit_exponent(const ConformalMetric& metric, PeriodicOrbit& orbit,
                              double oracle_periods, std::optional<PinchingBounds> bounds,
                              const RiccatiOptions& ropts) {
    CurvatureProfile profile = orbit.profile;
    if (bounds)
        profile = profile.with_bounds(*bounds);
    else if (!profile.declared_bounds())
        profile = profile.with_bounds(profile.scan_bounds());

    auto rep = lyapunov_exponent_periodic(profile, ropts);
    const double horizon = oracle_periods * orbit.period;
    rep.oracle_chi = jacobi_growth_oracle(profile, horizon, ropts);
    rep.oracle_discrepancy = std::abs(rep.chi_plus - *rep.oracle_chi);
    orbit.profile = profile;
    orbit.exponent_report = rep;
    return rep;
}

}  // namespace geoflow
