#include "geoflow/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

struct OrbitOutcome {
    bool ok = false;
    OrbitRow row;
    OrbitChains chains;
    CurvatureProfile profile;
    std::string failure;
};

OrbitOutcome process_class(const ConformalMetric& metric, const GeodesicClass& cls,
                           const PinchingBounds& bounds, const RigidityOptions& opts) {
    OrbitOutcome out;
    try {
        PeriodicOrbit orbit = refine_orbit(metric, cls, opts.shooting);
        orbit_exponent(metric, orbit, opts.oracle_periods, bounds, opts.riccati);

        const auto unstable = unstable_solution(orbit.profile, opts.riccati);

        OrbitRow row;
        row.word = cls.word;
        row.class_length = cls.length;
        row.period = orbit.period;
        row.chi_plus = orbit.exponent_report.chi_plus;
        const double bound = orbit.exponent_report.mean_curvature_bound;
        row.mean_curvature = -bound * bound;
        row.gap = orbit.exponent_report.gap;
        row.closure_defect = orbit.closure_defect;
        row.oracle_discrepancy = orbit.exponent_report.oracle_discrepancy.value_or(0.0);
        row.u_min = unstable.min_eigenvalue;
        row.u_max = unstable.max_eigenvalue;
        const auto prof_bounds = orbit.profile.scan_bounds();
        row.k_min = -prof_bounds.c * prof_bounds.c;
        row.k_max = -prof_bounds.b * prof_bounds.b;
        row.touches_bumps = std::abs(row.k_max - row.k_min) > 1e-9;

        OrbitChains chains;
        chains.floor = trace_floor_check(unstable, bounds.b);
        chains.moments = trace_moment_chain(unstable, bounds.c);

        out.ok = true;
        out.row = row;
        out.chains = chains;
        out.profile = orbit.profile;
    } catch (const Error& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace

RigidityReport rigidity_experiment(const ConformalMetric& metric, int max_word_length,
                                   const RigidityOptions& opts) {
    RigidityReport report;
    report.epsilon = metric.epsilon();
    report.bounds = metric.curvature_bounds();
    report.curvature_spread =
        report.bounds.c * report.bounds.c - report.bounds.b * report.bounds.b;

    const auto census = metric.group().enumerate_classes(max_word_length);
    std::vector<OrbitOutcome> outcomes(census.size());

    const int threads = std::max(1, opts.threads);
    if (threads == 1 || census.size() < 2) {
        for (std::size_t i = 0; i < census.size(); ++i)
            outcomes[i] = process_class(metric, census[i], report.bounds, opts);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= census.size()) return;
                    outcomes[i] = process_class(metric, census[i], report.bounds, opts);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    double chi_lo = std::numeric_limits<double>::infinity(), chi_hi = -chi_lo;
    double gap_lo = chi_lo, gap_hi = -chi_lo;
    for (std::size_t i = 0; i < census.size(); ++i) {
        auto& oc = outcomes[i];
        if (!oc.ok) {
            report.failures.emplace_back(census[i].word, oc.failure);
            continue;
        }
        chi_lo = std::min(chi_lo, oc.row.chi_plus);
        chi_hi = std::max(chi_hi, oc.row.chi_plus);
        gap_lo = std::min(gap_lo, oc.row.gap);
        gap_hi = std::max(gap_hi, oc.row.gap);
        report.rows.push_back(std::move(oc.row));
        report.chains.push_back(std::move(oc.chains));
        report.profiles.push_back(std::move(oc.profile));
    }
    if (!report.rows.empty()) {
        report.exponent_spread = chi_hi - chi_lo;
        report.min_gap = gap_lo;
        report.max_gap = gap_hi;
    }
    return report;
}

ExtremalOrbitCheck extremal_forcing_check(const RiccatiSolution& unstable, double alpha,
                                          double hypothesis_tol, double floor_tol) {
    ExtremalOrbitCheck check;
    const auto& profile = unstable.profile;
    const double tau = profile.period();
    const double dt = unstable.times[1] - unstable.times[0];
    const int d = profile.dimension();

    std::vector<double> tr(unstable.values.size());
    for (std::size_t i = 0; i < unstable.values.size(); ++i)
        tr[i] = unstable.values[i].trace();
    const double mean = simpson(tr, dt) / tau / d;

    check.hypothesis_slack = std::abs(mean - alpha);
    check.hypothesis_met = check.hypothesis_slack < hypothesis_tol;
    check.pinching_breach = unstable.min_eigenvalue < alpha - std::max(floor_tol, 1e-12) &&
                            check.hypothesis_met;

    double u_dev = 0.0, k_dev = 0.0;
    for (std::size_t i = 0; i < unstable.values.size(); ++i) {
        u_dev = std::max(u_dev, std::abs(unstable.values[i](0, 0) - alpha));
        k_dev = std::max(k_dev,
                         std::abs(profile.mean_curvature(unstable.times[i]) + alpha * alpha));
    }
    check.sup_u_dev = u_dev;
    check.sup_k_dev = k_dev;
    return check;
}

ExtremalReport pinched_extremal_check(const RigidityReport& report, char alpha_kind,
                                      double hypothesis_tol, const RiccatiOptions& ropts) {
    if (alpha_kind != 'b' && alpha_kind != 'c')
        throw Error("alpha must be 'b' or 'c'");
    ExtremalReport out;
    out.alpha_kind = alpha_kind;
    out.alpha = alpha_kind == 'b' ? report.bounds.b : report.bounds.c;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto unstable = unstable_solution(report.profiles[i], ropts);
        auto check = extremal_forcing_check(unstable, out.alpha, hypothesis_tol);
        check.word = report.rows[i].word;
        if (check.hypothesis_met) ++out.orbits_passing;
        out.checks.push_back(std::move(check));
    }
    return out;
}

std::pair<double, double> fit_growth_exponent(const std::vector<double>& lengths,
                                              double fit_cutoff) {
    std::vector<double> sorted(lengths);
    std::sort(sorted.begin(), sorted.end());
    // cumulative spectrum points (T_i, N(T_i)), restricted to the complete part
    std::vector<double> ts, logn;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] > fit_cutoff) break;
        if (i + 1 < sorted.size() && sorted[i + 1] - sorted[i] < 1e-9) continue;
        ts.push_back(sorted[i]);
        logn.push_back(std::log(double(i + 1)));
    }
    if (ts.size() < 4) throw Error("too few census lengths for a growth fit");
    // drop the small-N head
    const std::size_t skip = ts.size() / 4;
    ts.erase(ts.begin(), ts.begin() + skip);
    logn.erase(logn.begin(), logn.begin() + skip);

    auto sse = [&](double delta) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double model = delta * ts[i] - std::log(delta * ts[i]);
            acc += (logn[i] - model) * (logn[i] - model);
        }
        return acc;
    };
    double a = 0.01, b = 3.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = sse(c1), f2 = sse(c2);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            b = c2; c2 = c1; f2 = f1;
            c1 = b - gr * (b - a); f1 = sse(c1);
        } else {
            a = c1; c1 = c2; f1 = f2;
            c2 = a + gr * (b - a); f2 = sse(c2);
        }
    }
    const double delta = 0.5 * (a + b);
    return {delta, std::sqrt(sse(delta) / double(ts.size()))};
}

EntropyReport entropy_experiment(const ConformalMetric& metric, std::size_t mc_samples,
                                 double horizon, int max_word_length, std::uint64_t seed,
                                 const EntropyOptions& opts) {
    if (mc_samples == 0) throw InsufficientSamples(0, 0);
    const auto& group = metric.group();

    EntropyReport report;
    report.drawn_samples = mc_samples;
    report.infinite_area_caveat = !group.core_gates().empty();

    const PinchingBounds bounds = metric.curvature_bounds();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-0.85, 0.85);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    FlowOptions fopts = opts.flow;
    fopts.stop_at_core_exit = true;

    std::vector<double> estimates;
    double resident_sum = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        // uniform over a chart region of the core x angle (rejection)
        Complex z;
        int guard = 0;
        do {
            z = Complex(coord(rng), coord(rng));
            if (++guard > 10000) throw Error("core sampling region rejection stalled");
        } while (!group.in_core(z));
        const double psi = angle(rng);

        const Trajectory traj = flow(metric, {z, psi}, horizon, fopts);
        const double resident = traj.total_time;
        if (resident < opts.min_resident) continue;
        resident_sum += resident;

        auto profile = curvature_along(metric, traj, /*periodic=*/false).with_bounds(bounds);
        RiccatiOptions ropts = opts.riccati;
        ropts.settle_horizon = std::min(2.0, 0.5 * resident);
        const auto u = unstable_solution(profile, ropts);
        const double dt = u.times[1] - u.times[0];
        std::vector<double> uv(u.values.size());
        for (std::size_t k = 0; k < u.values.size(); ++k) uv[k] = u.values[k](0, 0);
        estimates.push_back(simpson(uv, dt) / (u.times.back() - u.times.front()));
    }

    report.usable_samples = estimates.size();
    const std::size_t need = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(opts.usable_fraction * double(mc_samples))));
    if (estimates.size() < need)
        throw InsufficientSamples(estimates.size(), mc_samples);

    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= double(estimates.size());
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var = estimates.size() > 1 ? var / double(estimates.size() - 1) : 0.0;
    report.liouville_entropy = mean;
    report.liouville_stderr = std::sqrt(var / double(estimates.size()));
    report.mean_resident_time = resident_sum / double(estimates.size());

    // Growth side: census length spectrum, complete below the shortest class
    // needing one more letter.
    const auto census = metric.group().enumerate_classes(max_word_length);
    const auto census_next = metric.group().enumerate_classes(max_word_length + 1);
    double cutoff = std::numeric_limits<double>::infinity();
    for (const auto& cls : census_next)
        if (static_cast<int>(cls.word.size()) == max_word_length + 1)
            cutoff = std::min(cutoff, cls.length);
    std::vector<double> lengths;
    lengths.reserve(census.size());
    for (const auto& cls : census) lengths.push_back(cls.length);
    report.census_classes = census.size();
    report.fit_cutoff_length = cutoff;
    auto [delta, rms] = fit_growth_exponent(lengths, cutoff);
    report.orbit_growth_exponent = delta;
    report.growth_fit_rms = rms;
    return report;
}

}  // namespace geoflow
