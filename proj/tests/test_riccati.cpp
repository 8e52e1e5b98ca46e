#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geoflow/errors.hpp"
#include "geoflow/profile.hpp"
#include "geoflow/riccati.hpp"
#include "support/test_oracles.hpp"

using namespace geoflow;

namespace {

CurvatureProfile sinusoid_profile() {
    // K(t) = -1 - 0.5 sin(2 pi t), period 1
    return CurvatureProfile::fourier(-1.0, {}, {-0.5}, 1.0);
}

double sin_k(double t) { return -1.0 - 0.5 * std::sin(2.0 * std::numbers::pi * t); }

}  // namespace

// Frozen oracle values for the sinusoidal profile, computed with the
// independent fixed-step RK4 oracle in support/test_oracles.hpp (settle 200,
// h = 2e-6; digits stable under h, seed and settle refinement).
static constexpr double kSinChi = 0.998561164984;
static constexpr double kSinGap = 0.001438835016;
static constexpr double kSinU[5] = {0.926130059316, 0.998107005419, 1.070638201037,
                                    1.043327986747, 0.954602572431};

TEST_CASE("constant profile fixed points") {
    auto p = CurvatureProfile::constant(-1.0);
    auto sol = integrate_riccati(p, 1.0, 0.0, 10.0);
    for (std::size_t i = 0; i < sol.values.size(); ++i)
        CHECK(std::abs(sol.u(i) - 1.0) < 1e-12);
    CHECK(sol.residual < 1e-10);

    // The stable fixed point u = -1 is repelling forward in time; round-off
    // seeds e^{2t} drift, so it only persists over moderate horizons.
    auto sol2 = integrate_riccati(p, -1.0, 0.0, 10.0);
    for (std::size_t i = 0; i < sol2.values.size(); ++i)
        CHECK(std::abs(sol2.u(i) + 1.0) < 1e-5);
}

TEST_CASE("flat profile closed form and blow-up") {
    auto p = CurvatureProfile::constant(0.0);
    auto sol = integrate_riccati(p, 1.0, 0.0, 10.0);
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        CHECK(std::abs(sol.u(i) - 1.0 / (1.0 + sol.times[i])) < 1e-9);

    // u' = -u^2 from u = -1 has the pole u(t) = -1/(1 - t) at t* = 1.
    bool blew_up = false;
    try {
        integrate_riccati(p, -1.0, 0.0, 10.0);
    } catch (const BlowUpError& e) {
        blew_up = true;
        CHECK(e.t_star == doctest::Approx(1.0).epsilon(0.01));
    }
    CHECK(blew_up);
}

TEST_CASE("unstable branch: constant profiles") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto p = CurvatureProfile::constant(-a * a);
        auto sol = unstable_solution(p);
        CHECK(sol.periodicity_defect < 1e-10);
        for (std::size_t i = 0; i < sol.values.size(); ++i)
            CHECK(std::abs(sol.u(i) - a) < 1e-10);
        auto st = stable_solution(p);
        for (std::size_t i = 0; i < st.values.size(); ++i)
            CHECK(std::abs(st.u(i) + a) < 1e-10);
    }
}

TEST_CASE("unstable branch: sinusoidal profile matches the settle oracle") {
    auto p = sinusoid_profile();
    auto sol = unstable_solution(p);
    CHECK(sol.kind == BranchKind::unstable);
    CHECK(sol.periodicity_defect < 1e-10);
    CHECK(sol.residual < 1e-5);

    // Frozen oracle samples at t = 0, 0.2, ..., 0.8 (tolerance covers the
    // linear interpolation between grid samples).
    for (int i = 0; i < 5; ++i)
        CHECK(sol.u_at(0.2 * i) == doctest::Approx(kSinU[i]).epsilon(2e-7));

    // Band predicted by pinching: spectrum of -K is [0.5, 1.5].
    CHECK(sol.min_eigenvalue > 0.5);
    CHECK(sol.max_eigenvalue < 1.5);

    // Live independent oracle (fixed-step RK4, long settle).
    std::vector<double> grid = {0.1, 0.35, 0.77};
    auto oracle = test_oracle::periodic_riccati_samples(sin_k, 1.0, 2.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(sol.u_at(grid[i]) == doctest::Approx(oracle[i]).epsilon(1e-7));
}

TEST_CASE("stable branch of the sinusoid stays in the mirrored band") {
    auto p = sinusoid_profile();
    auto sol = stable_solution(p);
    CHECK(sol.kind == BranchKind::stable);
    CHECK(sol.periodicity_defect < 1e-10);
    CHECK(sol.min_eigenvalue > -1.5);
    CHECK(sol.max_eigenvalue < -0.5);
}

TEST_CASE("reversal duality: stable of K(t) = -unstable of K(-t) reversed") {
    auto p = sinusoid_profile();
    auto st = stable_solution(p);
    auto un_rev = unstable_solution(p.reflected());
    for (double t : {0.0, 0.13, 0.5, 0.81}) {
        const double lhs = st.u_at(t);
        const double rhs = -un_rev.u_at(-t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("matrix mode: decoupled constant diagonal") {
    auto p = CurvatureProfile::pinching_diag({1.0, 4.0});
    auto sol = unstable_solution(p);
    Eigen::MatrixXd expect(2, 2);
    expect << 1.0, 0.0, 0.0, 2.0;
    for (const auto& m : sol.values) CHECK((m - expect).norm() < 1e-10);
    auto st = stable_solution(p);
    for (const auto& m : st.values) CHECK((m + expect).norm() < 1e-10);
}

TEST_CASE("periodic exponent: constant curvature") {
    auto rep1 = lyapunov_exponent_periodic(CurvatureProfile::constant(-1.0));
    CHECK(rep1.chi_plus == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep1.mean_curvature_bound == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(rep1.gap) < 1e-10);

    auto rep4 = lyapunov_exponent_periodic(CurvatureProfile::constant(-4.0));
    CHECK(rep4.chi_plus == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(rep4.gap) < 1e-10);
}

TEST_CASE("periodic exponent: sinusoid against frozen oracle value") {
    auto rep = lyapunov_exponent_periodic(sinusoid_profile());
    CHECK(rep.mean_curvature_bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.chi_plus < 1.0);
    CHECK(rep.chi_plus == doctest::Approx(kSinChi).epsilon(2e-9));
    CHECK(rep.gap == doctest::Approx(kSinGap).epsilon(2e-6));
}

TEST_CASE("growth oracle: closed forms") {
    auto p1 = CurvatureProfile::constant(-1.0);
    CHECK(jacobi_growth_oracle(p1, 100.0) == doctest::Approx(1.0).epsilon(1e-6));

    // Flat case: J grows linearly, the tail-window slope reports the
    // documented ~log(T)/T floor rather than exponential growth.
    auto p0 = CurvatureProfile::constant(0.0);
    CHECK(std::abs(jacobi_growth_oracle(p0, 100.0)) < 0.05);
}

TEST_CASE("growth oracle agrees with the periodic route on the sinusoid") {
    auto p = sinusoid_profile();
    const double chi_r = lyapunov_exponent_periodic(p).chi_plus;
    const double chi_j = jacobi_growth_oracle(p, 500.0);
    CHECK(std::abs(chi_r - chi_j) < 1e-4);
    // Cross-check against the test-local independent integrator too.
    const double chi_t = test_oracle::jacobi_exponent(sin_k, 300.0, 1.2247);
    CHECK(std::abs(chi_r - chi_t) < 1e-6);
}

TEST_CASE("trace floor check") {
    // R = diag(1,1) (pinching form), b = 1: floor met exactly.
    auto p11 = CurvatureProfile::pinching_diag({1.0, 1.0});
    auto rep = trace_floor_check(p11, 1.0);
    CHECK(rep.mean_trace == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(rep.pointwise_trace_excess) < 1e-9);
    CHECK(rep.hypothesis_met);
    REQUIRE(rep.ricci_deviation.has_value());
    CHECK(*rep.ricci_deviation < 1e-9);

    // R = diag(1,4), b = 1: floor exceeded, deviation not computed.
    auto p14 = CurvatureProfile::pinching_diag({1.0, 4.0});
    auto rep2 = trace_floor_check(p14, 1.0);
    CHECK(rep2.mean_trace == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(!rep2.hypothesis_met);
    CHECK(!rep2.ricci_deviation.has_value());

    // Scalar sinusoid with b = sqrt(min -K) = sqrt(0.5).
    auto rep3 = trace_floor_check(sinusoid_profile(), std::sqrt(0.5));
    CHECK(rep3.mean_trace == doctest::Approx(kSinChi).epsilon(1e-7));
    CHECK(rep3.mean_trace > std::sqrt(0.5));
    CHECK(rep3.pointwise_trace_excess > 0.0);
    CHECK(!rep3.hypothesis_met);
}

TEST_CASE("trace moment chain") {
    // Tight chain: R = diag(1,1), c = 1 gives A = B = C = D = 2 = end.
    auto rep = trace_moment_chain(CurvatureProfile::pinching_diag({1.0, 1.0}), 1.0);
    CHECK(rep.A == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.B == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.C == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.D == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.end_bound == doctest::Approx(2.0));
    CHECK(!rep.all_links_strict);

    // R = diag(1,4), c = 2: A = B = 3, C = D = sqrt(10), end = 4.
    auto rep2 = trace_moment_chain(CurvatureProfile::pinching_diag({1.0, 4.0}), 2.0);
    CHECK(rep2.A == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rep2.B == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rep2.C == doctest::Approx(std::sqrt(10.0)).epsilon(1e-10));
    CHECK(rep2.D == doctest::Approx(std::sqrt(10.0)).epsilon(1e-10));
    CHECK(rep2.end_bound == doctest::Approx(4.0));
    CHECK(rep2.C - rep2.B > 0.1);  // strict at B <= C

    // Scalar sinusoid with c = sqrt(1.5): strict wherever strictness is
    // possible (B = C is an identity in dimension 1).
    auto rep3 = trace_moment_chain(sinusoid_profile(), std::sqrt(1.5));
    CHECK(rep3.all_links_strict);
    CHECK(rep3.A < rep3.B);
    CHECK(rep3.B == doctest::Approx(rep3.C).epsilon(1e-10));
    CHECK(rep3.D < rep3.end_bound);
}

TEST_CASE("tampered solution trips the chain check") {
    auto p = sinusoid_profile();
    auto sol = unstable_solution(p);
    for (auto& m : sol.values) m *= 1.05;  // simulate an integrator defect
    CHECK_THROWS_AS(trace_moment_chain(sol, std::sqrt(1.5)), ChainViolation);
}

TEST_CASE("flat profile gets the parabolic flag") {
    auto p = CurvatureProfile::constant(0.0);
    auto sol = unstable_solution(p);
    CHECK(sol.parabolic);
    for (std::size_t i = 0; i < sol.values.size(); ++i) CHECK(sol.u(i) == 0.0);
    auto rep = lyapunov_exponent_periodic(p);
    CHECK(rep.parabolic);
    CHECK(rep.chi_plus == 0.0);
}

TEST_CASE("property: random fourier profiles") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    std::uniform_real_distribution<double> base(-2.0, -0.8);
    std::uniform_real_distribution<double> per(0.7, 3.0);

    for (int trial = 0; trial < 12; ++trial) {
        const double period = per(rng);
        auto p = CurvatureProfile::fourier(base(rng), {amp(rng), amp(rng)},
                                           {amp(rng)}, period);
        REQUIRE(p.declared_bounds().has_value());
        const auto bounds = *p.declared_bounds();
        REQUIRE(bounds.b > 0.0);

        auto sol = unstable_solution(p);
        // Riccati residual on the sample grid.
        CHECK(sol.residual < 1e-5);
        // Pinching sandwich.
        CHECK(sol.min_eigenvalue > bounds.b - 1e-8);
        CHECK(sol.max_eigenvalue < bounds.c + 1e-8);
        auto st = stable_solution(p);
        CHECK(st.min_eigenvalue > -bounds.c - 1e-8);
        CHECK(st.max_eigenvalue < -bounds.b + 1e-8);

        // Exponent-curvature inequality.
        auto rep = lyapunov_exponent_periodic(sol);
        CHECK(rep.gap > -1e-8);

        // Periodic telescoping: mean u^2 + mean K = 0.
        const double dt = sol.times[1] - sol.times[0];
        std::vector<double> usq(sol.values.size()), kv(sol.values.size());
        for (std::size_t i = 0; i < sol.values.size(); ++i) {
            usq[i] = sol.u(i) * sol.u(i);
            kv[i] = p.k(sol.times[i]);
        }
        const double telescope =
            simpson(usq, dt) / period + simpson(kv, dt) / period;
        CHECK(std::abs(telescope) < 1e-7);

        // Reversal duality at a random time.
        auto un_rev = unstable_solution(p.reflected());
        std::uniform_real_distribution<double> tt(0.0, period);
        const double t = tt(rng);
        CHECK(st.u_at(t) == doctest::Approx(-un_rev.u_at(-t)).epsilon(1e-7));
    }
}

TEST_CASE("profile invariants") {
    auto p = sinusoid_profile();
    // Exact periodicity through the fold arithmetic.
    for (double t : {0.0, 0.3, 0.99, 2.5}) CHECK(p.k(t) == p.k(t + 1.0));
    // Declared bounds from the fourier factory: spectrum of -K is [0.5, 1.5].
    REQUIRE(p.declared_bounds().has_value());
    CHECK(p.declared_bounds()->b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(p.declared_bounds()->c == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));

    // Sampled profiles close exactly over the period.
    std::vector<double> ts, ks;
    for (int i = 0; i <= 100; ++i) {
        ts.push_back(0.01 * i);
        ks.push_back(sin_k(0.01 * i));
    }
    auto sp = CurvatureProfile::sampled(ts, ks, true);
    CHECK(sp.k(0.0) == sp.k(1.0));
    CHECK(sp.k(0.37) == doctest::Approx(sin_k(0.37)).epsilon(1e-4));
}

TEST_CASE("non-pinched periodic profile is rejected") {
    // Curvature reaching positive values: no hyperbolic branch exists.
    auto p = CurvatureProfile::scalar(
        [](double t) { return -1.0 + 1.6 * std::sin(2.0 * std::numbers::pi * t); }, 1.0);
    CHECK_THROWS_AS(unstable_solution(p), NoConvergence);
}
