#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "geoflow/profile.hpp"
#include "geoflow/rk45.hpp"

namespace geoflow {

/// Options for Riccati integration.  Samples are recorded on a uniform grid
/// (samples_per_period points over one period, or samples_per_unit per unit
/// time for aperiodic profiles); the stepper lands on each grid point
/// exactly, so no interpolation enters the recorded solution.
struct RiccatiOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    int samples_per_period = 2048;
    double samples_per_unit = 512.0;
    /// Norm ceiling multiplier: blow-up is declared at ceiling_factor * c
    /// (declared bounds) or at absolute_ceiling without bounds.
    double ceiling_factor = 10.0;
    double absolute_ceiling = 1e3;
    /// Periodicity-defect tolerance for the periodic branch constructions.
    double periodic_defect_tol = 1e-11;
    /// Settle horizon for branch construction; <= 0 means the default 20/b.
    double settle_horizon = 0.0;
};

enum class BranchKind { generic, stable, unstable };

/// A sampled solution U(t) of U' + U^2 + R(t) = 0 along a curvature profile.
struct RiccatiSolution {
    CurvatureProfile profile;
    BranchKind kind = BranchKind::generic;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> values;  // symmetric, dim x dim

    /// max over interior samples of ||U' + U^2 + R|| with U' by centered
    /// differences on the sample grid (independent of the stepper).
    double residual = 0.0;
    /// ||U(t_end) - U(t_0)|| for periodic profiles.
    double periodicity_defect = 0.0;
    /// Smallest / largest eigenvalue of U over all samples.
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    /// Set for the flat (R == 0) profile, where the branch attraction is
    /// only polynomial and U == 0 is returned directly.
    bool parabolic = false;

    double u(std::size_t i) const { return values[i](0, 0); }
    /// Scalar solution evaluated by linear interpolation (scalar mode only).
    double u_at(double t) const;
};

/// Integrate the Riccati equation from u0 at t0 to t1 (t0 < t1).
/// Symmetry is enforced by symmetrizing U after every accepted step.
/// Throws BlowUpError when ||U|| crosses the ceiling and ToleranceFailure
/// when the stepper stalls.
RiccatiSolution integrate_riccati(const CurvatureProfile& profile,
                                  const Eigen::MatrixXd& u0, double t0, double t1,
                                  const RiccatiOptions& opts = {});

/// Scalar convenience overload.
RiccatiSolution integrate_riccati(const CurvatureProfile& profile, double u0,
                                  double t0, double t1, const RiccatiOptions& opts = {});

/// The forward-attracting branch: for a periodic pinched profile, iterate the
/// period map of the Riccati flow from the seed c*I until the periodicity
/// defect drops below tolerance.  Eigenvalues land in [b, c].  For aperiodic
/// profiles, integrates from the seed over the data horizon; the samples are
/// trustworthy after the settle horizon.
RiccatiSolution unstable_solution(const CurvatureProfile& profile,
                                  const RiccatiOptions& opts = {});

/// Mirror branch, constructed by backward-time iteration from the seed -c*I.
/// Eigenvalues land in [-c, -b].
RiccatiSolution stable_solution(const CurvatureProfile& profile,
                                const RiccatiOptions& opts = {});

/// Exponent data for a periodic profile.
struct LyapunovReport {
    /// Period-average of the unstable scalar u (scalar mode) or of
    /// tr U / (n-1) (matrix mode).
    double chi_plus = 0.0;
    /// Period-average of tr U: the volume-growth exponent on the unstable
    /// bundle (equals chi_plus in scalar mode).
    double trace_average = 0.0;
    /// Per-direction exponents: period-averages of the sorted eigenvalues.
    std::vector<double> exponents;
    /// sqrt(-(1/tau) integral of the mean sectional curvature).
    double mean_curvature_bound = 0.0;
    /// mean_curvature_bound - chi_plus; nonnegative up to quadrature error.
    double gap = 0.0;
    std::optional<double> oracle_chi;
    std::optional<double> oracle_discrepancy;
    bool parabolic = false;
};

/// Exponent of a periodic profile from its unstable branch, by composite
/// Simpson quadrature on the solution grid.
LyapunovReport lyapunov_exponent_periodic(const CurvatureProfile& profile,
                                          const RiccatiOptions& opts = {});

/// As above but reusing an already-computed unstable solution.
LyapunovReport lyapunov_exponent_periodic(const RiccatiSolution& unstable);

/// Brute-force exponent: integrate the Jacobi equation Y'' + R(t) Y = 0 from
/// (Y, Y') = (I, c I), renormalizing at period checkpoints to avoid overflow,
/// and return the growth rate of the solution norm measured over the tail
/// half of the horizon (the tail window drops the O(1/T) transient bias;
/// for profiles with only polynomial growth this reports the documented
/// ~log(T)/T floor instead of 0).
double jacobi_growth_oracle(const CurvatureProfile& profile, double horizon,
                            const RiccatiOptions& opts = {});

/// Report for the trace floor check (extremal exponent alpha = b).
struct TraceFloorReport {
    double b = 0.0;
    double mean_trace = 0.0;            // (1/tau) integral tr U
    double pointwise_trace_excess = 0.0;  // sup_t (tr U - (n-1) b)
    /// sup_t |mean sectional curvature + b^2|; only computed when the mean
    /// trace sits on the floor (hypothesis_met).
    std::optional<double> ricci_deviation;
    bool hypothesis_met = false;
};

/// Mean trace on the floor (n-1)b forces pointwise equality and constant
/// curvature; this measures how far a profile is from that rigidity.
TraceFloorReport trace_floor_check(const CurvatureProfile& profile, double b,
                                   const RiccatiOptions& opts = {},
                                   double hypothesis_tol = 1e-8);

/// As above but reusing an already-computed unstable solution.
TraceFloorReport trace_floor_check(const RiccatiSolution& unstable, double b,
                                   double hypothesis_tol = 1e-8);

/// The four quantities of the moment chain A <= B <= C = D <= (n-1)c,
/// evaluated over one period of the unstable branch:
///   A = (1/tau) int tr U
///   B = sqrt((1/tau) int (tr U)^2)
///   C = sqrt(((n-1)/tau) int tr(U^2))
///   D = sqrt(-((n-1)^2/tau) int Ric)    (Ric = tr R / (n-1))
/// C = D uses the period-integrated Riccati identity
///   (1/tau) int tr U^2 = -(1/tau) int tr R.
struct MomentChainReport {
    double c = 0.0;
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    double end_bound = 0.0;  // (n-1) c
    double max_violation = 0.0;
    bool all_links_strict = false;
};

/// Evaluate the chain and throw ChainViolation naming the first broken link
/// if any inequality fails beyond tolerance.
MomentChainReport trace_moment_chain(const CurvatureProfile& profile, double c,
                                     const RiccatiOptions& opts = {},
                                     double tol = 1e-7);

/// As above but on a caller-provided solution (lets diagnostics distinguish
/// integrator defects from profile properties).
MomentChainReport trace_moment_chain(const RiccatiSolution& unstable, double c,
                                     double tol = 1e-7);

/// Composite Simpson quadrature over uniformly spaced samples.
double simpson(const std::vector<double>& values, double dt);

}  // namespace geoflow
