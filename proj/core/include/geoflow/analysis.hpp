#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/metric.hpp"
#include "geoflow/orbits.hpp"

namespace geoflow {

struct OrbitRow {
    std::string word;
    double class_length = 0.0;   // unperturbed translation length
    double period = 0.0;
    double chi_plus = 0.0;
    double mean_curvature = 0.0;  // (1/tau) integral of K along the orbit
    double gap = 0.0;
    double closure_defect = 0.0;
    double oracle_discrepancy = 0.0;
    double u_min = 0.0, u_max = 0.0;  // pointwise range of the unstable branch
    double k_min = 0.0, k_max = 0.0;  // curvature range along the orbit
    bool touches_bumps = false;
};

struct OrbitChains {
    TraceFloorReport floor;     // alpha = b
    MomentChainReport moments;  // alpha = c
};

struct RigidityOptions {
    double oracle_periods = 500.0;
    int threads = 1;
    ShootingOptions shooting;
    RiccatiOptions riccati;
};

struct RigidityReport {
    double epsilon = 0.0;
    PinchingBounds bounds;          // metric-wide (b, c)
    double curvature_spread = 0.0;  // c^2 - b^2
    std::vector<OrbitRow> rows;
    std::vector<OrbitChains> chains;          // parallel to rows
    std::vector<CurvatureProfile> profiles;   // parallel to rows
    std::vector<std::pair<std::string, std::string>> failures;  // word -> reason
    double exponent_spread = 0.0;   // max - min chi over refined orbits
    double max_gap = 0.0, min_gap = 0.0;
};

/// Enumerate classes, refine every orbit, compute exponents and the per-orbit
/// trace chains.  Per-class failures are logged, not fatal.
RigidityReport rigidity_experiment(const ConformalMetric& metric, int max_word_length,
                                   const RigidityOptions& opts = {});

/// Result of testing one orbit against the extremal hypothesis chi == alpha.
struct ExtremalOrbitCheck {
    std::string word;
    bool hypothesis_met = false;
    double hypothesis_slack = 0.0;  // |chi - alpha|
    double sup_u_dev = 0.0;         // sup_t |u(t) - alpha|
    double sup_k_dev = 0.0;         // sup_t |K(t) + alpha^2|
    bool pinching_breach = false;   // u dips below the floor: data defect
};

struct ExtremalReport {
    char alpha_kind = 'b';  // 'b' or 'c'
    double alpha = 0.0;
    std::vector<ExtremalOrbitCheck> checks;
    int orbits_passing = 0;
};

/// Core of the extremal forcing check on a single unstable branch: mean u on
/// the floor b plus the pointwise floor forces u == b and K == -b^2.
/// Exposed separately so synthetic (even defective) solutions can be fed in.
ExtremalOrbitCheck extremal_forcing_check(const RiccatiSolution& unstable, double alpha,
                                          double hypothesis_tol = 1e-6,
                                          double floor_tol = 1e-9);

/// Test every orbit of a rigidity report against chi == alpha for
/// alpha = b or c of the report bounds.
ExtremalReport pinched_extremal_check(const RigidityReport& report, char alpha_kind,
                                      double hypothesis_tol = 1e-6,
                                      const RiccatiOptions& ropts = {});

struct EntropyOptions {
    double min_resident = 2.0;    // shortest usable core-resident segment
    double usable_fraction = 0.10;
    RiccatiOptions riccati;
    FlowOptions flow;
};

struct EntropyReport {
    double liouville_entropy = 0.0;   // mean Birkhoff average of u along samples
    double liouville_stderr = 0.0;
    std::size_t usable_samples = 0;
    std::size_t drawn_samples = 0;
    double mean_resident_time = 0.0;
    double orbit_growth_exponent = 0.0;  // delta from the census length spectrum
    double growth_fit_rms = 0.0;
    std::size_t census_classes = 0;
    double fit_cutoff_length = 0.0;
    bool infinite_area_caveat = false;  // growth and volume entropies differ
};

/// Monte Carlo Liouville-side estimate plus the census growth exponent.
/// Samples are uniform in chart x angle over the convex core; trajectories
/// truncate at core exit and segments shorter than min_resident are dropped.
/// Throws InsufficientSamples when fewer than usable_fraction of the draws
/// survive, or when mc_samples == 0.
EntropyReport entropy_experiment(const ConformalMetric& metric, std::size_t mc_samples,
                                 double horizon, int max_word_length, std::uint64_t seed,
                                 const EntropyOptions& opts = {});

/// Fit N(T) ~ e^{dT}/(dT) over the complete part of the census spectrum.
/// Returns (delta, rms of log-residuals).  fit_cutoff: lengths above it are
/// excluded (census completeness boundary).
std::pair<double, double> fit_growth_exponent(const std::vector<double>& lengths,
                                              double fit_cutoff);

}  // namespace geoflow
