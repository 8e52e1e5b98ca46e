#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoflow/flow.hpp"
#include "geoflow/fuchsian.hpp"
#include "geoflow/metric.hpp"
#include "geoflow/riccati.hpp"

namespace geoflow {

struct ShootingOptions {
    int max_newton_iters = 40;
    double fd_step = 1e-6;        // finite-difference step in chart units
    double closure_tol = 1e-8;    // phase-space closure requirement
    double min_damping = 1e-4;
    FlowOptions flow;
};

/// A refined closed geodesic of the perturbed metric.
struct PeriodicOrbit {
    GeodesicClass cls;
    double period = 0.0;
    PhasePoint start;
    double closure_defect = 0.0;
    std::string deck_word;        // word of the certification loop
    CurvatureProfile profile;     // periodic scalar curvature along the orbit
    LyapunovReport exponent_report;
    int newton_iterations = 0;
};

/// Multiple-shooting Newton refinement of the closed geodesic in the free
/// homotopy class of the seed, started from the axis of the unperturbed
/// class transform.  Unknowns are m segment starts (position + angle) plus
/// the period; constraints are segment matching and a transversal phase
/// condition pinning time translation.  Throws NoConvergence (with the
/// residual history) or WrongDeckWord when the converged loop codes a
/// different class.
PeriodicOrbit refine_orbit(const ConformalMetric& metric, const GeodesicClass& seed,
                           const ShootingOptions& opts = {});

/// Fill the orbit's Lyapunov report: periodic Riccati exponent plus the
/// Jacobi growth oracle over oracle_periods periods.  Bounds, when given,
/// override the profile's own scan (used to share metric-wide bounds).
LyapunovReport orbit_exponent(const ConformalMetric& metric, PeriodicOrbit& orbit,
                              double oracle_periods = 500.0,
                              std::optional<PinchingBounds> bounds = std::nullopt,
                              const RiccatiOptions& ropts = {});

}  // namespace geoflow
