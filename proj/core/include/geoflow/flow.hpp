#pragma once

#include <string>
#include <vector>

#include "geoflow/metric.hpp"
#include "geoflow/profile.hpp"

namespace geoflow {

/// A point of the unit tangent bundle in the disk chart: position plus the
/// chart angle of the (metric-)unit velocity.
struct PhasePoint {
    Complex position;
    double angle = 0.0;
};

struct TrajectorySample {
    double t;
    Complex z;
    double angle;
    std::size_t deck_prefix;  // deck word length at this sample
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::string deck_word;   // letters of the walls crossed, in order
    double total_time = 0.0;
    /// max |e^{sigma} |v| - 1| observed before per-step renormalization,
    /// per unit time.
    double speed_drift = 0.0;
    bool escaped = false;    // left the convex core (flow truncated)
    double escape_time = 0.0;

    PhasePoint state_at_end() const {
        return {samples.back().z, samples.back().angle};
    }
};

struct FlowOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double max_step = 0.02;
    /// Uniform recording period of trajectory samples.
    double output_dt = 0.005;
    /// Stop (with the escaped flag) when the position leaves the convex core.
    bool stop_at_core_exit = false;
    /// Crossing-time bisection tolerance.
    double crossing_tol = 1e-12;
};

/// Integrate the geodesic flow of the conformal metric from start for the
/// given time (>= 0).  Whenever the position exits the fundamental domain the
/// pairing deck transformation is applied, the letter appended to the deck
/// word, and integration continues; unit speed is restored after every
/// recorded step with the drift logged.
Trajectory flow(const ConformalMetric& metric, const PhasePoint& start, double time,
                const FlowOptions& opts = {});

/// Scalar curvature profile K(t) sampled along a trajectory; periodic with
/// the trajectory duration when `periodic` is set (certified orbits only).
CurvatureProfile curvature_along(const ConformalMetric& metric, const Trajectory& traj,
                                 bool periodic = false);

}  // namespace geoflow
