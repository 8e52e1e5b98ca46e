#pragma once

#include <memory>
#include <vector>

#include "geoflow/fuchsian.hpp"
#include "geoflow/profile.hpp"

namespace geoflow {

/// One radial bump of the conformal exponent.  The profile is radial in the
/// hyperbolic distance d to the center, parameterized through the Mobius
/// invariant s = sinh^2(d/2); support is the hyperbolic ball of the given
/// radius.
struct Bump {
    Complex center;     // inside the fundamental domain
    double radius;      // hyperbolic support radius
    double amplitude;
};

enum class BumpProfile { poly, smooth };  // (1 - s/S)^3  vs  exp(1 - 1/(1 - s/S))

/// Derivative aggregates of the conformal exponent phi at a chart point.
struct ConformalFactor {
    double phi = 0.0;
    Complex grad = 0.0;     // flat gradient as a complex number
    double laplacian = 0.0;  // flat Laplacian
};

/// Group-invariant conformal perturbation g = e^{2 phi} g_base of the
/// constant-curvature base metric.  phi is a finite sum of radial bumps
/// extended invariantly: every evaluation projects the point into the
/// fundamental domain and sums the translated bumps meeting it, so the
/// invariance is exact by construction.
class ConformalMetric {
public:
    ConformalMetric(std::shared_ptr<const FuchsianGroup> group,
                    std::vector<Bump> bumps, double epsilon,
                    double base_curvature = -1.0,
                    BumpProfile profile = BumpProfile::poly);

    const FuchsianGroup& group() const { return *group_; }
    std::shared_ptr<const FuchsianGroup> group_ptr() const { return group_; }
    double epsilon() const { return epsilon_; }
    double base_curvature() const { return base_curvature_; }
    const std::vector<Bump>& bumps() const { return bumps_; }

    /// A copy of this metric with a different global amplitude.
    ConformalMetric with_epsilon(double epsilon) const;

    /// phi and its first two flat derivative aggregates (closed forms).
    ConformalFactor conformal_factor(Complex z) const;

    /// Total conformal exponent sigma = phi + log(lambda_base) where the base
    /// factor is 2/(kappa (1 - |z|^2)) for base curvature -kappa^2.
    double sigma(Complex z) const;
    /// Flat gradient of sigma (complex form).
    Complex sigma_gradient(Complex z) const;

    /// Gaussian curvature K = -e^{-2 sigma} Lap(sigma).
    double gaussian_curvature(Complex z) const;

    /// min/max of -K over the fundamental domain: constant kappa^2 off the
    /// bump supports plus a refined scan inside each support.  Returns
    /// b = sqrt(min -K), c = sqrt(max -K).  Throws PositiveCurvature when K
    /// reaches 0 somewhere.
    PinchingBounds curvature_bounds(int grid_resolution = 200) const;

    /// Largest epsilon multiplier keeping K < 0 on the scan grid (bisection
    /// against curvature_bounds).
    double estimate_epsilon_max(int grid_resolution = 100) const;

private:
    struct Translate {
        Complex w;        // translated bump center
        double q;         // 1 - |w|^2
        Complex euclid_center;  // Euclidean bounding disk of the support
        double euclid_radius_sq;
        int bump;  // index into bumps_
    };

    void accumulate_raw(Complex z, ConformalFactor& f) const;

    std::shared_ptr<const FuchsianGroup> group_;
    std::vector<Bump> bumps_;
    double epsilon_;
    double base_curvature_;
    double kappa_;
    BumpProfile profile_;
    std::vector<Translate> translates_;
};

}  // namespace geoflow
