#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geoflow {

/// Declared pinching bounds 0 <= b <= c: the sectional curvature along the
/// profile lies in [-c^2, -b^2].
struct PinchingBounds {
    double b = 0.0;
    double c = 0.0;
};

/// A scalar or symmetric-matrix curvature function along a geodesic.
///
/// evaluate(t) returns the curvature operator appearing in the Jacobi
/// equation Y'' + R(t) Y = 0: in dimension 2 this is the Gaussian curvature
/// K(t) itself (negative on hyperbolic-like profiles); in the synthetic
/// matrix mode it is a symmetric (n-1)x(n-1) matrix whose eigenvalues are
/// sectional curvatures.
///
/// Periodic profiles wrap their argument modulo the period, so
/// evaluate(t + period) == evaluate(t) holds exactly.
class CurvatureProfile {
public:
    CurvatureProfile() = default;

    /// Scalar profile from an arbitrary callable.
    static CurvatureProfile scalar(std::function<double(double)> k,
                                   std::optional<double> period,
                                   std::optional<PinchingBounds> bounds = std::nullopt,
                                   std::string label = "scalar");

    /// Constant scalar curvature K == value (value < 0 for hyperbolic-like,
    /// 0 for the flat case).
    static CurvatureProfile constant(double value);

    /// K(t) = base + sum_i cos_coef[i] cos(2*pi*(i+1) t / period)
    ///              + sin_coef[i] sin(2*pi*(i+1) t / period).
    static CurvatureProfile fourier(double base, std::vector<double> cos_coef,
                                    std::vector<double> sin_coef, double period);

    /// Piecewise-linear interpolation of (t, K) samples; periodic with
    /// period = last t when `periodic`, otherwise finite horizon [t0, tN].
    static CurvatureProfile sampled(std::vector<double> t, std::vector<double> k,
                                    bool periodic);

    /// Constant matrix curvature R == value (symmetric, eigenvalues are
    /// sectional curvatures).
    static CurvatureProfile matrix_constant(const Eigen::MatrixXd& value,
                                            std::optional<double> period = std::nullopt);

    /// Constant diagonal matrix profile given the *pinching* diagonal
    /// (positive entries p_i; sectional curvatures are -p_i).
    static CurvatureProfile pinching_diag(const std::vector<double>& positive_diag,
                                          std::optional<double> period = std::nullopt);

    int dimension() const { return dim_; }
    bool is_scalar() const { return dim_ == 1; }
    bool is_periodic() const { return period_.has_value(); }
    double period() const { return *period_; }
    /// Finite data horizon for aperiodic profiles (infinity if unlimited).
    double horizon() const { return horizon_; }
    const std::optional<PinchingBounds>& declared_bounds() const { return bounds_; }
    const std::string& label() const { return label_; }

    /// Scalar curvature K(t); only valid when is_scalar().
    double k(double t) const { return scalar_eval_(fold(t)); }
    /// Matrix curvature R(t) (works in scalar mode too, as a 1x1 matrix).
    Eigen::MatrixXd r(double t) const;

    /// Mean sectional curvature tr R / (n-1) at time t.
    double mean_curvature(double t) const;

    /// Profile reflected in time: K~(t) = K(-t), with the same period.
    CurvatureProfile reflected() const;

    /// Attach (or override) pinching bounds.
    CurvatureProfile with_bounds(PinchingBounds b) const;

    /// Scan min/max of -K over a dense grid (scalar) or of the eigenvalues of
    /// -R, returning auto-detected pinching bounds, b = sqrt(min), c =
    /// sqrt(max).  Throws PositiveCurvature if -K dips below 0 unless
    /// allow_flat and the profile is identically 0.
    PinchingBounds scan_bounds(int grid = 4096) const;

private:
    double fold(double t) const;

    int dim_ = 1;
    std::optional<double> period_;
    double horizon_ = std::numeric_limits<double>::infinity();
    std::optional<PinchingBounds> bounds_;
    std::string label_ = "profile";
    std::function<double(double)> scalar_eval_;
    std::function<Eigen::MatrixXd(double)> matrix_eval_;
};

}  // namespace geoflow
