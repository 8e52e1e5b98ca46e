#pragma once

#include <complex>
#include <string>
#include <vector>

namespace geoflow {

using Complex = std::complex<double>;

enum class IsometryClass { hyperbolic, elliptic, indeterminate, identity };

/// An orientation-preserving isometry of the Poincare disk, stored as the
/// SU(1,1) matrix [[alpha, beta], [conj(beta), conj(alpha)]] acting by
/// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)), with
/// |alpha|^2 - |beta|^2 = 1 (renormalized after composition).
class MobiusTransform {
public:
    MobiusTransform() : alpha_(1.0, 0.0), beta_(0.0, 0.0) {}
    MobiusTransform(Complex alpha, Complex beta, std::string label = "");

    static MobiusTransform identity() { return {}; }

    /// Hyperbolic translation along the real diameter (-1, 1) by length ell,
    /// attracting fixed point +1 for ell > 0.
    static MobiusTransform axis_translation(double ell);

    /// Rotation about the disk center by angle theta.
    static MobiusTransform rotation(double theta);

    /// Conjugate of a real SL(2, R) upper half-plane matrix [[a, b], [c, d]]
    /// under the Cayley map z -> (z - i)/(z + i).
    static MobiusTransform from_halfplane(double a, double b, double c, double d);

    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }
    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    Complex apply(Complex z) const;
    /// Complex derivative at z (conformal factor of the chart action).
    Complex derivative(Complex z) const;

    MobiusTransform inverse() const;
    MobiusTransform operator*(const MobiusTransform& rhs) const;

    /// tr = 2 Re(alpha); defined up to sign of the matrix.
    double trace() const { return 2.0 * alpha_.real(); }

    /// |trace| with the parabolic band [2 - tol, 2 + tol] reported as
    /// indeterminate rather than guessed.
    IsometryClass classify(double tol = 1e-9) const;

    bool is_hyperbolic(double tol = 1e-9) const {
        return classify(tol) == IsometryClass::hyperbolic;
    }

    /// Translation length 2 arccosh(|tr|/2); throws NotHyperbolic otherwise.
    double translation_length(double tol = 1e-9) const;

    /// (repelling, attracting) fixed points on the boundary circle.
    std::pair<Complex, Complex> axis_endpoints() const;

    /// Distance to the identity in matrix norm (for exactness checks).
    double distance_to_identity() const;

private:
    Complex alpha_, beta_;
    std::string label_;
};

/// Equally spaced (hyperbolic arclength) samples along the axis of g,
/// covering one translation length starting from the point of the axis
/// closest to the disk center, oriented toward the attracting fixed point.
/// Returns pairs (point, unit chart direction of the axis).
std::vector<std::pair<Complex, Complex>> axis_points(const MobiusTransform& g, int count);

/// The isometry mapping the oriented real diameter onto the oriented axis of
/// g (axis direction toward the attracting fixed point).
MobiusTransform axis_frame(const MobiusTransform& g);

/// Hyperbolic distance between two points of the open disk.
double hyperbolic_distance(Complex z, Complex w);

}  // namespace geoflow
