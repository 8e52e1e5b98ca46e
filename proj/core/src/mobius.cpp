#include "geoflow/mobius.hpp"

#include <cmath>
#include <numbers>

#include "geoflow/errors.hpp"

namespace geoflow {

MobiusTransform::MobiusTransform(Complex alpha, Complex beta, std::string label)
    : alpha_(alpha), beta_(beta), label_(std::move(label)) {
    // |alpha|^2 - |beta|^2 = 1 up to rounding.  For large entries the
    // difference of squares loses all precision, so renormalize only while
    // the determinant is comfortably resolvable; products of unit matrices
    // stay unit to relative precision regardless.
    const double scale = std::norm(alpha_) + std::norm(beta_);
    if (scale < 1e12) {
        const double det = std::norm(alpha_) - std::norm(beta_);
        if (det <= 0.0)
            throw Error("SU(1,1) matrix must have |alpha|^2 - |beta|^2 > 0");
        const double s = 1.0 / std::sqrt(det);
        alpha_ *= s;
        beta_ *= s;
    }
}

MobiusTransform MobiusTransform::axis_translation(double ell) {
    return {Complex(std::cosh(0.5 * ell), 0.0), Complex(std::sinh(0.5 * ell), 0.0)};
}

MobiusTransform MobiusTransform::rotation(double theta) {
    return {std::polar(1.0, 0.5 * theta), Complex(0.0, 0.0)};
}

MobiusTransform MobiusTransform::from_halfplane(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (det <= 0.0) throw Error("half-plane matrix must have positive determinant");
    const double s = 1.0 / std::sqrt(det);
    a *= s; b *= s; c *= s; d *= s;
    // Cayley conjugation C M C^{-1} with C = [[1, -i], [1, i]] / sqrt(2i):
    // alpha = ((a + d) + i (b - c)) / 2, beta = ((a - d) - i (b + c)) / 2.
    const Complex alpha(0.5 * (a + d), 0.5 * (b - c));
    const Complex beta(0.5 * (a - d), -0.5 * (b + c));
    return {alpha, beta};
}

Complex MobiusTransform::apply(Complex z) const {
    return (alpha_ * z + beta_) / (std::conj(beta_) * z + std::conj(alpha_));
}

Complex MobiusTransform::derivative(Complex z) const {
    const Complex den = std::conj(beta_) * z + std::conj(alpha_);
    return 1.0 / (den * den);  // det = 1
}

MobiusTransform MobiusTransform::inverse() const {
    return {std::conj(alpha_), -beta_};
}

MobiusTransform MobiusTransform::operator*(const MobiusTransform& rhs) const {
    const Complex a = alpha_ * rhs.alpha_ + beta_ * std::conj(rhs.beta_);
    const Complex b = alpha_ * rhs.beta_ + beta_ * std::conj(rhs.alpha_);
    return {a, b};
}

IsometryClass MobiusTransform::classify(double tol) const {
    if (distance_to_identity() < 1e-14) return IsometryClass::identity;
    const double t = std::abs(trace());
    if (t > 2.0 + tol) return IsometryClass::hyperbolic;
    if (t < 2.0 - tol) return IsometryClass::elliptic;
    return IsometryClass::indeterminate;
}

double MobiusTransform::translation_length(double tol) const {
    if (!is_hyperbolic(tol))
        throw NotHyperbolic("translation length undefined: |trace| = " +
                            std::to_string(std::abs(trace())));
    return 2.0 * std::acosh(0.5 * std::abs(trace()));
}

std::pair<Complex, Complex> MobiusTransform::axis_endpoints() const {
    // Fixed points of z -> (az + b)/(conj(b) z + conj(a)) solve
    // conj(b) z^2 + (conj(a) - a) z - b = 0.
    const Complex cb = std::conj(beta_);
    const Complex lin = std::conj(alpha_) - alpha_;
    if (std::abs(cb) < 1e-15)
        throw NotHyperbolic("axis endpoints undefined for rotations");
    const Complex disc = std::sqrt(lin * lin + 4.0 * cb * beta_);
    Complex z1 = (-lin + disc) / (2.0 * cb);
    Complex z2 = (-lin - disc) / (2.0 * cb);
    // Attracting fixed point p satisfies |g'(p)| < 1.
    if (std::abs(derivative(z1)) < std::abs(derivative(z2))) std::swap(z1, z2);
    z1 /= std::abs(z1);  // the endpoints are on the unit circle analytically
    z2 /= std::abs(z2);
    return {z1, z2};  // (repelling, attracting)
}

double MobiusTransform::distance_to_identity() const {
    return std::sqrt(2.0 * (std::norm(alpha_ - Complex(1.0, 0.0)) + std::norm(beta_)));
}

double hyperbolic_distance(Complex z, Complex w) {
    const double num = std::norm(z - w);
    const double den = (1.0 - std::norm(z)) * (1.0 - std::norm(w));
    return std::acosh(1.0 + 2.0 * num / den);
}

MobiusTransform axis_frame(const MobiusTransform& g) {
    auto [rep, att] = g.axis_endpoints();
    const double th_r = std::arg(rep);
    const double th_a = std::arg(att);
    // Want h in SU(1,1) with h(-1) = rep, h(+1) = att:
    //   alpha + beta = P exp(i th_a / 2)
    //   alpha - beta = Q exp(i (th_r + pi) / 2)
    // with P Q cos((th_a - th_r - pi)/2) = 1 and P, Q > 0.
    double phase = 0.5 * (th_a - th_r - std::numbers::pi);
    double cp = std::cos(phase);
    double flip = 1.0;
    if (cp < 0.0) {  // other branch of the half-angle
        flip = -1.0;
        cp = -cp;
    }
    if (cp < 1e-12) throw Error("degenerate axis frame");
    const double pq = 1.0 / std::sqrt(cp);
    const Complex sum = pq * std::polar(1.0, 0.5 * th_a);
    const Complex dif = flip * pq * std::polar(1.0, 0.5 * (th_r + std::numbers::pi));
    return {0.5 * (sum + dif), 0.5 * (sum - dif)};
}

std::vector<std::pair<Complex, Complex>> axis_points(const MobiusTransform& g, int count) {
    if (count < 1) throw Error("axis_points needs count >= 1");
    const double ell = g.translation_length();
    const MobiusTransform h = axis_frame(g);
    std::vector<std::pair<Complex, Complex>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double s = ell * double(i) / count;     // arclength from h(0)
        const double x = std::tanh(0.5 * s);          // diameter parameter
        const Complex z = h.apply(Complex(x, 0.0));
        Complex dir = h.derivative(Complex(x, 0.0));  // pushforward of +1
        dir /= std::abs(dir);
        out.emplace_back(z, dir);
    }
    return out;
}

}  // namespace geoflow
