#include "geoflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "geoflow/errors.hpp"

namespace geoflow {

double CurvatureProfile::fold(double t) const {
    if (!period_) return t;
    const double tau = *period_;
    double s = std::fmod(t, tau);
    if (s < 0) s += tau;
    return s;
}

Eigen::MatrixXd CurvatureProfile::r(double t) const {
    if (dim_ == 1) {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = scalar_eval_(fold(t));
        return m;
    }
    return matrix_eval_(fold(t));
}

double CurvatureProfile::mean_curvature(double t) const {
    if (dim_ == 1) return scalar_eval_(fold(t));
    return matrix_eval_(fold(t)).trace() / dim_;
}

CurvatureProfile CurvatureProfile::scalar(std::function<double(double)> k,
                                          std::optional<double> period,
                                          std::optional<PinchingBounds> bounds,
                                          std::string label) {
    CurvatureProfile p;
    p.dim_ = 1;
    p.period_ = period;
    p.scalar_eval_ = std::move(k);
    p.bounds_ = bounds;
    p.label_ = std::move(label);
    return p;
}

CurvatureProfile CurvatureProfile::constant(double value) {
    CurvatureProfile p;
    p.dim_ = 1;
    p.period_ = 1.0;  // any period closes a constant profile
    p.scalar_eval_ = [value](double) { return value; };
    if (value <= 0.0) {
        const double a = std::sqrt(-value);
        p.bounds_ = PinchingBounds{a, a};
    }
    p.label_ = "constant(" + std::to_string(value) + ")";
    return p;
}

CurvatureProfile CurvatureProfile::fourier(double base, std::vector<double> cos_coef,
                                           std::vector<double> sin_coef, double period) {
    CurvatureProfile p;
    p.dim_ = 1;
    p.period_ = period;
    p.scalar_eval_ = [=](double t) {
        const double w = 2.0 * std::numbers::pi / period;
        double v = base;
        for (std::size_t i = 0; i < cos_coef.size(); ++i)
            v += cos_coef[i] * std::cos(w * (double(i) + 1.0) * t);
        for (std::size_t i = 0; i < sin_coef.size(); ++i)
            v += sin_coef[i] * std::sin(w * (double(i) + 1.0) * t);
        return v;
    };
    p.label_ = "fourier";
    p.bounds_ = p.scan_bounds();
    return p;
}

CurvatureProfile CurvatureProfile::sampled(std::vector<double> t, std::vector<double> k,
                                           bool periodic) {
    if (t.size() != k.size() || t.size() < 2)
        throw ConfigError("sampled profile needs >= 2 (t, K) pairs of equal length");
    if (!std::is_sorted(t.begin(), t.end()))
        throw ConfigError("sampled profile times must be increasing");

    CurvatureProfile p;
    p.dim_ = 1;
    const double t0 = t.front(), t1 = t.back();
    if (periodic) {
        p.period_ = t1 - t0;
        k.back() = k.front();  // exact closure over period arithmetic
    } else {
        p.horizon_ = t1 - t0;
    }
    auto ts = std::make_shared<std::vector<double>>(std::move(t));
    auto ks = std::make_shared<std::vector<double>>(std::move(k));
    p.scalar_eval_ = [ts, ks, t0](double s) {
        const auto& tv = *ts;
        const auto& kv = *ks;
        double x = t0 + s;
        if (x <= tv.front()) return kv.front();
        if (x >= tv.back()) return kv.back();
        auto it = std::upper_bound(tv.begin(), tv.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - tv.begin());
        const double w = (x - tv[i - 1]) / (tv[i] - tv[i - 1]);
        return (1.0 - w) * kv[i - 1] + w * kv[i];
    };
    p.label_ = "sampled";
    return p;
}

CurvatureProfile CurvatureProfile::matrix_constant(const Eigen::MatrixXd& value,
                                                   std::optional<double> period) {
    if (value.rows() != value.cols())
        throw ConfigError("matrix profile must be square");
    if ((value - value.transpose()).norm() > 1e-12 * (1.0 + value.norm()))
        throw ConfigError("matrix profile must be symmetric");
    CurvatureProfile p;
    p.dim_ = static_cast<int>(value.rows());
    p.period_ = period.value_or(1.0);
    Eigen::MatrixXd v = 0.5 * (value + value.transpose());
    p.matrix_eval_ = [v](double) { return v; };
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
    const double lo = -es.eigenvalues().maxCoeff();  // min of -R spectrum
    const double hi = -es.eigenvalues().minCoeff();
    if (lo >= 0.0) p.bounds_ = PinchingBounds{std::sqrt(lo), std::sqrt(hi)};
    p.label_ = "matrix_constant";
    return p;
}

CurvatureProfile CurvatureProfile::pinching_diag(const std::vector<double>& positive_diag,
                                                 std::optional<double> period) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(positive_diag.size(), positive_diag.size());
    for (std::size_t i = 0; i < positive_diag.size(); ++i) r(i, i) = -positive_diag[i];
    return matrix_constant(r, period);
}

CurvatureProfile CurvatureProfile::reflected() const {
    CurvatureProfile p = *this;
    if (dim_ == 1) {
        auto f = scalar_eval_;
        auto per = period_;
        p.scalar_eval_ = [f, per](double t) {
            double s = -t;
            if (per) {
                s = std::fmod(s, *per);
                if (s < 0) s += *per;
            }
            return f(s);
        };
    } else {
        auto f = matrix_eval_;
        auto per = period_;
        p.matrix_eval_ = [f, per](double t) {
            double s = -t;
            if (per) {
                s = std::fmod(s, *per);
                if (s < 0) s += *per;
            }
            return f(s);
        };
    }
    p.label_ = label_ + "_reflected";
    return p;
}

CurvatureProfile CurvatureProfile::with_bounds(PinchingBounds b) const {
    CurvatureProfile p = *this;
    p.bounds_ = b;
    return p;
}

PinchingBounds CurvatureProfile::scan_bounds(int grid) const {
    const double span = is_periodic() ? period() : std::min(horizon_, 1e3);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double arg_lo = 0.0, arg_hi = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double t = span * double(i) / grid;
        double mn, mx;
        if (dim_ == 1) {
            mn = mx = -k(t);
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r(t));
            mn = -es.eigenvalues().maxCoeff();
            mx = -es.eigenvalues().minCoeff();
        }
        if (mn < lo) { lo = mn; arg_lo = t; }
        if (mx > hi) { hi = mx; arg_hi = t; }
    }
    // Golden-section refinement of the scalar extrema (the grid only brackets).
    if (dim_ == 1 && grid >= 8) {
        auto golden_min = [&](auto g, double t_center) {
            const double h = span / grid;
            double a = t_center - h, b = t_center + h;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double g1 = g(c1), g2 = g(c2);
            for (int it = 0; it < 80; ++it) {
                if (g1 < g2) {
                    b = c2; c2 = c1; g2 = g1;
                    c1 = b - gr * (b - a); g1 = g(c1);
                } else {
                    a = c1; c1 = c2; g1 = g2;
                    c2 = a + gr * (b - a); g2 = g(c2);
                }
            }
            return 0.5 * (a + b);
        };
        const double t_lo = golden_min([&](double t) { return -k(t); }, arg_lo);
        const double t_hi = golden_min([&](double t) { return k(t); }, arg_hi);
        lo = std::min(lo, -k(t_lo));
        hi = std::max(hi, -k(t_hi));
    }
    if (lo < -1e-12)
        throw PositiveCurvature(arg_lo, 0.0, -lo);
    lo = std::max(lo, 0.0);
    return PinchingBounds{std::sqrt(lo), std::sqrt(std::max(hi, 0.0))};
}

}  // namespace geoflow
