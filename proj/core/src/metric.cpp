#include "geoflow/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// eta(s), eta'(s), eta''(s) for the bump profile with support cutoff S.
struct BumpEval {
    double v, d1, d2;
};

BumpEval eval_profile(BumpProfile kind, double s, double S) {
    const double x = s / S;
    if (x >= 1.0) return {0.0, 0.0, 0.0};
    if (kind == BumpProfile::poly) {
        const double om = 1.0 - x;
        return {om * om * om, -3.0 * om * om / S, 6.0 * om / (S * S)};
    }
    // smooth: exp(1 - 1/(1-x)), flat to all orders at the support edge
    const double om = 1.0 - x;
    const double g = std::exp(1.0 - 1.0 / om);
    const double d1 = -g / (om * om) / S;
    const double d2 = g * (1.0 / (om * om * om * om) - 2.0 / (om * om * om)) / (S * S);
    return {g, d1, d2};
}

}  // namespace

ConformalMetric::ConformalMetric(std::shared_ptr<const FuchsianGroup> group,
                                 std::vector<Bump> bumps, double epsilon,
                                 double base_curvature, BumpProfile profile)
    : group_(std::move(group)),
      bumps_(std::move(bumps)),
      epsilon_(epsilon),
      base_curvature_(base_curvature),
      profile_(profile) {
    if (!(base_curvature_ < 0.0))
        throw Error("base curvature must be negative");
    kappa_ = std::sqrt(-base_curvature_);

    for (const auto& b : bumps_) {
        if (!(b.radius > 0.0)) throw Error("bump radius must be positive");
        if (!group_->in_fundamental_domain(b.center))
            throw Error("bump center must lie in the fundamental domain");
        // Support constraint: twice the radius below the minimal displacement
        // of the center, so distinct translates have disjoint supports and
        // the invariant extension is a locally single-term sum.
        const double min_disp = group_->min_displacement(b.center, 4);
        if (!(2.0 * b.radius < min_disp))
            throw Error("bump support too large: 2 * radius = " +
                        std::to_string(2.0 * b.radius) + " must stay below the minimal "
                        "center displacement " + std::to_string(min_disp));
    }

    // Translates of each center over short words; combined with projection
    // into the fundamental domain at evaluation time this covers every
    // support that can meet the domain or its one-step neighbors.
    std::string letters;
    for (char c : group_->alphabet()) {
        letters.push_back(c);
        letters.push_back(FuchsianGroup::invert_letter(c));
    }
    std::vector<std::string> words{""};
    std::string w;
    auto visit = [&](auto&& self) -> void {
        if (static_cast<int>(w.size()) >= 3) return;
        for (char c : letters) {
            if (!w.empty() && w.back() == FuchsianGroup::invert_letter(c)) continue;
            w.push_back(c);
            words.push_back(w);
            self(self);
            w.pop_back();
        }
    };
    visit(visit);

    for (std::size_t bi = 0; bi < bumps_.size(); ++bi) {
        const auto& b = bumps_[bi];
        const double t = std::tanh(0.5 * b.radius);
        for (const auto& word : words) {
            const MobiusTransform g = group_->word_transform(word);
            const Complex w0 = g.apply(b.center);
            // Euclidean disk covering the hyperbolic support ball.
            const double r2 = std::norm(w0);
            const double den = 1.0 - t * t * r2;
            const Complex ce = w0 * (1.0 - t * t) / den;
            const double re = t * (1.0 - r2) / den;
            translates_.push_back(
                Translate{w0, 1.0 - r2, ce, re * re * 1.0000001, static_cast<int>(bi)});
        }
    }
}

ConformalMetric ConformalMetric::with_epsilon(double epsilon) const {
    ConformalMetric m = *this;
    m.epsilon_ = epsilon;
    return m;
}

void ConformalMetric::accumulate_raw(Complex z, ConformalFactor& f) const {
    const double P = 1.0 - std::norm(z);
    for (const auto& tr : translates_) {
        if (std::norm(z - tr.euclid_center) >= tr.euclid_radius_sq) continue;
        const auto& b = bumps_[tr.bump];
        const double S = std::sinh(0.5 * b.radius) * std::sinh(0.5 * b.radius);
        const double N = std::norm(z - tr.w);
        const double s = N / (tr.q * P);
        if (s >= S) continue;
        const auto e = eval_profile(profile_, s, S);
        const double amp = epsilon_ * b.amplitude;

        // grad s and Lap s in closed form (N = |z-w|^2, P = 1-|z|^2):
        //   grad s = (2 (z-w) P + 2 N z) / (q P^2)
        //   Lap s  = (4/P + 8 (z-w).z / P^2 + 4 N / P^2 + 8 N |z|^2 / P^3)/q
        const Complex grad_s = (2.0 * (z - tr.w) * P + 2.0 * N * z) / (tr.q * P * P);
        const double lap_s =
            (4.0 / P + 8.0 * dot(z - tr.w, z) / (P * P) + 4.0 * N / (P * P) +
             8.0 * N * std::norm(z) / (P * P * P)) /
            tr.q;

        f.phi += amp * e.v;
        f.grad += amp * e.d1 * grad_s;
        f.laplacian += amp * (e.d2 * std::norm(grad_s) + e.d1 * lap_s);
    }
}

ConformalFactor ConformalMetric::conformal_factor(Complex z) const {
    ConformalFactor f;
    if (epsilon_ == 0.0 || bumps_.empty()) return f;
    if (group_->in_fundamental_domain(z)) {
        accumulate_raw(z, f);
        return f;
    }
    // Invariance by construction: evaluate at the fundamental-domain
    // representative and pull the derivatives back through the deck map.
    auto [z0, h] = group_->project(z);
    ConformalFactor f0;
    accumulate_raw(z0, f0);
    const Complex hp = h.derivative(z);
    f.phi = f0.phi;
    f.grad = std::conj(hp) * f0.grad;
    f.laplacian = std::norm(hp) * f0.laplacian;
    return f;
}

double ConformalMetric::sigma(Complex z) const {
    const double lambda0 = 2.0 / (1.0 - std::norm(z));
    return conformal_factor(z).phi + std::log(lambda0 / kappa_);
}

Complex ConformalMetric::sigma_gradient(Complex z) const {
    const double lambda0 = 2.0 / (1.0 - std::norm(z));
    return conformal_factor(z).grad + lambda0 * z;
}

double ConformalMetric::gaussian_curvature(Complex z) const {
    const auto f = conformal_factor(z);
    const double lambda0 = 2.0 / (1.0 - std::norm(z));
    // K = -e^{-2 phi} kappa^2 (1 + Lap(phi) / lambda0^2)
    return -std::exp(-2.0 * f.phi) * kappa_ * kappa_ *
           (1.0 + f.laplacian / (lambda0 * lambda0));
}

PinchingBounds ConformalMetric::curvature_bounds(int grid_resolution) const {
    double lo = kappa_ * kappa_;  // -K off the supports
    double hi = lo;
    Complex arg_lo, arg_hi;
    bool interior_extreme = false;

    for (const auto& b : bumps_) {
        // Polar grid over the support ball of the primary translate; by
        // invariance this sees the same values as every translate.
        const int nr = std::max(8, grid_resolution);
        const int na = std::max(8, grid_resolution);
        for (int i = 0; i <= nr; ++i) {
            const double d = b.radius * double(i) / nr;
            const double re = std::tanh(0.5 * d);
            for (int j = 0; j < na; ++j) {
                const double th = 2.0 * std::numbers::pi * double(j) / na;
                // hyperbolic polar point around the center
                const Complex offset = std::polar(re, th);
                const Complex z = (b.center + offset) / (1.0 + std::conj(b.center) * offset);
                const double mk = -gaussian_curvature(z);
                if (mk < lo) { lo = mk; arg_lo = z; interior_extreme = true; }
                if (mk > hi) { hi = mk; arg_hi = z; interior_extreme = true; }
            }
        }
    }

    // Local refinement around the grid extremes (coordinate descent on a
    // shrinking stencil).
    auto refine = [&](Complex z0, double sign) {
        double step = 0.02;
        Complex z = z0;
        double best = sign * (-gaussian_curvature(z));
        for (int level = 0; level < 24; ++level) {
            bool moved = false;
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    if (!dx && !dy) continue;
                    const Complex cand = z + Complex(step * dx, step * dy);
                    if (std::abs(cand) >= 0.999) continue;
                    const double v = sign * (-gaussian_curvature(cand));
                    if (v < best) {
                        best = v;
                        z = cand;
                        moved = true;
                    }
                }
            }
            if (!moved) step *= 0.35;
        }
        return sign * best;
    };
    if (interior_extreme) {
        lo = std::min(lo, refine(arg_lo, +1.0));
        hi = std::max(hi, refine(arg_hi, -1.0));
    }

    if (lo <= 0.0) throw PositiveCurvature(arg_lo.real(), arg_lo.imag(), -lo);
    return PinchingBounds{std::sqrt(lo), std::sqrt(hi)};
}

double ConformalMetric::estimate_epsilon_max(int grid_resolution) const {
    if (bumps_.empty() || epsilon_ == 0.0) return std::numeric_limits<double>::infinity();
    auto negative_at = [&](double eps) {
        try {
            with_epsilon(eps).curvature_bounds(grid_resolution);
            return true;
        } catch (const PositiveCurvature&) {
            return false;
        }
    };
    double good = 0.0, bad = epsilon_;
    if (negative_at(bad)) {
        good = bad;
        while (negative_at(2.0 * good) && good < 1e3) good *= 2.0;
        bad = 2.0 * good;
    }
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (good + bad);
        (negative_at(mid) ? good : bad) = mid;
    }
    return good;
}

}  // namespace geoflow
