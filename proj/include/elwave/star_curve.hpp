#pragma once

// Star-shaped boundary curves gamma(theta) = center + r_M(theta)(cos theta, sin theta)
// with r_M a truncated Fourier series r(t) = a0 + sum_m [a_{2m-1} cos(mt) + a_{2m} sin(mt)].

#include <vector>

#include "elwave/common.hpp"

namespace elwave {

struct StarCurve {
    Vec2 center = Vec2::Zero();
    std::vector<double> radial; // alpha_0, alpha_1, ..., alpha_{2M}

    StarCurve() = default;
    StarCurve(Vec2 c, std::vector<double> coeffs) : center(c), radial(std::move(coeffs)) {
        if (radial.empty()) throw GeometryError("StarCurve: radial coefficients must include alpha_0");
    }

    static StarCurve circle(Vec2 c, double radius) { return StarCurve(c, {radius}); }

    int fourier_order() const { return int(radial.size()) / 2; }

    double radius(double theta) const {
        double r = radial[0];
        const int m_max = fourier_order();
        for (int m = 1; m <= m_max; ++m) {
            if (2 * m - 1 < int(radial.size())) r += radial[2 * m - 1] * std::cos(m * theta);
            if (2 * m < int(radial.size())) r += radial[2 * m] * std::sin(m * theta);
        }
        return r;
    }

    double radius_derivative(double theta) const {
        double dr = 0.0;
        const int m_max = fourier_order();
        for (int m = 1; m <= m_max; ++m) {
            if (2 * m - 1 < int(radial.size())) dr += -m * radial[2 * m - 1] * std::sin(m * theta);
            if (2 * m < int(radial.size())) dr += m * radial[2 * m] * std::cos(m * theta);
        }
        return dr;
    }

    Vec2 point(double theta) const {
        const double r = radius(theta);
        return center + r * Vec2{std::cos(theta), std::sin(theta)};
    }

    /// d gamma / d theta.
    Vec2 tangent(double theta) const {
        const double r = radius(theta), dr = radius_derivative(theta);
        const Vec2 rh{std::cos(theta), std::sin(theta)}, th{-std::sin(theta), std::cos(theta)};
        return dr * rh + r * th;
    }

    /// Outward unit normal for the counterclockwise parametrization.
    Vec2 outward_normal(double theta) const {
        const Vec2 t = tangent(theta).normalized();
        return Vec2{t[1], -t[0]};
    }

    double min_radius(int samples = 4096) const {
        double m = radius(0.0);
        for (int i = 1; i < samples; ++i) m = std::min(m, radius(2.0 * pi * i / samples));
        return m;
    }

    double max_distance_from_origin(int samples = 4096) const {
        double m = 0.0;
        for (int i = 0; i < samples; ++i) m = std::max(m, point(2.0 * pi * i / samples).norm());
        return m;
    }
};

/// Positivity, containment in B_{R}, and pairwise disjointness (sampled checks).
inline void validate_curves(const std::vector<StarCurve>& curves, double R, double margin = 0.0) {
    for (std::size_t j = 0; j < curves.size(); ++j) {
        if (curves[j].min_radius() <= 0.0)
            throw GeometryError("curve " + std::to_string(j) + ": radial function is not positive");
        if (curves[j].max_distance_from_origin() >= R - margin)
            throw GeometryError("curve " + std::to_string(j) + ": not contained in the disk");
    }
    const int ns = 512;
    for (std::size_t a = 0; a < curves.size(); ++a)
        for (std::size_t b = a + 1; b < curves.size(); ++b) {
            double dmin = 1e300;
            for (int i = 0; i < ns; ++i) {
                const Vec2 pa = curves[a].point(2.0 * pi * i / ns);
                for (int k = 0; k < ns; k += 4)
                    dmin = std::min(dmin, (pa - curves[b].point(2.0 * pi * k / ns)).norm());
            }
            if (dmin <= 0.0)
                throw GeometryError("curves " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are not disjoint");
            // also reject containment: center of b inside a (or vice versa)
            auto inside = [&](const StarCurve& c, const Vec2& p) {
                const Vec2 d = p - c.center;
                const double th = std::atan2(d[1], d[0]);
                return d.norm() < c.radius(th);
            };
            if (inside(curves[a], curves[b].center) || inside(curves[b], curves[a].center))
                throw GeometryError("curves " + std::to_string(a) + " and " + std::to_string(b) +
                                    " overlap");
        }
}

} // namespace elwave
