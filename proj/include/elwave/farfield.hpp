#pragma once

// P/S far-field patterns from the scattered trace on Gamma_R:
//   Psi_alpha^n = psi_alpha^n / H_n^{(1)}(k_alpha R),
//   u_p^inf(theta) =  4 k_p sum_n Psi_p^n e^{in(theta - pi/2)},
//   u_s^inf(theta) = -4 k_s sum_n Psi_s^n e^{in(theta - pi/2)},
// u^inf(theta) = u_p^inf xhat + u_s^inf xhat_perp.

#include <vector>

#include "elwave/common.hpp"
#include "elwave/dtn2d.hpp"
#include "elwave/special_functions.hpp"

namespace elwave {

struct FarField {
    std::vector<double> angles;
    std::vector<Complex> up, us;

    Vec2c vector_at(std::size_t k) const {
        const Vec2 xh{std::cos(angles[k]), std::sin(angles[k])};
        const Vec2 xp{-std::sin(angles[k]), std::cos(angles[k])};
        return up[k] * xh.cast<Complex>() + us[k] * xp.cast<Complex>();
    }
};

inline FarField farfield_from_trace(const DtnModeCache& cache, const BoundaryTrace& w,
                                    const std::vector<double>& angles) {
    const auto& p = cache.params();
    const int nt = std::min(w.n_trunc, p.n_trunc);
    const double kp = p.background.kp(p.omega), ks = p.background.ks(p.omega);
    const auto lp = specfun::hankel_ratio_ladder(nt, p.tp());
    const auto ls = specfun::hankel_ratio_ladder(nt, p.ts());
    const PotentialCoeffs psi = radiating_coeffs(cache, w);
    std::vector<Complex> cp(2 * nt + 1), cs(2 * nt + 1);
    for (int n = -nt; n <= nt; ++n) {
        const int m = std::abs(n);
        const double parity = (n < 0 && (m & 1)) ? -1.0 : 1.0;
        // modes whose Hankel magnitude left the double range contribute nothing
        cp[n + nt] = (lp[m].log_scale == 0.0) ? psi.coeff(n)[0] / (parity * lp[m].h) : Complex{0.0};
        cs[n + nt] = (ls[m].log_scale == 0.0) ? psi.coeff(n)[1] / (parity * ls[m].h) : Complex{0.0};
    }
    FarField out;
    out.angles = angles;
    out.up.resize(angles.size());
    out.us.resize(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        Complex sp{0.0}, ss{0.0};
        for (int n = -nt; n <= nt; ++n) {
            const Complex e = std::exp(iu * double(n) * (angles[k] - 0.5 * pi));
            sp += cp[n + nt] * e;
            ss += cs[n + nt] * e;
        }
        out.up[k] = 4.0 * kp * sp;
        out.us[k] = -4.0 * ks * ss;
    }
    return out;
}

} // namespace elwave
