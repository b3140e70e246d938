#pragma once

// Cylindrical and spherical Bessel/Hankel functions of integer order and real
// positive argument, plus the ratio quantities gamma = H'/H and beta = H''/H
// consumed by the DtN mode matrices.
//
// Evaluation strategy:
//   J_n      - Miller backward recurrence, normalized by J_0 + 2*sum J_{2k} = 1.
//   Y_0, Y_1 - ascending log-series for t < 2; for t >= 2 from J_0, J_0' and the
//              continued fraction gamma_0 = H_0'/H_0 (complex Lentz) through the
//              relation Y_0 = (Re(gamma_0) J_0 - J_0') / Im(gamma_0).
//   Y_n      - forward recurrence (dominant solution, stable).
//   gamma_n  - forward recurrence on the ratio H_n/H_{n-1}; the exponentially
//              small imaginary part is carried in factored (mantissa, exponent)
//              form so that Im(gamma) keeps full relative accuracy even when
//              |H_n| overflows the double range.

#include <array>
#include <utility>
#include <vector>

#include "elwave/common.hpp"

namespace elwave::specfun {

inline constexpr int max_order = 500;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

namespace detail {

inline void check_domain(int n, double t, const char* who) {
    if (!(t > 0.0))
        throw DomainError(std::string(who) + ": argument t must be positive, got t=" + std::to_string(t));
    if (n > max_order || n < -max_order)
        throw DomainError(std::string(who) + ": order |n| exceeds cap " + std::to_string(max_order) +
                          ", got n=" + std::to_string(n));
}

// Ascending power series for J_n(t); accurate for t up to ~10, used for t < 2.
inline double series_j(int n, double t) {
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= t / (2.0 * k);
    double s = term;
    const double q = -0.25 * t * t;
    for (int k = 1; k < 400; ++k) {
        term *= q / (double(k) * double(n + k));
        s += term;
        if (std::abs(term) < 1e-18 * std::abs(s) + 1e-320) break;
    }
    return s;
}

// Log-series for Y_0, Y_1 (t < 2: no cancellation worth speaking of).
inline std::pair<double, double> series_y01(double t) {
    const double j0 = series_j(0, t), j1 = series_j(1, t);
    const double L = std::log(0.5 * t) + euler_gamma;
    const double q = 0.25 * t * t;
    double s = 0.0, term = 1.0, hk = 0.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (double(k) * double(k));
        hk += 1.0 / k;
        s += (k % 2 == 1) ? term * hk : -term * hk;
    }
    const double y0 = (2.0 / pi) * (L * j0 + s);
    s = 1.0;
    term = 1.0;
    hk = 0.0;
    double hk1 = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (double(k) * double(k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        s += (k % 2 == 0) ? term * (hk + hk1) : -term * (hk + hk1);
    }
    const double y1 = (2.0 / pi) * (L * j1 - 1.0 / t - 0.25 * t * s);
    return {y0, y1};
}

// gamma_0 = H_0'(t)/H_0(t) = i - 1/(2t) + (i/t) * CF with
// CF = a_1/(b_1 + a_2/(b_2 + ...)), a_k = (2k-1)^2/4, b_k = 2(t + ik).
// Complex Lentz; converges for t >= 2.
inline Complex cf2_gamma0(double t) {
    constexpr double tiny = 1e-290;
    Complex f{tiny, 0.0}, c = f, d{0.0, 0.0};
    for (int k = 1; k < 100000; ++k) {
        const double a = 0.25 * (2.0 * k - 1.0) * (2.0 * k - 1.0);
        const Complex b{2.0 * t, 2.0 * k};
        d = b + a * d;
        if (d == Complex(0.0)) d = tiny;
        c = b + a / c;
        if (c == Complex(0.0)) c = tiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 5e-17) break;
    }
    return iu - 1.0 / (2.0 * t) + (iu / t) * f;
}

// Miller backward recurrence: J_0 .. J_nmax, sum-normalized.
inline std::vector<double> miller_j(int nmax, double t) {
    int base = std::max(nmax, std::max(int(t), 10));
    int m = std::max(nmax, int(t)) + 15 + int(std::sqrt(45.0 * base));
    if (m % 2 == 1) ++m;
    std::vector<double> out(nmax + 1, 0.0);
    double jp1 = 0.0, j = 1e-300, ssum = 0.0;
    for (int k = m; k >= 1; --k) {
        const double jm1 = 2.0 * k / t * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            ssum *= 1e-250;
            for (double& v : out) v *= 1e-250;
        }
        const int kk = k - 1;
        if (kk <= nmax) out[kk] = j;
        if (kk > 0 && kk % 2 == 0) ssum += 2.0 * j;
    }
    const double norm = j + ssum;
    for (double& v : out) v /= norm;
    return out;
}

struct CylSeeds {
    double j0, j1, y0, y1;
};

inline CylSeeds cyl_seeds(double t) {
    if (t < 2.0) {
        auto [y0, y1] = series_y01(t);
        return {series_j(0, t), series_j(1, t), y0, y1};
    }
    const auto j = miller_j(1, t);
    const Complex g0 = cf2_gamma0(t);
    const double p = g0.real(), q = g0.imag();
    const double j0p = -j[1];
    const double y0 = (p * j[0] - j0p) / q;
    const double y0p = q * j[0] + p * y0;
    return {j[0], j[1], y0, -y0p};
}

} // namespace detail

/// J_0(t), J_1(t).
inline std::pair<double, double> cyl_j01(double t) {
    detail::check_domain(0, t, "cyl_j01");
    if (t < 2.0) return {detail::series_j(0, t), detail::series_j(1, t)};
    const auto j = detail::miller_j(1, t);
    return {j[0], j[1]};
}

/// H_n^{(1)}(t) and its derivative. Negative orders via H_{-n} = (-1)^n H_n.
/// Throws OverflowError once |Y_n(t)| leaves the double range.
inline std::pair<Complex, Complex> hankel1(int n, double t) {
    detail::check_domain(n, t, "hankel1");
    const double sign = (n < 0 && (n & 1)) ? -1.0 : 1.0;
    const int m = std::abs(n);
    const int top = std::max(m, 1);
    const auto seeds = detail::cyl_seeds(t);
    const auto j = detail::miller_j(top, t);
    double ym1 = seeds.y0, y = seeds.y1;
    for (int k = 1; k < top; ++k) {
        const double yn = 2.0 * k / t * y - ym1;
        if (std::abs(yn) > 1e305)
            throw OverflowError("hankel1: |H_n(t)| exceeds double range at n=" + std::to_string(n) +
                                ", t=" + std::to_string(t));
        ym1 = y;
        y = yn;
    }
    if (m == 0) {
        const Complex h{seeds.j0, seeds.y0};
        const Complex dh = -Complex(j[1], seeds.y1); // H_0' = -H_1
        return {h, dh};
    }
    const Complex h{j[m], y};
    const Complex hm1 = (m == 1) ? Complex{seeds.j0, seeds.y0} : Complex{j[m - 1], ym1};
    const Complex dh = hm1 - double(m) / t * h;
    return {sign * h, sign * dh};
}

/// h_n^{(1)}(t) and derivative (spherical, n >= 0).
inline std::pair<Complex, Complex> spherical_hankel1(int n, double t) {
    detail::check_domain(n, t, "spherical_hankel1");
    if (n < 0) throw DomainError("spherical_hankel1: order must be non-negative");
    const Complex eit = std::exp(iu * t);
    const Complex h0 = -iu * eit / t;
    const Complex h1 = -eit * Complex(t, 1.0) / (t * t);
    if (n == 0) return {h0, -h1}; // h_0' = -h_1
    // y_n forward (dominant), j_n by backward recurrence matched to the larger seed
    double ym1 = -std::cos(t) / t;
    double y = -std::cos(t) / (t * t) - std::sin(t) / t;
    for (int k = 1; k < n; ++k) {
        const double yn = (2.0 * k + 1.0) / t * y - ym1;
        if (std::abs(yn) > 1e305)
            throw OverflowError("spherical_hankel1: |h_n(t)| exceeds double range at n=" + std::to_string(n) +
                                ", t=" + std::to_string(t));
        ym1 = y;
        y = yn;
    }
    int base = std::max(n, std::max(int(t), 10));
    int m = std::max(n, int(t)) + 15 + int(std::sqrt(45.0 * base));
    std::vector<double> jj(m + 2, 0.0);
    jj[m + 1] = 0.0;
    jj[m] = 1e-300;
    for (int k = m; k >= 1; --k) {
        jj[k - 1] = (2.0 * k + 1.0) / t * jj[k] - jj[k + 1];
        if (std::abs(jj[k - 1]) > 1e250)
            for (int q = k - 1; q <= m + 1; ++q) jj[q] *= 1e-250;
    }
    const double j0 = std::sin(t) / t;
    const double j1 = std::sin(t) / (t * t) - std::cos(t) / t;
    const double scale = (std::abs(j0) >= std::abs(j1)) ? j0 / jj[0] : j1 / jj[1];
    const double jn = jj[n] * scale, jnm1 = jj[n - 1] * scale;
    const Complex h{jn, y}, hm1{jnm1, ym1};
    const Complex dh = hm1 - (n + 1.0) / t * h;
    return {h, dh};
}

/// Ratio package for H_n^{(1)}. True values: h * exp(log_scale), dh * exp(log_scale);
/// log_scale is 0 whenever the magnitudes fit comfortably in double range.
/// im_gamma_scaled = Im(gamma) * |H_n(t)|^2 stays O(1) for all orders (Wronskian: = 2/(pi t)).
struct HankelRatio {
    int order = 0;
    double argument = 0.0;
    Complex h, dh;
    double log_scale = 0.0;
    Complex gamma, beta;
    double im_gamma_scaled = 0.0;
};

/// Spherical counterpart; beta satisfies beta = delta_n/t^2 - 1 - 2 gamma/t, delta_n = n(n+1).
struct SphericalHankelRatio {
    int order = 0;
    double argument = 0.0;
    Complex h, dh;
    double log_scale = 0.0;
    Complex gamma, beta;
    double im_gamma_scaled = 0.0;
};

namespace detail {

// Shared ratio-recurrence core for rho_{k+1} = coef(k) - 1/rho_k
// (2D: coef = 2k/t, spherical: coef = (2k+1)/t).
struct RatioLadderCore {
    Complex h0;           // value at order 0 (true)
    Complex rho;          // current ratio H_k/H_{k-1} while not factored
    double a = 0.0;       // Re(rho) once factored
    double b = 0.0;       // Im(rho) mantissa once factored
    double blog = 0.0;    // Im(rho) = b * exp(blog)
    bool factored = false;
    double log_abs = 0.0; // log |H_k|
    Complex phase;        // H_k / |H_k|
    int k = 0;

    RatioLadderCore(Complex h0_, Complex h1_) : h0(h0_) {
        log_abs = std::log(std::abs(h0_));
        phase = h0_ / std::abs(h0_);
        rho = h1_ / h0_;
    }

    // advance from order k to k+1 (valid for k >= 0; k=0 consumes the initial rho)
    void step(double coef) {
        if (k > 0) {
            if (!factored) {
                rho = coef - 1.0 / rho;
                a = rho.real();
                b = rho.imag();
                if (std::abs(b) < 1e-240 * std::abs(a)) factored = true;
            } else {
                const double m2 = a * a;
                b = b / m2;
                a = coef - a / m2;
                if (std::abs(b) < 1e-250) {
                    b *= 1e250;
                    blog -= 250.0 * std::log(10.0);
                }
            }
        }
        if (!factored) {
            log_abs += std::log(std::abs(rho));
            phase *= rho / std::abs(rho);
        } else {
            log_abs += std::log(std::abs(a));
            phase *= (a >= 0.0) ? 1.0 : -1.0;
        }
        ++k;
    }

    // gamma at current order k given the "derivative offset" dofs: gamma = 1/rho_k - ofs/t
    // (2D: ofs = k; spherical: ofs = k+1). Also yields im_gamma_scaled.
    std::pair<Complex, double> gamma_at(double ofs_over_t) const {
        if (!factored) {
            const Complex g = 1.0 / rho - ofs_over_t;
            return {g, g.imag() * std::exp(2.0 * log_abs)};
        }
        const double gre = 1.0 / a - ofs_over_t;
        const double gim_m = -b / (a * a); // Im(1/rho) with |rho|^2 ~ a^2
        const double gim = gim_m * std::exp(blog);
        return {Complex{gre, gim}, gim_m * std::exp(blog + 2.0 * log_abs)};
    }
};

} // namespace detail

/// All ratio packages for orders 0..nmax in one forward pass.
inline std::vector<HankelRatio> hankel_ratio_ladder(int nmax, double t) {
    detail::check_domain(nmax, t, "hankel_ratio");
    if (nmax < 0) throw DomainError("hankel_ratio_ladder: nmax must be >= 0");
    const auto s = detail::cyl_seeds(t);
    const Complex h0{s.j0, s.y0}, h1{s.j1, s.y1};
    detail::RatioLadderCore core(h0, h1);
    std::vector<HankelRatio> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        HankelRatio r;
        r.order = n;
        r.argument = t;
        if (n == 0) {
            r.gamma = -h1 / h0;
            r.im_gamma_scaled = r.gamma.imag() * std::norm(h0);
            r.log_scale = 0.0;
            r.h = h0;
        } else {
            core.step(2.0 * (n - 1) / t);
            auto [g, ims] = core.gamma_at(double(n) / t);
            r.gamma = g;
            r.im_gamma_scaled = ims;
            if (core.log_abs > -650.0 && core.log_abs < 650.0) {
                r.log_scale = 0.0;
                r.h = core.phase * std::exp(core.log_abs);
            } else {
                r.log_scale = core.log_abs;
                r.h = core.phase;
            }
        }
        r.dh = r.gamma * r.h;
        r.beta = double(n) * double(n) / (t * t) - 1.0 - r.gamma / t;
        out[n] = r;
    }
    return out;
}

/// Ratio package for a single order; negative n mapped by parity (gamma, beta even in n).
inline HankelRatio hankel_ratio(int n, double t) {
    detail::check_domain(n, t, "hankel_ratio");
    const int m = std::abs(n);
    HankelRatio r = hankel_ratio_ladder(m, t)[m];
    if (n < 0) {
        r.order = n;
        if (n & 1) {
            r.h = -r.h;
            r.dh = -r.dh;
        }
    }
    return r;
}

inline std::vector<SphericalHankelRatio> spherical_ratio_ladder(int nmax, double t) {
    detail::check_domain(nmax, t, "spherical_ratio");
    if (nmax < 0) throw DomainError("spherical_ratio_ladder: nmax must be >= 0");
    const Complex eit = std::exp(iu * t);
    const Complex h0 = -iu * eit / t;
    const Complex h1 = -eit * Complex(t, 1.0) / (t * t);
    detail::RatioLadderCore core(h0, h1);
    std::vector<SphericalHankelRatio> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        SphericalHankelRatio r;
        r.order = n;
        r.argument = t;
        if (n == 0) {
            r.gamma = -h1 / h0;
            r.im_gamma_scaled = r.gamma.imag() * std::norm(h0);
            r.h = h0;
        } else {
            core.step((2.0 * (n - 1) + 1.0) / t);
            auto [g, ims] = core.gamma_at((n + 1.0) / t);
            r.gamma = g;
            r.im_gamma_scaled = ims;
            if (core.log_abs > -650.0 && core.log_abs < 650.0) {
                r.log_scale = 0.0;
                r.h = core.phase * std::exp(core.log_abs);
            } else {
                r.log_scale = core.log_abs;
                r.h = core.phase;
            }
        }
        r.dh = r.gamma * r.h;
        const double dn = double(n) * double(n + 1);
        r.beta = dn / (t * t) - 1.0 - 2.0 * r.gamma / t;
        out[n] = r;
    }
    return out;
}

inline SphericalHankelRatio spherical_ratio(int n, double t) {
    detail::check_domain(n, t, "spherical_ratio");
    if (n < 0) throw DomainError("spherical_ratio: order must be non-negative");
    return spherical_ratio_ladder(n, t)[n];
}

} // namespace elwave::specfun
