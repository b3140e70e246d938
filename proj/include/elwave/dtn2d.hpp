#pragma once

// 2D DtN machinery on the circle Gamma_R: per-mode matrices
//   A_n = [tp gp, in; in, -ts gs],   Lambda_n = det A_n = n^2 - tp ts gp gs,
//   B_n = [(mu+mu~) tp^2 bp - lam~ tp^2,   i(mu+mu~) n (ts gs - 1);
//          i(mu+mu~) n (tp gp - 1),       -(mu+mu~) ts^2 bs - mu~ ts^2],
//   W_n = B_n A_n^{-1} / R,
// the truncated DtN action on boundary Fourier data, exterior radiating-field
// evaluation, and the scaled diagnostics behind the Rellich identity
//   Im(A_n^* B_n) = (2 w^2 rho0 R^2 / pi) diag(|H_n(tp)|^{-2}, |H_n(ts)|^{-2}).

#include <optional>
#include <vector>

#include "elwave/common.hpp"
#include "elwave/material.hpp"
#include "elwave/special_functions.hpp"

namespace elwave {

/// The three generalized-stress parameter choices discussed with (eq. constraint
/// (lam-mu)(lam+2mu)/(lam+3mu) < lam~ < lam+2mu); mu~ = lam + mu - lam~.
enum class StressCase { physical, pressure_like, intermediate };

inline double lambda_tilde_for(StressCase c, double lambda, double mu) {
    switch (c) {
        case StressCase::physical: return lambda;
        case StressCase::pressure_like: return lambda + mu;
        case StressCase::intermediate: return (lambda + 2.0 * mu) * (lambda + mu) / (lambda + 3.0 * mu);
    }
    return lambda;
}

struct DtnParams {
    double R = 1.0;
    double omega = 1.0;
    IsotropicBackground background;
    double lambda_tilde = 0.0;
    int n_trunc = 0;

    DtnParams() = default;
    DtnParams(double R_, double omega_, IsotropicBackground bg, std::optional<double> lt = std::nullopt,
              std::optional<int> nt = std::nullopt)
        : R(R_), omega(omega_), background(bg) {
        if (!(R > 0.0) || !(omega > 0.0)) throw DomainError("DtnParams: R and omega must be positive");
        lambda_tilde = lt.value_or(bg.lambda); // case (i): usual traction
        const double lo = (bg.lambda - bg.mu) * (bg.lambda + 2.0 * bg.mu) / (bg.lambda + 3.0 * bg.mu);
        const double hi = bg.lambda + 2.0 * bg.mu;
        if (!(lambda_tilde > lo) || !(lambda_tilde < hi))
            throw DomainError("DtnParams: lambda_tilde outside the admissible interval");
        n_trunc = nt.value_or(int(std::ceil(bg.ks(omega) * R)) + 16);
        if (n_trunc < 0 || n_trunc > specfun::max_order)
            throw DomainError("DtnParams: invalid truncation order");
    }

    double mu_tilde() const { return background.lambda + background.mu - lambda_tilde; }
    double tp() const { return background.kp(omega) * R; }
    double ts() const { return background.ks(omega) * R; }
};

struct DtnMode {
    int n = 0;
    Mat2c A, B, W;
    Complex Lambda{0.0};
};

namespace detail {

inline DtnMode assemble_mode_2d(const DtnParams& p, int n, const specfun::HankelRatio& rp,
                                const specfun::HankelRatio& rs) {
    const double tp = p.tp(), ts = p.ts();
    const double mu = p.background.mu;
    const double lt = p.lambda_tilde, mt = p.mu_tilde();
    const Complex gp = rp.gamma, gs = rs.gamma;
    const Complex bp = rp.beta, bs = rs.beta;
    const Complex in{0.0, double(n)};
    DtnMode m;
    m.n = n;
    m.A << tp * gp, in, in, -ts * gs;
    m.B << (mu + mt) * tp * tp * bp - lt * tp * tp, iu * (mu + mt) * double(n) * (ts * gs - 1.0),
        iu * (mu + mt) * double(n) * (tp * gp - 1.0), -(mu + mt) * ts * ts * bs - mt * ts * ts;
    m.Lambda = double(n) * double(n) - tp * ts * gp * gs;
    const double floor_ = 1e-14 * std::max(double(n) * double(n), std::abs(tp * ts * gp * gs));
    if (!(std::abs(m.Lambda) > floor_))
        throw InternalError("mode_matrices: Lambda_n vanished, which Lemma-level theory forbids");
    Mat2c ainv;
    ainv << -ts * gs, -in, -in, tp * gp;
    ainv /= m.Lambda;
    m.W = m.B * ainv / p.R;
    return m;
}

} // namespace detail

/// A_n, B_n, W_n, Lambda_n for a single mode.
inline DtnMode mode_matrices(const DtnParams& p, int n) {
    if (std::abs(n) > specfun::max_order) throw DomainError("mode_matrices: |n| exceeds order cap");
    const auto rp = specfun::hankel_ratio(std::abs(n), p.tp());
    const auto rs = specfun::hankel_ratio(std::abs(n), p.ts());
    return detail::assemble_mode_2d(p, n, rp, rs);
}

/// Build-once cache of modes 0..n_trunc; negative orders via W_{-n} = D W_n D,
/// D = diag(1,-1). Immutable after construction, safe for concurrent readers.
class DtnModeCache {
public:
    explicit DtnModeCache(const DtnParams& p) : params_(p) {
        const auto lp = specfun::hankel_ratio_ladder(p.n_trunc, p.tp());
        const auto ls = specfun::hankel_ratio_ladder(p.n_trunc, p.ts());
        modes_.reserve(p.n_trunc + 1);
        for (int n = 0; n <= p.n_trunc; ++n)
            modes_.push_back(detail::assemble_mode_2d(p, n, lp[n], ls[n]));
    }

    const DtnParams& params() const { return params_; }

    /// W_n for any |n| <= n_trunc.
    Mat2c W(int n) const {
        const Mat2c& w = modes_.at(std::abs(n)).W;
        if (n >= 0) return w;
        Mat2c out = w;
        out(0, 1) = -w(0, 1);
        out(1, 0) = -w(1, 0);
        return out;
    }

    /// Lambda and A^{-1}-based potential map R * A_n^{-1} for any |n| <= n_trunc.
    Mat2c potential_map(int n) const {
        const auto& m = modes_.at(std::abs(n));
        const double tp = params_.tp(), ts = params_.ts();
        const Complex gp = m.A(0, 0) / tp, gs = -m.A(1, 1) / ts;
        const Complex in{0.0, double(n)};
        Mat2c ainv;
        ainv << -ts * gs, -in, -in, tp * gp;
        ainv /= m.Lambda;
        return params_.R * ainv;
    }

    const DtnMode& mode(int abs_n) const { return modes_.at(abs_n); }

private:
    DtnParams params_;
    std::vector<DtnMode> modes_;
};

/// Fourier data of a vector trace on Gamma_R in the basis P_n = e^{in t} r_hat,
/// S_n = e^{in t} theta_hat, for |n| <= n_trunc. coeff(n) = (w_p^n, w_s^n).
struct BoundaryTrace {
    int n_trunc = 0;
    std::vector<Vec2c> coeffs; // index n + n_trunc

    BoundaryTrace() = default;
    explicit BoundaryTrace(int nt) : n_trunc(nt), coeffs(2 * nt + 1, Vec2c::Zero()) {}

    Vec2c& coeff(int n) { return coeffs.at(n + n_trunc); }
    const Vec2c& coeff(int n) const { return coeffs.at(n + n_trunc); }
};

/// Potential coefficients (psi_p^n, psi_s^n) of the radiating exterior field.
struct PotentialCoeffs {
    int n_trunc = 0;
    std::vector<Vec2c> coeffs;

    PotentialCoeffs() = default;
    explicit PotentialCoeffs(int nt) : n_trunc(nt), coeffs(2 * nt + 1, Vec2c::Zero()) {}

    Vec2c& coeff(int n) { return coeffs.at(n + n_trunc); }
    const Vec2c& coeff(int n) const { return coeffs.at(n + n_trunc); }
};

/// Fourier analysis of equi-angular samples u(theta_i), theta_i = 2 pi i / N:
/// w^n = (1/N) sum_i [u_i . rhat_i, u_i . thetahat_i] e^{-in theta_i}.
inline BoundaryTrace analyze_ring_samples(const std::vector<Vec2c>& u, int n_trunc) {
    const int nb = int(u.size());
    if (2 * n_trunc >= nb) throw DomainError("analyze_ring_samples: n_trunc >= N/2 (Nyquist)");
    BoundaryTrace w(n_trunc);
    for (int i = 0; i < nb; ++i) {
        const double th = 2.0 * pi * i / nb;
        const Complex up = u[i][0] * std::cos(th) + u[i][1] * std::sin(th);
        const Complex us = -u[i][0] * std::sin(th) + u[i][1] * std::cos(th);
        for (int n = -n_trunc; n <= n_trunc; ++n) {
            const Complex e = std::exp(-iu * double(n) * th) / double(nb);
            w.coeff(n)[0] += up * e;
            w.coeff(n)[1] += us * e;
        }
    }
    return w;
}

/// Generalized DtN action: traction coefficients W_n [w_p^n; w_s^n] mode by mode.
inline BoundaryTrace dtn_apply(const DtnModeCache& cache, const BoundaryTrace& w) {
    const int nt = std::min(w.n_trunc, cache.params().n_trunc);
    BoundaryTrace out(w.n_trunc);
    for (int n = -nt; n <= nt; ++n) out.coeff(n) = cache.W(n) * w.coeff(n);
    return out;
}

/// [psi_p^n; psi_s^n] = R A_n^{-1} [w_p^n; w_s^n].
inline PotentialCoeffs radiating_coeffs(const DtnModeCache& cache, const BoundaryTrace& w) {
    const int nt = std::min(w.n_trunc, cache.params().n_trunc);
    PotentialCoeffs out(w.n_trunc);
    for (int n = -nt; n <= nt; ++n) out.coeff(n) = cache.potential_map(n) * w.coeff(n);
    return out;
}

/// Radiating field v^sc(x) = grad psi_p + curl-> psi_s for |x| >= R, by term-wise
/// analytic differentiation of the Hankel-Fourier series.
inline Vec2c eval_exterior(const DtnParams& p, const PotentialCoeffs& psi, const Vec2& x) {
    const double r = x.norm();
    if (r < p.R * (1.0 - 1e-12)) throw DomainError("eval_exterior: point must satisfy |x| >= R");
    const double theta = std::atan2(x[1], x[0]);
    const double kp = p.background.kp(p.omega), ks = p.background.ks(p.omega);
    const int nt = psi.n_trunc;
    const auto lp_r = specfun::hankel_ratio_ladder(nt, kp * r);
    const auto lp_R = specfun::hankel_ratio_ladder(nt, kp * p.R);
    const auto ls_r = specfun::hankel_ratio_ladder(nt, ks * r);
    const auto ls_R = specfun::hankel_ratio_ladder(nt, ks * p.R);
    const Vec2 rhat{std::cos(theta), std::sin(theta)};
    const Vec2 that{-std::sin(theta), std::cos(theta)};
    auto ratio = [](const specfun::HankelRatio& num, const specfun::HankelRatio& den) {
        return (num.h / den.h) * std::exp((num.log_scale - den.log_scale));
    };
    Vec2c v = Vec2c::Zero();
    for (int n = -nt; n <= nt; ++n) {
        const int m = std::abs(n);
        const Complex ein = std::exp(iu * double(n) * theta);
        const Complex rp = ratio(lp_r[m], lp_R[m]);
        const Complex rs = ratio(ls_r[m], ls_R[m]);
        const Complex psip = psi.coeff(n)[0], psis = psi.coeff(n)[1];
        const Complex in_r = iu * double(n) / r;
        const Complex vr = kp * lp_r[m].gamma * rp * psip + in_r * rs * psis;
        const Complex vt = in_r * rp * psip - ks * ls_r[m].gamma * rs * psis;
        v += ein * (vr * rhat.cast<Complex>() + vt * that.cast<Complex>());
    }
    return v;
}

/// Scaled diagnostics of the Rellich identity for mode n:
///   lhs_p = Im(A^*B)_11 |H_n(tp)|^2,  lhs_s = Im(A^*B)_22 |H_n(ts)|^2,
///   rhs   = 2 w^2 rho0 R^2 / pi,
///   offdiag = |(A^*B)_12 - conj((A^*B)_21)| / (1 + max |A^*B|),
/// evaluated with the imaginary parts of gamma carried in scaled form so the
/// comparison stays meaningful even where |H_n| overflows.
struct RellichDiag {
    double lhs_p = 0.0, lhs_s = 0.0, rhs = 0.0, offdiag = 0.0;
};

inline RellichDiag rellich_diagnostics(const DtnParams& p, int n) {
    const int m = std::abs(n);
    const auto rp = specfun::hankel_ratio(m, p.tp());
    const auto rs = specfun::hankel_ratio(m, p.ts());
    auto scaled = [](const specfun::HankelRatio& r) {
        return Complex{r.gamma.real(), r.im_gamma_scaled};
    };
    auto build = [&](Complex gp, Complex gs) {
        const double tp = p.tp(), ts = p.ts();
        const double mu = p.background.mu, lt = p.lambda_tilde, mt = p.mu_tilde();
        const Complex bp = double(n) * n / (tp * tp) - 1.0 - gp / tp;
        const Complex bs = double(n) * n / (ts * ts) - 1.0 - gs / ts;
        const Complex in{0.0, double(n)};
        Mat2c A, B;
        A << tp * gp, in, in, -ts * gs;
        B << (mu + mt) * tp * tp * bp - lt * tp * tp, iu * (mu + mt) * double(n) * (ts * gs - 1.0),
            iu * (mu + mt) * double(n) * (tp * gp - 1.0), -(mu + mt) * ts * ts * bs - mt * ts * ts;
        return Mat2c(A.adjoint() * B);
    };
    RellichDiag out;
    out.rhs = 2.0 * p.omega * p.omega * p.background.rho0 * p.R * p.R / pi;
    out.lhs_p = build(scaled(rp), Complex{rs.gamma.real(), 0.0})(0, 0).imag();
    out.lhs_s = build(Complex{rp.gamma.real(), 0.0}, scaled(rs))(1, 1).imag();
    const Mat2c ab = build(rp.gamma, rs.gamma);
    out.offdiag = std::abs(ab(0, 1) - std::conj(ab(1, 0))) /
                  (1.0 + ab.cwiseAbs().maxCoeff());
    return out;
}

/// First index M such that -(W_n + W_n^*)/2 is positive definite (both leading
/// minors > 0) for every n in [M, n_max]. Throws if no such M exists.
inline int positivity_scan(const DtnParams& p, int n_max) {
    if (n_max > specfun::max_order) throw DomainError("positivity_scan: n_max exceeds order cap");
    const auto lp = specfun::hankel_ratio_ladder(n_max, p.tp());
    const auto ls = specfun::hankel_ratio_ladder(n_max, p.ts());
    int m_emp = -1;
    for (int n = n_max; n >= 0; --n) {
        const auto mode = detail::assemble_mode_2d(p, n, lp[n], ls[n]);
        const Mat2c wt = -0.5 * (mode.W + mode.W.adjoint());
        const double minor1 = wt(0, 0).real();
        const double det = (wt(0, 0) * wt(1, 1) - wt(0, 1) * wt(1, 0)).real();
        if (minor1 > 0.0 && det > 0.0)
            m_emp = n;
        else
            break;
    }
    if (m_emp < 0)
        throw DomainError("positivity_scan: no positive-definite tail found up to n_max");
    return m_emp;
}

} // namespace elwave
