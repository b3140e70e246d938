#pragma once

// Matrix-level 3D DtN mode system on the basis (V_nm, U_nm, Y_nm r_hat):
//   A_n = [R, 0, 0; 0, -1 - ts gs, sqrt(dn); 0, -sqrt(dn), tp gp],
//   Lambda_n = dn - tp gp (1 + ts gs),  dn = n(n+1),
//   B_n per the traction relations (V-row carries the factor R), W_n = B_n A_n^{-1} / R.
// No 3D PDE solve; this exists to verify the mode-level lemmas.

#include <vector>

#include "elwave/common.hpp"
#include "elwave/dtn2d.hpp"
#include "elwave/material.hpp"
#include "elwave/special_functions.hpp"

namespace elwave {

struct Dtn3dMode {
    int n = 0;
    double delta_n = 0.0;
    Mat3c A, B, W;
    Complex Lambda{0.0};
};

namespace detail {

inline Dtn3dMode assemble_mode_3d(const DtnParams& p, int n, const specfun::SphericalHankelRatio& rp,
                                  const specfun::SphericalHankelRatio& rs) {
    const double tp = p.tp(), ts = p.ts();
    const double mu = p.background.mu, lt = p.lambda_tilde, mt = p.mu_tilde();
    const double dn = double(n) * double(n + 1);
    const double sd = std::sqrt(dn);
    const Complex gp = rp.gamma, gs = rs.gamma;
    const Complex bp = rp.beta, bs = rs.beta;
    Dtn3dMode m;
    m.n = n;
    m.delta_n = dn;
    m.A << p.R, 0.0, 0.0, 0.0, -1.0 - ts * gs, sd, 0.0, -sd, tp * gp;
    m.B << p.R * (mu * ts * gs - mt), 0.0, 0.0,
        0.0, (mu + mt) * (1.0 - ts * gs - ts * ts * bs) - mt * ts * ts, sd * (mu + mt) * (tp * gp - 1.0),
        0.0, sd * (mu + mt) * (1.0 - ts * gs), (mu + mt) * tp * tp * bp - lt * tp * tp;
    m.Lambda = dn - tp * gp * (1.0 + ts * gs);
    // Im(Lambda) = -Im(tp gp)(1 + Re(ts gs)) - Re(tp gp) Im(ts gs); both terms are
    // nonnegative. Checked on the scaled imaginary parts, which never underflow.
    const double term_p = -(tp * rp.im_gamma_scaled) * (1.0 + (ts * gs).real());
    const double term_s = -(tp * gp).real() * (ts * rs.im_gamma_scaled);
    if (!(term_p > -1e-12) || !(term_s > -1e-12) || !(term_p + term_s > 0.0))
        throw InternalError("mode_matrices_3d: Im(Lambda_n) <= 0 violates invertibility");
    Mat3c ainv = Mat3c::Zero();
    ainv(0, 0) = 1.0 / p.R;
    ainv(1, 1) = tp * gp / m.Lambda;
    ainv(1, 2) = -sd / m.Lambda;
    ainv(2, 1) = sd / m.Lambda;
    ainv(2, 2) = (-1.0 - ts * gs) / m.Lambda;
    m.W = m.B * ainv / p.R;
    return m;
}

} // namespace detail

/// A_n, B_n, W_n, Lambda_n of the 3D mode system (n >= 0).
inline Dtn3dMode mode_matrices_3d(const DtnParams& p, int n) {
    if (n < 0) throw DomainError("mode_matrices_3d: order must be non-negative");
    if (n > specfun::max_order) throw DomainError("mode_matrices_3d: order exceeds cap");
    const auto rp = specfun::spherical_ratio(n, p.tp());
    const auto rs = specfun::spherical_ratio(n, p.ts());
    return detail::assemble_mode_3d(p, n, rp, rs);
}

/// Closed-form A_n^{-1} per the displayed inverse (for cross-checks).
inline Mat3c closed_form_inverse_3d(const Dtn3dMode& m, const DtnParams& p) {
    const double tp = p.tp(), ts = p.ts();
    const double sd = std::sqrt(m.delta_n);
    const Complex gp = m.A(2, 2) / tp;
    const Complex gs = (-1.0 - m.A(1, 1)) / ts;
    Mat3c ainv = Mat3c::Zero();
    ainv(0, 0) = 1.0 / p.R;
    ainv(1, 1) = tp * gp / m.Lambda;
    ainv(1, 2) = -sd / m.Lambda;
    ainv(2, 1) = sd / m.Lambda;
    ainv(2, 2) = (-1.0 - ts * gs) / m.Lambda;
    return ainv;
}

struct Rellich3dDiag {
    // scaled diagonal: lhs_k = Im(A^*B)_kk * |h_n(t)|^2 with t the entry's argument
    double lhs_v = 0.0, lhs_u = 0.0, lhs_y = 0.0;
    double rhs_v = 0.0, rhs_u = 0.0, rhs_y = 0.0;
    double offdiag = 0.0;
    double zero_couplings = 0.0; // max |W(0,1)|,|W(1,0)|,|W(0,2)|,|W(2,0)| over scale
};

/// Im(A_n^* B_n) = diag(R^2 mu Im(ts gs), w^2 rho0 R^2 Im(ts gs), w^2 rho0 R^2 Im(tp gp)),
/// verified in scaled form.
inline Rellich3dDiag rellich_diagnostics_3d(const DtnParams& p, int n) {
    const auto rp = specfun::spherical_ratio(n, p.tp());
    const auto rs = specfun::spherical_ratio(n, p.ts());
    const double tp = p.tp(), ts = p.ts();
    auto build = [&](Complex gp, Complex gs) {
        const double mu = p.background.mu, lt = p.lambda_tilde, mt = p.mu_tilde();
        const double dn = double(n) * double(n + 1), sd = std::sqrt(dn);
        const Complex bp = dn / (tp * tp) - 1.0 - 2.0 * gp / tp;
        const Complex bs = dn / (ts * ts) - 1.0 - 2.0 * gs / ts;
        Mat3c A, B;
        A << p.R, 0.0, 0.0, 0.0, -1.0 - ts * gs, sd, 0.0, -sd, tp * gp;
        B << p.R * (mu * ts * gs - mt), 0.0, 0.0,
            0.0, (mu + mt) * (1.0 - ts * gs - ts * ts * bs) - mt * ts * ts, sd * (mu + mt) * (tp * gp - 1.0),
            0.0, sd * (mu + mt) * (1.0 - ts * gs), (mu + mt) * tp * tp * bp - lt * tp * tp;
        return Mat3c(A.adjoint() * B);
    };
    const double w2rR2 = p.omega * p.omega * p.background.rho0 * p.R * p.R;
    Rellich3dDiag out;
    // scaled gammas: Im replaced by Im * |h|^2 (entries are linear in each Im part)
    const Complex gp_s{rp.gamma.real(), rp.im_gamma_scaled};
    const Complex gs_s{rs.gamma.real(), rs.im_gamma_scaled};
    const Mat3c m_s = build(Complex{rp.gamma.real(), 0.0}, gs_s);
    const Mat3c m_p = build(gp_s, Complex{rs.gamma.real(), 0.0});
    out.lhs_v = m_s(0, 0).imag();
    out.lhs_u = m_s(1, 1).imag();
    out.lhs_y = m_p(2, 2).imag();
    out.rhs_v = p.R * p.R * p.background.mu * ts * rs.im_gamma_scaled;
    out.rhs_u = w2rR2 * ts * rs.im_gamma_scaled;
    out.rhs_y = w2rR2 * tp * rp.im_gamma_scaled;
    const Mat3c ab = build(rp.gamma, rs.gamma);
    double off = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) off = std::max(off, std::abs(ab(i, j) - std::conj(ab(j, i))));
    out.offdiag = off / (1.0 + ab.cwiseAbs().maxCoeff());
    return out;
}

/// First index M_emp with -(W_n + W_n^*)/2 positive definite for all n in [M_emp, n_max]
/// (three leading principal minors). Throws when no such index exists.
inline int positivity_scan_3d(const DtnParams& p, int n_max) {
    if (n_max > specfun::max_order) throw DomainError("positivity_scan_3d: n_max exceeds order cap");
    const auto lp = specfun::spherical_ratio_ladder(n_max, p.tp());
    const auto ls = specfun::spherical_ratio_ladder(n_max, p.ts());
    int m_emp = -1;
    for (int n = n_max; n >= 0; --n) {
        const auto mode = detail::assemble_mode_3d(p, n, lp[n], ls[n]);
        const Mat3c wt = -0.5 * (mode.W + mode.W.adjoint());
        const double m1 = wt(0, 0).real();
        const double m2 = (wt.topLeftCorner<2, 2>().determinant()).real();
        const double m3 = wt.determinant().real();
        if (m1 > 0.0 && m2 > 0.0 && m3 > 0.0)
            m_emp = n;
        else
            break;
    }
    if (m_emp < 0)
        throw DomainError("positivity_scan_3d: no positive-definite tail found up to n_max");
    return m_emp;
}

} // namespace elwave
