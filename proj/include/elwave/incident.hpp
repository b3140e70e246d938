#pragma once

// Analytic incident fields and surface tractions.
//
// Plane waves: u = c_p d exp(i k_p x.d) + c_s d_perp exp(i k_s x.d), d_perp = (-d2, d1).
// Point sources: u = Pi(x, y) a with the Navier free-space Green's tensor
//   Pi(x,y) = Phi_{ks} I / mu + grad grad [Phi_{ks} - Phi_{kp}] / (rho0 w^2),
//   Phi_k(x,y) = (i/4) H_0^{(1)}(k |x-y|).
// All derivatives (up to the third derivatives of Phi needed for grad u of a
// point source) are evaluated analytically through Hankel recurrences.

#include <variant>

#include "elwave/common.hpp"
#include "elwave/material.hpp"
#include "elwave/special_functions.hpp"

namespace elwave {

struct PlaneWave {
    Vec2 d = Vec2{1.0, 0.0}; // unit propagation direction
    Complex cp{1.0, 0.0};
    Complex cs{0.0, 0.0};
};

struct PointSource {
    Vec2 y = Vec2{10.0, 0.0};    // source location, |y| > R
    Vec2c a = Vec2c{1.0, 0.0};   // polarization
};

struct IncidentField {
    std::variant<PlaneWave, PointSource> kind;
    double omega = 1.0;
    IsotropicBackground background;

    IncidentField(PlaneWave pw, double omega_, IsotropicBackground bg)
        : kind(pw), omega(omega_), background(bg) {
        if (std::abs(std::get<PlaneWave>(kind).d.norm() - 1.0) > 1e-12)
            throw DomainError("IncidentField: plane-wave direction must be a unit vector");
    }
    IncidentField(PointSource ps, double omega_, IsotropicBackground bg)
        : kind(ps), omega(omega_), background(bg) {}
};

namespace detail {

// Radial derivative ladder for Phi(r) = (i/4) H_0(kr): value and first three
// radial derivatives.
struct PhiDerivs {
    Complex phi, d1, d2, d3;
};

inline PhiDerivs phi_derivs(double k, double r) {
    const auto [h0, h0p] = specfun::hankel1(0, k * r);
    const Complex h1 = -h0p;
    const Complex h1p = h0 - h1 / (k * r);
    const Complex h1pp = (1.0 / sqr(k * r) - 1.0) * h1 - h1p / (k * r);
    PhiDerivs d;
    d.phi = 0.25 * iu * h0;
    d.d1 = -0.25 * iu * k * h1;
    d.d2 = -0.25 * iu * k * k * h1p;
    d.d3 = -0.25 * iu * k * k * k * h1pp;
    return d;
}

// Second and third Cartesian derivative tensors of a radial function.
// T2_ij = A e_i e_j + B delta_ij with A = f'' - f'/r, B = f'/r.
// T3_ijk = (A' - 2A/r) e_i e_j e_k + (A/r)(d_ik e_j + d_jk e_i) + B' d_ij e_k.
struct RadialTensors {
    Complex t2[2][2];
    Complex t3[2][2][2];
};

inline RadialTensors radial_tensors(const PhiDerivs& f, double r, const Vec2& e) {
    const Complex A = f.d2 - f.d1 / r;
    const Complex B = f.d1 / r;
    const Complex Ap = f.d3 - f.d2 / r + f.d1 / (r * r);
    const Complex Bp = f.d2 / r - f.d1 / (r * r);
    RadialTensors out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.t2[i][j] = A * e[i] * e[j] + (i == j ? B : Complex{0.0});
            for (int k = 0; k < 2; ++k) {
                Complex v = (Ap - 2.0 * A / r) * e[i] * e[j] * e[k];
                if (i == k) v += (A / r) * e[j];
                if (j == k) v += (A / r) * e[i];
                if (i == j) v += Bp * e[k];
                out.t3[i][j][k] = v;
            }
        }
    return out;
}

} // namespace detail

/// u^in(x).
inline Vec2c eval_incident(const IncidentField& f, const Vec2& x) {
    const double kp = f.background.kp(f.omega);
    const double ks = f.background.ks(f.omega);
    if (const auto* pw = std::get_if<PlaneWave>(&f.kind)) {
        const Vec2 dperp{-pw->d[1], pw->d[0]};
        const Complex ep = std::exp(iu * kp * pw->d.dot(x));
        const Complex es = std::exp(iu * ks * pw->d.dot(x));
        return pw->cp * ep * pw->d.cast<Complex>() + pw->cs * es * dperp.cast<Complex>();
    }
    const auto& ps = std::get<PointSource>(f.kind);
    const Vec2 dx = x - ps.y;
    const double r = dx.norm();
    if (r < 1e-14) throw DomainError("eval_incident: evaluation at the point-source location");
    const Vec2 e = dx / r;
    const auto fs = detail::phi_derivs(ks, r);
    const auto fp = detail::phi_derivs(kp, r);
    const auto ts = detail::radial_tensors(fs, r, e);
    const auto tp = detail::radial_tensors(fp, r, e);
    const double w2rho = f.background.rho0 * f.omega * f.omega;
    Vec2c u = Vec2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Complex pi_ij = (ts.t2[i][j] - tp.t2[i][j]) / w2rho;
            if (i == j) pi_ij += fs.phi / f.background.mu;
            u[i] += pi_ij * ps.a[j];
        }
    return u;
}

/// grad u^in(x), entries (i,j) = du_i/dx_j.
inline Mat2c eval_incident_gradient(const IncidentField& f, const Vec2& x) {
    const double kp = f.background.kp(f.omega);
    const double ks = f.background.ks(f.omega);
    if (const auto* pw = std::get_if<PlaneWave>(&f.kind)) {
        const Vec2 dperp{-pw->d[1], pw->d[0]};
        const Complex ep = std::exp(iu * kp * pw->d.dot(x));
        const Complex es = std::exp(iu * ks * pw->d.dot(x));
        Mat2c g = Mat2c::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                g(i, j) = pw->cp * iu * kp * pw->d[i] * pw->d[j] * ep +
                          pw->cs * iu * ks * dperp[i] * pw->d[j] * es;
        return g;
    }
    const auto& ps = std::get<PointSource>(f.kind);
    const Vec2 dx = x - ps.y;
    const double r = dx.norm();
    if (r < 1e-14) throw DomainError("eval_incident_gradient: evaluation at the point-source location");
    const Vec2 e = dx / r;
    const auto fs = detail::phi_derivs(ks, r);
    const auto fp = detail::phi_derivs(kp, r);
    const auto ts = detail::radial_tensors(fs, r, e);
    const auto tp = detail::radial_tensors(fp, r, e);
    const double w2rho = f.background.rho0 * f.omega * f.omega;
    Mat2c g = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            Complex v{0.0};
            for (int j = 0; j < 2; ++j)
                v += (ts.t3[i][j][k] - tp.t3[i][j][k]) / w2rho * ps.a[j];
            v += (fs.d1 * e[k]) / f.background.mu * ps.a[i];
            g(i, k) = v;
        }
    return g;
}

/// Isotropic surface traction T u = 2 mu dnu(u) + lambda nu div u + mu nu_perp (d2 u1 - d1 u2).
inline Vec2c traction(const Mat2c& grad_u, const Vec2& nu, double lambda, double mu) {
    if (std::abs(nu.norm() - 1.0) > 1e-12)
        throw DomainError("traction: normal must be a unit vector");
    const Vec2 nup{-nu[1], nu[0]};
    const Complex div = grad_u(0, 0) + grad_u(1, 1);
    const Complex curl_flip = grad_u(0, 1) - grad_u(1, 0); // d2 u1 - d1 u2
    Vec2c t = Vec2c::Zero();
    for (int i = 0; i < 2; ++i)
        t[i] = 2.0 * mu * (grad_u(i, 0) * nu[0] + grad_u(i, 1) * nu[1]) + lambda * nu[i] * div +
               mu * nup[i] * curl_flip;
    return t;
}

/// Generalized stress T~ = (mu + mu~) dnu(u) + lambda~ nu div u - mu~ nu_perp curl u,
/// curl u = d1 u2 - d2 u1. Case (lambda~, mu~) = (lambda, mu) recovers traction().
inline Vec2c generalized_traction(const Mat2c& grad_u, const Vec2& nu, double mu, double lambda_t,
                                  double mu_t) {
    if (std::abs(nu.norm() - 1.0) > 1e-12)
        throw DomainError("generalized_traction: normal must be a unit vector");
    const Vec2 nup{-nu[1], nu[0]};
    const Complex div = grad_u(0, 0) + grad_u(1, 1);
    const Complex curl = grad_u(1, 0) - grad_u(0, 1); // d1 u2 - d2 u1
    Vec2c t = Vec2c::Zero();
    for (int i = 0; i < 2; ++i)
        t[i] = (mu + mu_t) * (grad_u(i, 0) * nu[0] + grad_u(i, 1) * nu[1]) + lambda_t * nu[i] * div -
               mu_t * nup[i] * curl;
    return t;
}

/// nu . sigma with sigma = lambda I div u + 2 mu eps(u); cross-check route for traction().
inline Vec2c traction_from_stress(const Mat2c& grad_u, const Vec2& nu, double lambda, double mu) {
    const Complex div = grad_u(0, 0) + grad_u(1, 1);
    Mat2c sig = mu * (grad_u + grad_u.transpose());
    sig(0, 0) += lambda * div;
    sig(1, 1) += lambda * div;
    return sig * nu.cast<Complex>();
}

} // namespace elwave
