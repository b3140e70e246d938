#pragma once

// Manufactured transmission solutions used for convergence studies:
//   case 1 (isotropic obstacle):   u = grad J_0(k_{p,1}|x|) inside,
//   case 2 (anisotropic obstacle): u = p exp(i (w/v) x.d) inside,
// both with u^sc = grad H_0^{(1)}(k_p |x|) outside, and the interface data
//   f = u - u^sc,  g = N^- u - T u^sc on the obstacle curve.

#include "elwave/fem.hpp"
#include "elwave/incident.hpp"
#include "elwave/material.hpp"
#include "elwave/special_functions.hpp"

namespace elwave {

namespace refdetail {

// value and gradient of grad Phi(|x|) for a radial potential Phi with
// Phi'(r) = -k Z_1(k r), Phi'' = -k^2 (Z_0 - Z_1/(k r)); Z in {J, H^{(1)}}
template <bool Hankel>
inline void radial_gradient_field(double k, const Vec2& x, Vec2c& value, Mat2c& grad) {
    const double r = x.norm();
    const Vec2 e = x / r;
    Complex z0, z1;
    if constexpr (Hankel) {
        auto [h0, dh0] = specfun::hankel1(0, k * r);
        z0 = h0;
        z1 = -dh0;
    } else {
        auto [j0, j1] = specfun::cyl_j01(k * r);
        z0 = j0;
        z1 = j1;
    }
    const Complex dphi = -k * z1;
    const Complex ddphi = -k * k * (z0 - z1 / (k * r));
    value = dphi * e.cast<Complex>();
    grad = (ddphi - dphi / r) * (e * e.transpose()).cast<Complex>() +
           (dphi / r) * Mat2c::Identity();
}

} // namespace refdetail

/// One manufactured transmission problem: exact fields per region plus the
/// interface jumps consumed by solve_transmission.
struct TransmissionCase {
    IsotropicBackground background;
    StiffnessTensor2D obstacle;
    double omega = 1.0;
    AnalyticField inside, outside;
    bool isotropic_inside = true;
    double lambda1 = 0.0, mu1 = 0.0; // set when the obstacle is isotropic

    Vec2c jump_f(const Vec2& x) const { return inside.value(x) - outside.value(x); }

    Vec2c jump_g(const Vec2& x, const Vec2& nu) const {
        const Mat2c gi = inside.gradient(x);
        const Mat2c go = outside.gradient(x);
        Vec2c n_in;
        if (isotropic_inside)
            n_in = traction(gi, nu, lambda1, mu1);
        else
            n_in = obstacle.stress(gi) * nu.cast<Complex>();
        return n_in - traction(go, nu, background.lambda, background.mu);
    }

    std::vector<AnalyticField> exact_by_tag() const { return {outside, inside}; }
};

/// Example-1 data: lambda1=2, mu1=3, rho1=3 inside; (1, 2, 1) background.
inline TransmissionCase example1_case(double omega) {
    TransmissionCase c;
    c.background = IsotropicBackground{1.0, 2.0, 1.0};
    c.lambda1 = 2.0;
    c.mu1 = 3.0;
    c.obstacle = isotropic_stiffness(2.0, 3.0, 3.0);
    c.omega = omega;
    c.isotropic_inside = true;
    const double kp1 = omega * std::sqrt(3.0 / 8.0);
    const double kp = c.background.kp(omega);
    c.inside.value = [kp1](const Vec2& x) {
        Vec2c v;
        Mat2c g;
        refdetail::radial_gradient_field<false>(kp1, x, v, g);
        return v;
    };
    c.inside.gradient = [kp1](const Vec2& x) {
        Vec2c v;
        Mat2c g;
        refdetail::radial_gradient_field<false>(kp1, x, v, g);
        return g;
    };
    c.outside.value = [kp](const Vec2& x) {
        Vec2c v;
        Mat2c g;
        refdetail::radial_gradient_field<true>(kp, x, v, g);
        return v;
    };
    c.outside.gradient = [kp](const Vec2& x) {
        Vec2c v;
        Mat2c g;
        refdetail::radial_gradient_field<true>(kp, x, v, g);
        return g;
    };
    return c;
}

/// Example-2 data: the anisotropic tensor of the paper's second experiment and a
/// quasi-P plane wave inside travelling along d = (sqrt2/2, sqrt2/2).
inline TransmissionCase example2_case(double omega) {
    TransmissionCase c;
    c.background = IsotropicBackground{1.0, 2.0, 1.0};
    c.obstacle = StiffnessTensor2D(10.5, 3.25, -0.65, 13.0, -1.52, 4.75, 3.0);
    c.omega = omega;
    c.isotropic_inside = false;
    const double s = std::sqrt(2.0) / 2.0;
    const Vec2 d{s, s};
    auto [fast, slow] = plane_wave_modes(c.obstacle, d);
    (void)slow;
    const double v = fast.velocity;
    const Vec2 p = fast.polarization;
    const double kin = omega / v;
    const double kp = c.background.kp(omega);
    c.inside.value = [kin, p, d](const Vec2& x) {
        return Vec2c(p.cast<Complex>() * std::exp(iu * kin * d.dot(x)));
    };
    c.inside.gradient = [kin, p, d](const Vec2& x) {
        const Complex e = std::exp(iu * kin * d.dot(x));
        return Mat2c(iu * kin * e * (p * d.transpose()).cast<Complex>());
    };
    c.outside.value = [kp](const Vec2& x) {
        Vec2c v2;
        Mat2c g;
        refdetail::radial_gradient_field<true>(kp, x, v2, g);
        return v2;
    };
    c.outside.gradient = [kp](const Vec2& x) {
        Vec2c v2;
        Mat2c g;
        refdetail::radial_gradient_field<true>(kp, x, v2, g);
        return g;
    };
    return c;
}

/// Interface jump arrays of a TransmissionCase on a given mesh.
inline std::vector<InterfaceJumps> transmission_jumps(const TransmissionCase& c, const Mesh2D& mesh) {
    std::vector<InterfaceJumps> out;
    for (const auto& ring : mesh.interface_rings) {
        InterfaceJumps j;
        for (std::size_t i = 0; i < ring.nodes.size(); ++i) {
            const Vec2& x = mesh.nodes[ring.nodes[i]];
            const Vec2 nu = mesh.curves[out.size()].outward_normal(ring.theta[i]);
            j.f.push_back(c.jump_f(x));
            j.g.push_back(c.jump_g(x, nu));
        }
        out.push_back(std::move(j));
    }
    return out;
}

/// Convergence study: solve the transmission case on `levels` uniformly refined
/// meshes; returns (E0, E1) per level.
inline std::vector<std::pair<double, double>> transmission_convergence(const TransmissionCase& c,
                                                                       const StarCurve& curve, double R,
                                                                       double h0, int levels,
                                                                       int n_trunc, int min_outer = 32) {
    std::vector<std::pair<double, double>> errs;
    Mesh2D mesh = generate({curve}, R, h0, min_outer);
    for (int lev = 0; lev < levels; ++lev) {
        DtnParams dtn(R, c.omega, c.background, std::nullopt, n_trunc);
        std::vector<StiffnessTensor2D> mats{
            isotropic_stiffness(c.background.lambda, c.background.mu, c.background.rho0), c.obstacle};
        AssembledSystem sys = assemble(mesh, mats, dtn);
        const FieldSolution sol = solve_transmission(sys, transmission_jumps(c, mesh));
        errs.push_back(error_norms(mesh, sol, c.exact_by_tag()));
        if (lev + 1 < levels) mesh = refine(mesh);
    }
    return errs;
}

} // namespace elwave
