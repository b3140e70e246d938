#pragma once

// P1 finite elements for the truncated variational problem
//   sum_j int_{Omega_j} C_j : grad u : grad conj(v) - w^2 rho_j u.conj(v)
//   - int_{Gamma_R} T~ u . conj(v)  =  rhs(v),
// with the DtN boundary term discretized spectrally on the equi-angular ring:
// trapezoidal Fourier analysis of nodal traces, per-mode multiplication by W_n,
// synthesis against test traces (dense block over boundary dofs).
//
// The transmission problems (prescribed interface jumps f, g) reuse the same
// factorized operator: the Dirichlet jump is imposed by a lifting supported on
// the obstacle-side interface nodes, the Neumann jump is a natural load.

#include <functional>
#include <memory>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "elwave/common.hpp"
#include "elwave/dtn2d.hpp"
#include "elwave/incident.hpp"
#include "elwave/material.hpp"
#include "elwave/mesh.hpp"

namespace elwave {

using SparseC = Eigen::SparseMatrix<Complex>;
using VectorXc = Eigen::VectorXcd;

namespace femdetail {

struct ElementGeom {
    double area;
    Vec2 grad[3]; // P1 basis gradients
};

inline ElementGeom element_geom(const Mesh2D& m, const Mesh2D::Tri& t) {
    const Vec2 &a = m.nodes[t.v[0]], &b = m.nodes[t.v[1]], &c = m.nodes[t.v[2]];
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    ElementGeom g;
    g.area = 0.5 * det;
    g.grad[0] = Vec2{b[1] - c[1], c[0] - b[0]} / det;
    g.grad[1] = Vec2{c[1] - a[1], a[0] - c[0]} / det;
    g.grad[2] = Vec2{a[1] - b[1], b[0] - a[0]} / det;
    return g;
}

// 6x6 element matrix: area * B^T C B - w^2 rho * consistent mass
inline void element_matrix(const Mesh2D& m, const Mesh2D::Tri& t, const StiffnessTensor2D& mat,
                           double omega, Complex out[6][6]) {
    const ElementGeom g = element_geom(m, t);
    double B[3][6] = {};
    for (int k = 0; k < 3; ++k) {
        B[0][2 * k] = g.grad[k][0];
        B[1][2 * k + 1] = g.grad[k][1];
        B[2][2 * k] = g.grad[k][1];
        B[2][2 * k + 1] = g.grad[k][0];
    }
    const auto& c = mat.voigt;
    double cb[3][6];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 6; ++j)
            cb[i][j] = c(i, 0) * B[0][j] + c(i, 1) * B[1][j] + c(i, 2) * B[2][j];
    const Complex mass_fac = -omega * omega * mat.rho * g.area / 12.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double stiff = 0.0;
            for (int r = 0; r < 3; ++r) stiff += B[r][i] * cb[r][j];
            Complex v = g.area * stiff;
            if ((i % 2) == (j % 2)) v += mass_fac * ((i / 2 == j / 2) ? 2.0 : 1.0);
            out[i][j] = v;
        }
}

} // namespace femdetail

/// Fourier analysis of ring nodal values (exact for trigonometric polynomials
/// below Nyquist): w^n = (1/N_b) sum_i [u_i . rhat_i, u_i . thetahat_i] e^{-in theta_i}.
inline BoundaryTrace analyze_ring_trace(const Mesh2D& mesh, const VectorXc& nodal, int n_trunc) {
    const int nb = mesh.n_boundary();
    if (2 * n_trunc >= nb) throw DomainError("analyze_ring_trace: n_trunc >= N_b/2 (Nyquist)");
    BoundaryTrace w(n_trunc);
    for (int i = 0; i < nb; ++i) {
        const int node = mesh.outer_ring[i];
        const double th = 2.0 * pi * i / nb;
        const Vec2 rh{std::cos(th), std::sin(th)}, ta{-std::sin(th), std::cos(th)};
        const Vec2c u{nodal[2 * node], nodal[2 * node + 1]};
        const Complex up = u[0] * rh[0] + u[1] * rh[1];
        const Complex us = u[0] * ta[0] + u[1] * ta[1];
        for (int n = -n_trunc; n <= n_trunc; ++n) {
            const Complex e = std::exp(-iu * double(n) * th) / double(nb);
            w.coeff(n)[0] += up * e;
            w.coeff(n)[1] += us * e;
        }
    }
    return w;
}

/// Assembled operator: volume terms of all regions, the DtN block on the ring,
/// a reusable sparse LU factorization, and the obstacle-only volume matrix used
/// for interface-jump liftings.
class AssembledSystem {
public:
    AssembledSystem(Mesh2D mesh, std::vector<StiffnessTensor2D> materials, DtnParams dtn)
        : mesh_(std::move(mesh)), materials_(std::move(materials)), dtn_(dtn), cache_(dtn) {
        const int n_regions = int(mesh_.curves.size()) + 1;
        if (int(materials_.size()) != n_regions)
            throw DomainError("assemble: need one material per region (background + obstacles)");
        if (std::abs(dtn_.R - mesh_.R) > 1e-12 * mesh_.R)
            throw DomainError("assemble: DtN radius does not match the mesh");
        if (2 * dtn_.n_trunc >= mesh_.n_boundary())
            throw DomainError("assemble: N_t >= N_b/2 violates the ring Nyquist constraint");
        build();
    }

    const Mesh2D& mesh() const { return mesh_; }
    const DtnParams& dtn() const { return dtn_; }
    const DtnModeCache& modes() const { return cache_; }
    const SparseC& matrix() const { return K_; }
    const SparseC& volume_matrix() const { return Kvol_; }
    const SparseC& obstacle_matrix() const { return Kobs_; }
    const Eigen::MatrixXcd& dtn_block() const { return dtn_block_; }
    int n_dofs() const { return 2 * int(mesh_.nodes.size()); }

    VectorXc solve(const VectorXc& rhs) const {
        VectorXc x = lu_->solve(rhs);
        if (lu_->info() != Eigen::Success)
            throw std::runtime_error("solve: sparse LU back-substitution failed");
        return x;
    }

    /// Trапezoid weights of the interface ring polyline (for natural loads).
    std::vector<double> ring_weights(std::size_t ring_idx) const {
        const auto& ring = mesh_.interface_rings.at(ring_idx);
        const int n = int(ring.nodes.size());
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const Vec2& a = mesh_.nodes[ring.nodes[i]];
            const Vec2& b = mesh_.nodes[ring.nodes[(i + 1) % n]];
            const double len = (b - a).norm();
            w[i] += 0.5 * len;
            w[(i + 1) % n] += 0.5 * len;
        }
        return w;
    }

private:
    void build() {
        const int nd = n_dofs();
        std::vector<Eigen::Triplet<Complex>> trip, trip_vol, trip_obs;
        Complex ke[6][6];
        for (const auto& t : mesh_.triangles) {
            femdetail::element_matrix(mesh_, t, materials_.at(t.tag), dtn_.omega, ke);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    const int gi = 2 * t.v[i / 2] + i % 2;
                    const int gj = 2 * t.v[j / 2] + j % 2;
                    trip.emplace_back(gi, gj, ke[i][j]);
                    trip_vol.emplace_back(gi, gj, ke[i][j]);
                    if (t.tag > 0) trip_obs.emplace_back(gi, gj, ke[i][j]);
                }
        }
        // DtN block over ring dofs: K -= 2 pi R sum_n F_n^H W_n F_n
        const int nb = mesh_.n_boundary();
        const int nt = dtn_.n_trunc;
        dtn_block_.setZero(2 * nb, 2 * nb);
        Eigen::MatrixXcd F(2, 2 * nb);
        for (int n = -nt; n <= nt; ++n) {
            F.setZero();
            for (int i = 0; i < nb; ++i) {
                const double th = 2.0 * pi * i / nb;
                const Complex e = std::exp(-iu * double(n) * th) / double(nb);
                F(0, 2 * i) = e * std::cos(th);
                F(0, 2 * i + 1) = e * std::sin(th);
                F(1, 2 * i) = -e * std::sin(th);
                F(1, 2 * i + 1) = e * std::cos(th);
            }
            dtn_block_.noalias() -= 2.0 * pi * dtn_.R * (F.adjoint() * (cache_.W(n) * F));
        }
        for (int i = 0; i < nb; ++i)
            for (int ci = 0; ci < 2; ++ci)
                for (int j = 0; j < nb; ++j)
                    for (int cj = 0; cj < 2; ++cj)
                        trip.emplace_back(2 * mesh_.outer_ring[i] + ci, 2 * mesh_.outer_ring[j] + cj,
                                          dtn_block_(2 * i + ci, 2 * j + cj));
        K_.resize(nd, nd);
        K_.setFromTriplets(trip.begin(), trip.end());
        Kvol_.resize(nd, nd);
        Kvol_.setFromTriplets(trip_vol.begin(), trip_vol.end());
        Kobs_.resize(nd, nd);
        Kobs_.setFromTriplets(trip_obs.begin(), trip_obs.end());
        lu_ = std::make_unique<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>>();
        lu_->compute(K_);
        if (lu_->info() != Eigen::Success)
            throw std::runtime_error("assemble: sparse LU factorization failed (singular system?)");
    }

    Mesh2D mesh_;
    std::vector<StiffnessTensor2D> materials_;
    DtnParams dtn_;
    DtnModeCache cache_;
    SparseC K_, Kvol_, Kobs_;
    Eigen::MatrixXcd dtn_block_;
    std::unique_ptr<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>> lu_;
};

inline AssembledSystem assemble(Mesh2D mesh, std::vector<StiffnessTensor2D> materials, DtnParams dtn) {
    return AssembledSystem(std::move(mesh), std::move(materials), dtn);
}

/// Volume terms only (stiffness - omega^2 mass), no DtN block; omega = 0 yields
/// the static elasticity stiffness matrix.
inline SparseC assemble_volume(const Mesh2D& mesh, const std::vector<StiffnessTensor2D>& materials,
                               double omega) {
    if (int(materials.size()) != int(mesh.curves.size()) + 1)
        throw DomainError("assemble_volume: need one material per region");
    std::vector<Eigen::Triplet<Complex>> trip;
    Complex ke[6][6];
    for (const auto& t : mesh.triangles) {
        femdetail::element_matrix(mesh, t, materials.at(t.tag), omega, ke);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                trip.emplace_back(2 * t.v[i / 2] + i % 2, 2 * t.v[j / 2] + j % 2, ke[i][j]);
    }
    SparseC k(2 * int(mesh.nodes.size()), 2 * int(mesh.nodes.size()));
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

/// Nodal solution. For transmission problems the obstacle-side interface values
/// carry the prescribed jump: inside = continuous + lift.
struct FieldSolution {
    VectorXc continuous; // single-valued nodal dofs
    VectorXc lift;       // jump lifting (nonzero only on interface nodes)
    double omega = 0.0;

    Vec2c outside(int node) const { return Vec2c{continuous[2 * node], continuous[2 * node + 1]}; }
    Vec2c inside(int node) const {
        return Vec2c{continuous[2 * node] + lift[2 * node], continuous[2 * node + 1] + lift[2 * node + 1]};
    }
    /// nodal value in the given region (tag 0 = background side)
    Vec2c value(int node, int tag) const { return tag == 0 ? outside(node) : inside(node); }
};

/// Scattering right-hand side: int_{Gamma_R} (T u^in - T~ u^in) . conj(v) ds,
/// T u^in by trapezoidal quadrature of the analytic traction, T~ u^in through
/// the same spectral machinery as the DtN block.
inline VectorXc scattering_rhs(const AssembledSystem& sys, const IncidentField& inc) {
    const auto& mesh = sys.mesh();
    const auto& p = sys.dtn();
    const int nb = mesh.n_boundary();
    VectorXc rhs = VectorXc::Zero(sys.n_dofs());
    VectorXc uin_nodal = VectorXc::Zero(sys.n_dofs());
    const double dl = 2.0 * pi * p.R / nb;
    for (int i = 0; i < nb; ++i) {
        const int node = mesh.outer_ring[i];
        const Vec2& x = mesh.nodes[node];
        const Vec2 nu = x / x.norm();
        const Vec2c t = traction(eval_incident_gradient(inc, x), nu, p.background.lambda, p.background.mu);
        rhs[2 * node] += dl * t[0];
        rhs[2 * node + 1] += dl * t[1];
        const Vec2c u = eval_incident(inc, x);
        uin_nodal[2 * node] = u[0];
        uin_nodal[2 * node + 1] = u[1];
    }
    const BoundaryTrace win = analyze_ring_trace(mesh, uin_nodal, p.n_trunc);
    const BoundaryTrace tin = dtn_apply(sys.modes(), win);
    // - 2 pi R sum_n F_n^H (T~ u^in)^n
    for (int i = 0; i < nb; ++i) {
        const int node = mesh.outer_ring[i];
        const double th = 2.0 * pi * i / nb;
        const Vec2 rh{std::cos(th), std::sin(th)}, ta{-std::sin(th), std::cos(th)};
        Vec2c acc = Vec2c::Zero();
        for (int n = -p.n_trunc; n <= p.n_trunc; ++n) {
            const Complex e = std::exp(iu * double(n) * th);
            acc += e * (tin.coeff(n)[0] * rh.cast<Complex>() + tin.coeff(n)[1] * ta.cast<Complex>());
        }
        rhs[2 * node] -= dl * acc[0];
        rhs[2 * node + 1] -= dl * acc[1];
    }
    return rhs;
}

/// Total field u in B_R under the given incidence.
inline FieldSolution solve_scattering(const AssembledSystem& sys, const IncidentField& inc) {
    FieldSolution sol;
    sol.omega = sys.dtn().omega;
    sol.continuous = sys.solve(scattering_rhs(sys, inc));
    sol.lift = VectorXc::Zero(sys.n_dofs());
    return sol;
}

/// Prescribed interface jumps, one entry per interface-ring node:
/// (inside trace) - (outside trace) = f and N^- (inside) - T (outside) = g.
struct InterfaceJumps {
    std::vector<Vec2c> f, g;
};

inline FieldSolution solve_transmission(const AssembledSystem& sys,
                                        const std::vector<InterfaceJumps>& jumps) {
    const auto& mesh = sys.mesh();
    if (jumps.size() != mesh.interface_rings.size())
        throw DomainError("solve_transmission: need jump data per interface ring");
    VectorXc rhs = VectorXc::Zero(sys.n_dofs());
    VectorXc lift = VectorXc::Zero(sys.n_dofs());
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        const auto& ring = mesh.interface_rings[j];
        if (jumps[j].f.size() != ring.nodes.size() || jumps[j].g.size() != ring.nodes.size())
            throw DomainError("solve_transmission: jump arrays must match the ring node count");
        const auto w = sys.ring_weights(j);
        for (std::size_t i = 0; i < ring.nodes.size(); ++i) {
            const int node = ring.nodes[i];
            lift[2 * node] = jumps[j].f[i][0];
            lift[2 * node + 1] = jumps[j].f[i][1];
            rhs[2 * node] += w[i] * jumps[j].g[i][0];
            rhs[2 * node + 1] += w[i] * jumps[j].g[i][1];
        }
    }
    rhs -= sys.obstacle_matrix() * lift;
    FieldSolution sol;
    sol.omega = sys.dtn().omega;
    sol.continuous = sys.solve(rhs);
    sol.lift = lift;
    return sol;
}

/// Scattered-field trace u - u^in on Gamma_R as Fourier data (for far fields and
/// exterior evaluation).
inline BoundaryTrace scattered_trace(const AssembledSystem& sys, const FieldSolution& sol,
                                     const IncidentField& inc) {
    const auto& mesh = sys.mesh();
    VectorXc diff = sol.continuous;
    for (int i = 0; i < mesh.n_boundary(); ++i) {
        const int node = mesh.outer_ring[i];
        const Vec2c u = eval_incident(inc, mesh.nodes[node]);
        diff[2 * node] -= u[0];
        diff[2 * node + 1] -= u[1];
    }
    return analyze_ring_trace(mesh, diff, sys.dtn().n_trunc);
}

/// Analytic reference field (value and gradient) for error measurement.
struct AnalyticField {
    std::function<Vec2c(const Vec2&)> value;
    std::function<Mat2c(const Vec2&)> gradient;
};

/// (E0, E1): L2 and full H1 errors against per-region reference fields, by a
/// degree-4 (6-point) triangle rule.
inline std::pair<double, double> error_norms(const Mesh2D& mesh, const FieldSolution& sol,
                                             const std::vector<AnalyticField>& exact) {
    static const double qa[2] = {0.816847572980459, 0.108103018168070};
    static const double qb[2] = {0.091576213509771, 0.445948490915965};
    static const double qw[2] = {0.109951743655322, 0.223381589678011};
    double e0 = 0.0, eg = 0.0;
    for (const auto& t : mesh.triangles) {
        const auto g = femdetail::element_geom(mesh, t);
        const auto& ex = exact.at(t.tag);
        Vec2c nv[3];
        for (int k = 0; k < 3; ++k) nv[k] = sol.value(t.v[k], t.tag);
        Mat2c grad_h = Mat2c::Zero();
        for (int k = 0; k < 3; ++k) grad_h += nv[k] * g.grad[k].transpose().cast<Complex>();
        for (int cls = 0; cls < 2; ++cls) {
            double bc[3] = {qa[cls], qb[cls], qb[cls]};
            for (int rot = 0; rot < 3; ++rot) {
                const Vec2 x = bc[0] * mesh.nodes[t.v[0]] + bc[1] * mesh.nodes[t.v[1]] +
                               bc[2] * mesh.nodes[t.v[2]];
                Vec2c uh = Vec2c::Zero();
                for (int k = 0; k < 3; ++k) uh += bc[k] * nv[k];
                const Vec2c du = ex.value(x) - uh;
                const Mat2c dg = ex.gradient(x) - grad_h;
                e0 += qw[cls] * g.area * du.squaredNorm();
                eg += qw[cls] * g.area * dg.squaredNorm();
                std::rotate(bc, bc + 2, bc + 3);
            }
        }
    }
    return {std::sqrt(e0), std::sqrt(e0 + eg)};
}

} // namespace elwave
