#pragma once

// Inverse layer: star-shape parametrization Lambda = (a1, a2, alpha_0..alpha_{2M}),
// the near-field solution operator (total field sampled at equi-angular points
// z_i on Gamma_R), its Frechet derivative through the derivative transmission
// problem with jump data
//   f_l = -(h_l.nu) [dnu^- u - dnu^+ u],
//   g_l = w^2 (h_l.nu) [rho_l u^- - rho_0 u^+] - dtau[(sigma^- - sigma^+)(h_2, -h_1)^T],
// the least-squares objective F = 1/2 sum_i |J_i - u_mea,i|^2 with gradient
// dF/dLambda_n = Re sum_i dJ_i/dLambda_n . conj(J_i - u_mea,i), and the staged
// multi-frequency / multi-direction descent (directions inner, frequencies outer,
// warm-started, eps = eps_coef / k_p(omega)).

#include <chrono>
#include <random>

#include "elwave/farfield.hpp"
#include "elwave/fem.hpp"
#include "elwave/reference_solutions.hpp"

namespace elwave {

/// Lambda = (a1, a2, alpha_0, ..., alpha_{2M}); 2M+3 parameters per obstacle.
struct ShapeParams {
    Vec2 center = Vec2::Zero();
    std::vector<double> radial; // alpha_0 .. alpha_{2M}

    ShapeParams() = default;
    ShapeParams(Vec2 c, std::vector<double> r) : center(c), radial(std::move(r)) {}

    static ShapeParams circle(Vec2 c, double radius, int order_M) {
        std::vector<double> r(2 * order_M + 1, 0.0);
        r[0] = radius;
        return ShapeParams(c, std::move(r));
    }

    int size() const { return 2 + int(radial.size()); }

    double get(int n) const { // 1-based parameter index, per the Lambda ordering
        if (n == 1) return center[0];
        if (n == 2) return center[1];
        return radial.at(n - 3);
    }
    void set(int n, double v) {
        if (n == 1)
            center[0] = v;
        else if (n == 2)
            center[1] = v;
        else
            radial.at(n - 3) = v;
    }

    StarCurve curve() const { return StarCurve(center, radial); }
};

/// Perturbation field h(theta) = d gamma(theta) / d Lambda_n (1-based n).
inline Vec2 perturbation_field(int n, double theta) {
    if (n == 1) return Vec2{1.0, 0.0};
    if (n == 2) return Vec2{0.0, 1.0};
    if (n == 3) return Vec2{std::cos(theta), std::sin(theta)};
    double s;
    if (n % 2 == 0)
        s = std::cos((n - 2) * theta / 2.0);
    else
        s = std::sin((n - 3) * theta / 2.0);
    return s * Vec2{std::cos(theta), std::sin(theta)};
}

/// Near-field data over measurement points, directions and frequencies.
struct MeasurementSet {
    int n_mea = 0;
    double R = 0.0;
    std::vector<double> omegas;
    std::vector<Vec2> directions;
    // values[m][j][i], m frequency index, j direction index, i measurement point
    std::vector<std::vector<std::vector<Vec2c>>> values;

    Vec2 point(int i) const {
        const double th = 2.0 * pi * i / n_mea;
        return R * Vec2{std::cos(th), std::sin(th)};
    }
    double norm() const {
        double s = 0.0;
        for (const auto& per_m : values)
            for (const auto& per_j : per_m)
                for (const auto& v : per_j) s += v.squaredNorm();
        return std::sqrt(s);
    }
};

struct InverseScenario {
    IsotropicBackground background;
    std::vector<StiffnessTensor2D> obstacle_materials;
    double R = 5.0;
    std::vector<double> omegas;   // ascending
    std::vector<Vec2> directions; // plane-wave incidence directions
    Complex cp{1.0, 0.0}, cs{0.0, 0.0};
    int n_mea = 64;
    double h = 0.3;       // inversion-grade mesh target
    int min_outer = 64;   // inversion-grade ring floor
    int nt_override = -1; // -1: default DtN truncation rule

    IncidentField incidence(double omega, const Vec2& d) const {
        return IncidentField(PlaneWave{d, cp, cs}, omega, background);
    }
    /// background + the materials of the first n_obstacles obstacles
    std::vector<StiffnessTensor2D> materials(std::size_t n_obstacles) const {
        if (n_obstacles > obstacle_materials.size())
            throw DomainError("InverseScenario: more obstacles than materials");
        std::vector<StiffnessTensor2D> mats{
            isotropic_stiffness(background.lambda, background.mu, background.rho0)};
        for (std::size_t l = 0; l < n_obstacles; ++l) mats.push_back(obstacle_materials[l]);
        return mats;
    }
};

namespace invdetail {

// Fourier interpolation of the ring trace: coefficients to near-Nyquist order,
// then synthesis at arbitrary angles.
struct TraceInterpolant {
    BoundaryTrace w;

    TraceInterpolant(const Mesh2D& mesh, const VectorXc& nodal)
        : w(analyze_ring_trace(mesh, nodal, mesh.n_boundary() / 2 - 1)) {}

    Vec2c at(double theta) const {
        Complex up{0.0}, us{0.0};
        for (int n = -w.n_trunc; n <= w.n_trunc; ++n) {
            const Complex e = std::exp(iu * double(n) * theta);
            up += w.coeff(n)[0] * e;
            us += w.coeff(n)[1] * e;
        }
        const Vec2 rh{std::cos(theta), std::sin(theta)}, ta{-std::sin(theta), std::cos(theta)};
        return up * rh.cast<Complex>() + us * ta.cast<Complex>();
    }
};

// One-sided interface traces of a solution: value and inside/outside gradients.
// Reconstruction: the tangential derivative comes from spectral differentiation
// of the nodal trace, the (continuous) interface traction from the consistent
// discrete flux of the obstacle-side operator, and the one-sided normal
// derivatives from solving the Christoffel system
//   A(nu) dnu(u) = t - B(nu, tau) dtau(u),  A = C:(nu x nu), B = C:(nu x tau).
struct InterfaceTraces {
    std::vector<Vec2c> u;
    std::vector<Mat2c> grad_in, grad_out;
};

inline std::vector<Vec2c> fourier_dtheta(const std::vector<Vec2c>& b, int cutoff);

inline InterfaceTraces recover_interface_traces(const AssembledSystem& sys, const FieldSolution& sol,
                                                std::size_t ring_idx,
                                                const StiffnessTensor2D& mat_in,
                                                const IsotropicBackground& bg, int cutoff) {
    const auto& mesh = sys.mesh();
    const auto& ring = mesh.interface_rings.at(ring_idx);
    const auto& curve = mesh.curves.at(ring_idx);
    const std::size_t n = ring.nodes.size();
    const StiffnessTensor2D mat_out = isotropic_stiffness(bg.lambda, bg.mu, bg.rho0);
    // inside-side nodal vector (continuous + jump lifting) for the flux rows
    VectorXc vin = sol.continuous + sol.lift;
    const VectorXc flux = sys.obstacle_matrix() * vin;
    const auto w = sys.ring_weights(ring_idx);
    // nodal trace (inside values; g data uses one-sided values separately)
    std::vector<Vec2c> trace_in(n), trace_out(n);
    for (std::size_t i = 0; i < n; ++i) {
        trace_in[i] = sol.inside(ring.nodes[i]);
        trace_out[i] = sol.outside(ring.nodes[i]);
    }
    const auto dtheta_in = fourier_dtheta(trace_in, cutoff);
    const auto dtheta_out = fourier_dtheta(trace_out, cutoff);
    InterfaceTraces tr;
    tr.u.resize(n);
    tr.grad_in.resize(n);
    tr.grad_out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = ring.theta[i];
        const Vec2 tangent = curve.tangent(th);
        const double gp = tangent.norm();
        const Vec2 tau = tangent / gp;
        const Vec2 nu{tau[1], -tau[0]};
        const int node = ring.nodes[i];
        const Vec2c t_star{flux[2 * node] / w[i], flux[2 * node + 1] / w[i]};
        auto one_side = [&](const StiffnessTensor2D& c, const Vec2c& dtau) {
            const Mat2 a = contraction(c, nu, nu);
            const Mat2 b = contraction(c, nu, tau);
            const Vec2c dnu = a.cast<Complex>().inverse() * (t_star - b.cast<Complex>() * dtau);
            return Mat2c(dtau * tau.transpose().cast<Complex>() +
                         dnu * nu.transpose().cast<Complex>());
        };
        tr.grad_in[i] = one_side(mat_in, dtheta_in[i] / gp);
        tr.grad_out[i] = one_side(mat_out, dtheta_out[i] / gp);
        tr.u[i] = trace_out[i];
    }
    return tr;
}

// Spectral d/dtheta of periodic nodal data on a uniform-theta ring, restricted
// to |m| <= cutoff. The nodal data carries elementwise recovery noise; an
// unfiltered derivative would amplify it by the Nyquist order, so only the
// band that can hold physical content is differentiated.
inline std::vector<Vec2c> fourier_dtheta(const std::vector<Vec2c>& b, int cutoff) {
    const int n = int(b.size());
    const int half = std::min(cutoff, n / 2 - 1);
    std::vector<Vec2c> out(n, Vec2c::Zero());
    for (int m = -half; m <= half; ++m) {
        Vec2c coef = Vec2c::Zero();
        for (int i = 0; i < n; ++i)
            coef += b[i] * std::exp(-iu * double(m) * (2.0 * pi * i / n)) / double(n);
        coef *= iu * double(m);
        for (int i = 0; i < n; ++i) out[i] += coef * std::exp(iu * double(m) * (2.0 * pi * i / n));
    }
    return out;
}

} // namespace invdetail

/// Forward state at one frequency and shape iterate: mesh, factorized operator,
/// and per-direction solves; serves measurements and shape derivatives.
class ForwardState {
public:
    ForwardState(const InverseScenario& sc, const std::vector<ShapeParams>& params, double omega,
                 bool data_grade = false)
        : scenario_(sc), omega_(omega) {
        std::vector<StarCurve> curves;
        for (const auto& p : params) curves.push_back(p.curve());
        const double h = data_grade ? 0.5 * sc.h : sc.h;
        const int min_outer = data_grade ? 2 * sc.min_outer : sc.min_outer;
        Mesh2D mesh = generate(curves, sc.R, h, min_outer);
        int nt = (sc.nt_override > 0) ? sc.nt_override
                                      : int(std::ceil(sc.background.ks(omega) * sc.R)) + 16;
        if (data_grade) nt += 8;
        DtnParams dtn(sc.R, omega, sc.background, std::nullopt, nt);
        sys_ = std::make_unique<AssembledSystem>(mesh, sc.materials(params.size()), dtn);
    }

    const AssembledSystem& system() const { return *sys_; }
    double omega() const { return omega_; }

    struct Solve {
        FieldSolution sol;
        std::vector<Vec2c> samples;
    };

    Solve solve_direction(const Vec2& d) const {
        const IncidentField inc = scenario_.incidence(omega_, d);
        Solve s;
        s.sol = solve_scattering(*sys_, inc);
        s.samples = sample(s.sol);
        return s;
    }

    std::vector<Vec2c> sample(const FieldSolution& sol) const {
        invdetail::TraceInterpolant interp(sys_->mesh(), sol.continuous);
        std::vector<Vec2c> out(scenario_.n_mea);
        for (int i = 0; i < scenario_.n_mea; ++i) out[i] = interp.at(2.0 * pi * i / scenario_.n_mea);
        return out;
    }

    /// dJ/dLambda_n^{(l)} at the measurement points (n 1-based).
    std::vector<Vec2c> derivative_samples(const Solve& fwd, int l, int n) const {
        const auto& mesh = sys_->mesh();
        const auto& ring = mesh.interface_rings.at(l);
        const std::size_t nn = ring.nodes.size();
        std::vector<Vec2> h(nn);
        for (std::size_t i = 0; i < nn; ++i) h[i] = perturbation_field(n, ring.theta[i]);
        return derivative_samples_for_field(fwd, l, h);
    }

    /// Same, for an arbitrary perturbation field given at the ring nodes.
    std::vector<Vec2c> derivative_samples_for_field(const Solve& fwd, int l,
                                                    const std::vector<Vec2>& h) const {
        const auto& mesh = sys_->mesh();
        const auto& ring = mesh.interface_rings.at(l);
        const auto& curve = mesh.curves.at(l);
        const std::size_t nn = ring.nodes.size();
        const auto& mat_in = scenario_.obstacle_materials.at(l);
        const double lam = scenario_.background.lambda, mu = scenario_.background.mu;
        const double rho0 = scenario_.background.rho0;
        const Complex rho_in = mat_in.rho;
        // band limit: shear oscillation along the curve, the curve's own Fourier
        // order, and room for the perturbation mode
        const double ts_curve = scenario_.background.ks(omega_) *
                                (curve.max_distance_from_origin(512) + 1.0);
        const int cutoff = 16 + int(std::ceil(2.0 * ts_curve)) + 2 * curve.fourier_order();
        const auto tr = invdetail::recover_interface_traces(*sys_, fwd.sol, l, mat_in,
                                                            scenario_.background, cutoff);
        std::vector<InterfaceJumps> jumps(mesh.interface_rings.size());
        for (std::size_t r = 0; r < jumps.size(); ++r) {
            jumps[r].f.assign(mesh.interface_rings[r].nodes.size(), Vec2c::Zero());
            jumps[r].g.assign(mesh.interface_rings[r].nodes.size(), Vec2c::Zero());
        }
        std::vector<Vec2c> bracket(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double th = ring.theta[i];
            const Vec2 nu = curve.outward_normal(th);
            const double hnu = h[i].dot(nu);
            // f = -(h.nu) [dnu^- u - dnu^+ u]
            const Vec2c dn_in = tr.grad_in[i] * nu.cast<Complex>();
            const Vec2c dn_out = tr.grad_out[i] * nu.cast<Complex>();
            jumps[l].f[i] = -hnu * (dn_in - dn_out);
            // bracket = (sigma^- - sigma^+) (h2, -h1)^T
            const Mat2c sig_in = mat_in.stress(tr.grad_in[i]);
            Mat2c sig_out = mu * (tr.grad_out[i] + tr.grad_out[i].transpose());
            const Complex dv = tr.grad_out[i](0, 0) + tr.grad_out[i](1, 1);
            sig_out(0, 0) += lam * dv;
            sig_out(1, 1) += lam * dv;
            bracket[i] = (sig_in - sig_out) * Vec2{h[i][1], -h[i][0]}.cast<Complex>();
            jumps[l].g[i] = omega_ * omega_ * hnu * (rho_in * tr.u[i] - rho0 * tr.u[i]);
        }
        const auto db = invdetail::fourier_dtheta(bracket, cutoff);
        for (std::size_t i = 0; i < nn; ++i) {
            const double gprime = curve.tangent(ring.theta[i]).norm();
            jumps[l].g[i] -= db[i] / gprime;
        }
        const FieldSolution der = solve_transmission(*sys_, jumps);
        return sample(der);
    }

    /// F and the stacked gradient (all obstacles, 1-based parameter order within
    /// each obstacle) against one (omega, d) data slice.
    std::pair<double, std::vector<Eigen::VectorXd>> objective_and_gradient(
        const Solve& fwd, const std::vector<Vec2c>& data,
        const std::vector<ShapeParams>& params) const {
        const int n_obs = int(params.size());
        std::vector<Vec2c> resid(data.size());
        double f = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            resid[i] = fwd.samples[i] - data[i];
            f += 0.5 * resid[i].squaredNorm();
        }
        std::vector<Eigen::VectorXd> grad(n_obs);
        for (int l = 0; l < n_obs; ++l) {
            grad[l].setZero(params[l].size());
            for (int n = 1; n <= params[l].size(); ++n) {
                const auto dj = derivative_samples(fwd, l, n);
                double gsum = 0.0;
                for (std::size_t i = 0; i < data.size(); ++i)
                    gsum += (dj[i][0] * std::conj(resid[i][0]) + dj[i][1] * std::conj(resid[i][1])).real();
                grad[l][n - 1] = gsum;
            }
        }
        return {f, grad};
    }

private:
    InverseScenario scenario_;
    double omega_;
    std::unique_ptr<AssembledSystem> sys_;
};

/// Full forward map: values at all (omega_m, d_j, z_i).
inline MeasurementSet forward_map(const InverseScenario& sc, const std::vector<ShapeParams>& params,
                                  bool data_grade = false) {
    MeasurementSet out;
    out.n_mea = sc.n_mea;
    out.R = sc.R;
    out.omegas = sc.omegas;
    out.directions = sc.directions;
    for (double omega : sc.omegas) {
        ForwardState st(sc, params, omega, data_grade);
        std::vector<std::vector<Vec2c>> per_m;
        for (const auto& d : sc.directions) per_m.push_back(st.solve_direction(d).samples);
        out.values.push_back(std::move(per_m));
    }
    return out;
}

/// Crime-avoided synthetic data: finer mesh, more DtN modes, optional
/// multiplicative complex Gaussian noise.
inline MeasurementSet synthesize_data(const InverseScenario& sc, const std::vector<ShapeParams>& truth,
                                      double noise_level = 0.0, std::uint64_t seed = 0) {
    MeasurementSet data = forward_map(sc, truth, true);
    if (noise_level > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> N(0.0, 1.0);
        for (auto& per_m : data.values)
            for (auto& per_j : per_m)
                for (auto& v : per_j)
                    for (int c = 0; c < 2; ++c)
                        v[c] *= 1.0 + noise_level * Complex{N(rng), N(rng)} / std::sqrt(2.0);
    }
    return data;
}

struct DescentOptions {
    int iterations_per_direction = 10; // L
    double eps_coef = 0.005;           // eps = eps_coef / k_p(omega)
    double min_radius_frac = 0.05;     // abort threshold r_min = frac * R
    double containment_frac = 0.9;     // curves must stay inside frac * R
    int max_halvings = 10;
    bool backtracking = false; // diagnostic mode: halve eps until F decreases
};

struct DescentRecord {
    int freq_idx, dir_idx, iter;
    double objective, grad_norm;
    std::vector<ShapeParams> params;
    double wall_ms;
};

struct DescentResult {
    std::vector<ShapeParams> params;
    std::vector<double> rerrors; // initial, then one per frequency stage
    std::vector<DescentRecord> log;
    int aborted_stages = 0;
};

namespace invdetail {

inline bool shapes_valid(const InverseScenario& sc, const std::vector<ShapeParams>& params,
                         const DescentOptions& opt) {
    std::vector<StarCurve> curves;
    for (const auto& p : params) curves.push_back(p.curve());
    try {
        for (const auto& c : curves) {
            if (c.min_radius() <= opt.min_radius_frac * sc.R) return false;
            if (c.max_distance_from_origin() >= opt.containment_frac * sc.R) return false;
        }
        validate_curves(curves, sc.R, 1.5 * sc.h);
    } catch (const GeometryError&) {
        return false;
    }
    return true;
}

inline double relative_residual(const InverseScenario& sc, const std::vector<ShapeParams>& params,
                                const MeasurementSet& data) {
    const MeasurementSet sim = forward_map(sc, params);
    double num = 0.0;
    for (std::size_t m = 0; m < data.values.size(); ++m)
        for (std::size_t j = 0; j < data.values[m].size(); ++j)
            for (std::size_t i = 0; i < data.values[m][j].size(); ++i)
                num += (sim.values[m][j][i] - data.values[m][j][i]).squaredNorm();
    return std::sqrt(num) / data.norm();
}

} // namespace invdetail

/// Steps 1-5: directions inner, frequencies outer (ascending), L gradient steps
/// per direction with eps = eps_coef / k_p(omega); geometry safeguard by step
/// halving. Emits the relative residual of the full data set before the first
/// stage and after each frequency stage.
inline DescentResult descend(const InverseScenario& sc, std::vector<ShapeParams> params,
                             const MeasurementSet& data, const DescentOptions& opt = {}) {
    if (!std::is_sorted(sc.omegas.begin(), sc.omegas.end()))
        throw DomainError("descend: frequencies must be ascending");
    DescentResult res;
    res.rerrors.push_back(invdetail::relative_residual(sc, params, data));
    const auto t_start = std::chrono::steady_clock::now();
    for (std::size_t m = 0; m < sc.omegas.size(); ++m) {
        const double omega = sc.omegas[m];
        const double eps0 = opt.eps_coef / sc.background.kp(omega);
        for (std::size_t j = 0; j < sc.directions.size(); ++j) {
            for (int it = 0; it < opt.iterations_per_direction; ++it) {
                ForwardState st(sc, params, omega);
                const auto fwd = st.solve_direction(sc.directions[j]);
                auto [f, grad] = st.objective_and_gradient(fwd, data.values[m][j], params);
                double gnorm = 0.0;
                for (const auto& g : grad) gnorm += g.squaredNorm();
                gnorm = std::sqrt(gnorm);
                // step with geometry safeguard (and optional monotonicity backtracking)
                double eps = eps0;
                std::vector<ShapeParams> next;
                bool accepted = false;
                for (int halve = 0; halve <= opt.max_halvings; ++halve) {
                    next = params;
                    for (std::size_t l = 0; l < next.size(); ++l)
                        for (int n = 1; n <= next[l].size(); ++n)
                            next[l].set(n, next[l].get(n) - eps * grad[l][n - 1]);
                    if (invdetail::shapes_valid(sc, next, opt)) {
                        if (!opt.backtracking) {
                            accepted = true;
                            break;
                        }
                        ForwardState st2(sc, next, omega);
                        const auto fwd2 = st2.solve_direction(sc.directions[j]);
                        double f2 = 0.0;
                        for (std::size_t i = 0; i < fwd2.samples.size(); ++i)
                            f2 += 0.5 * (fwd2.samples[i] - data.values[m][j][i]).squaredNorm();
                        if (f2 <= f) {
                            accepted = true;
                            break;
                        }
                    }
                    eps *= 0.5;
                }
                if (!accepted) {
                    ++res.aborted_stages;
                    break; // abort this stage, keep current params
                }
                params = next;
                DescentRecord rec;
                rec.freq_idx = int(m);
                rec.dir_idx = int(j);
                rec.iter = it;
                rec.objective = f;
                rec.grad_norm = gnorm;
                rec.params = params;
                rec.wall_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
                        .count();
                res.log.push_back(std::move(rec));
            }
        }
        res.rerrors.push_back(invdetail::relative_residual(sc, params, data));
    }
    res.params = std::move(params);
    return res;
}

/// Area of the symmetric difference between two star curves (grid scan).
inline double symmetric_difference_area(const StarCurve& a, const StarCurve& b, int grid = 600) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < 512; ++i) {
        for (const StarCurve* c : {&a, &b}) {
            const Vec2 p = c->point(2.0 * pi * i / 512.0);
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
    }
    const double dx = (xmax - xmin) / grid, dy = (ymax - ymin) / grid;
    auto inside = [](const StarCurve& c, const Vec2& p) {
        const Vec2 d = p - c.center;
        return d.norm() < c.radius(std::atan2(d[1], d[0]));
    };
    long count = 0;
    for (int ix = 0; ix < grid; ++ix)
        for (int iy = 0; iy < grid; ++iy) {
            const Vec2 p{xmin + (ix + 0.5) * dx, ymin + (iy + 0.5) * dy};
            if (inside(a, p) != inside(b, p)) ++count;
        }
    return count * dx * dy;
}

/// Area enclosed by a star curve (for relative symmetric-difference thresholds).
inline double curve_area(const StarCurve& c, int samples = 4096) {
    double s = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double r = c.radius(2.0 * pi * i / samples);
        s += 0.5 * r * r * (2.0 * pi / samples);
    }
    return s;
}

} // namespace elwave
