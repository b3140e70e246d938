#pragma once

// Experiment drivers behind the CLI subcommands. Each writes its artifacts into
// an output directory and returns a small summary for logging/tests.

#include <filesystem>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "elwave/config.hpp"
#include "elwave/dtn3d.hpp"
#include "elwave/farfield.hpp"

namespace elwave {

namespace rundetail {

inline std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot open output file: " + (dir / name).string());
    os << std::setprecision(17);
    return os;
}

inline int node_region(const Mesh2D& mesh, std::vector<int>& cache, int node) {
    if (cache.empty()) {
        cache.assign(mesh.nodes.size(), 0);
        for (const auto& t : mesh.triangles)
            for (int k = 0; k < 3; ++k) cache[t.v[k]] = std::max(cache[t.v[k]], t.tag);
    }
    return cache[node];
}

} // namespace rundetail

/// `forward`: solve the scattering problem for every (omega, direction) pair and
/// emit field CSVs plus the mesh.
inline void run_forward(const ExperimentConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    Mesh2D mesh = generate(cfg.curves(), cfg.R, cfg.h, cfg.min_outer);
    {
        auto os = rundetail::open_out(dir, "mesh.txt");
        export_mesh(mesh, os);
    }
    std::vector<int> region_cache;
    for (std::size_t m = 0; m < cfg.omegas.size(); ++m) {
        const double omega = cfg.omegas[m];
        const int nt = cfg.nt > 0 ? cfg.nt : int(std::ceil(cfg.background.ks(omega) * cfg.R)) + 16;
        DtnParams dtn(cfg.R, omega, cfg.background,
                      lambda_tilde_for(cfg.stress_case, cfg.background.lambda, cfg.background.mu), nt);
        AssembledSystem sys = assemble(mesh, cfg.materials(), dtn);
        for (std::size_t j = 0; j < cfg.directions.size(); ++j) {
            IncidentField inc =
                cfg.source ? IncidentField(PointSource{*cfg.source, Vec2c{cfg.cp, cfg.cs}}, omega,
                                           cfg.background)
                           : IncidentField(PlaneWave{cfg.directions[j], cfg.cp, cfg.cs}, omega,
                                           cfg.background);
            const FieldSolution sol = solve_scattering(sys, inc);
            auto os = rundetail::open_out(dir, "field_w" + std::to_string(m) + "_d" + std::to_string(j) +
                                                   ".csv");
            os << "node,x,y,re_u1,im_u1,re_u2,im_u2,region\n";
            for (int i = 0; i < int(mesh.nodes.size()); ++i) {
                const int tag = rundetail::node_region(mesh, region_cache, i);
                const Vec2c u = sol.value(i, tag);
                os << i << "," << mesh.nodes[i][0] << "," << mesh.nodes[i][1] << "," << u[0].real()
                   << "," << u[0].imag() << "," << u[1].real() << "," << u[1].imag() << "," << tag
                   << "\n";
            }
            if (cfg.source) break; // a point source has no direction sweep
        }
    }
}

/// `convergence`: manufactured transmission solutions on refined meshes; CSV of
/// errors and observed orders per frequency.
inline void run_convergence(const ExperimentConfig& cfg) {
    if (cfg.obstacles.size() != 1)
        throw ConfigError("convergence: exactly one obstacle curve expected");
    auto os = rundetail::open_out(cfg.out_dir, "convergence.csv");
    os << "omega,level,h,E0,order0,E1,order1\n";
    for (double omega : cfg.omegas) {
        const TransmissionCase tcase =
            (cfg.convergence_example == 1) ? example1_case(omega) : example2_case(omega);
        const int nt = cfg.nt > 0 ? cfg.nt : 14;
        const auto errs = transmission_convergence(tcase, cfg.obstacles[0].curve, cfg.R, cfg.h,
                                                   cfg.levels, nt, cfg.min_outer);
        for (int lev = 0; lev < int(errs.size()); ++lev) {
            const double h = cfg.h / double(1 << lev);
            os << omega << "," << lev << "," << h << "," << errs[lev].first << ",";
            if (lev > 0)
                os << std::log2(errs[lev - 1].first / errs[lev].first);
            os << "," << errs[lev].second << ",";
            if (lev > 0)
                os << std::log2(errs[lev - 1].second / errs[lev].second);
            os << "\n";
        }
    }
}

/// `farfield`: scattered-trace far-field patterns, one CSV per (omega, direction).
inline void run_farfield(const ExperimentConfig& cfg, int n_angles = 360) {
    const std::filesystem::path dir(cfg.out_dir);
    Mesh2D mesh = generate(cfg.curves(), cfg.R, cfg.h, cfg.min_outer);
    std::vector<double> angles(n_angles);
    for (int k = 0; k < n_angles; ++k) angles[k] = 2.0 * pi * k / n_angles;
    for (std::size_t m = 0; m < cfg.omegas.size(); ++m) {
        const double omega = cfg.omegas[m];
        const int nt = cfg.nt > 0 ? cfg.nt : int(std::ceil(cfg.background.ks(omega) * cfg.R)) + 16;
        DtnParams dtn(cfg.R, omega, cfg.background, std::nullopt, nt);
        AssembledSystem sys = assemble(mesh, cfg.materials(), dtn);
        for (std::size_t j = 0; j < cfg.directions.size(); ++j) {
            IncidentField inc(PlaneWave{cfg.directions[j], cfg.cp, cfg.cs}, omega, cfg.background);
            const FieldSolution sol = solve_scattering(sys, inc);
            const BoundaryTrace w = scattered_trace(sys, sol, inc);
            const FarField ff = farfield_from_trace(sys.modes(), w, angles);
            auto os = rundetail::open_out(dir, "farfield_w" + std::to_string(m) + "_d" +
                                                   std::to_string(j) + ".csv");
            os << "theta,re_up,im_up,re_us,im_us\n";
            for (int k = 0; k < n_angles; ++k)
                os << angles[k] << "," << ff.up[k].real() << "," << ff.up[k].imag() << ","
                   << ff.us[k].real() << "," << ff.us[k].imag() << "\n";
        }
    }
}

struct DtnCheckSummary {
    int violations = 0;
    int m_emp = -1;
};

/// `dtn-check`: per-mode property CSV (2D or 3D) and a violation count against
/// the lemma-level identities.
inline DtnCheckSummary run_dtn_check(const ExperimentConfig& cfg, int dim, int n_max = 200) {
    const double omega = cfg.omegas.at(0);
    const double lt = lambda_tilde_for(cfg.stress_case, cfg.background.lambda, cfg.background.mu);
    DtnParams p(cfg.R, omega, cfg.background, lt, 0);
    DtnCheckSummary out;
    auto os = rundetail::open_out(cfg.out_dir, dim == 3 ? "dtn_check_3d.csv" : "dtn_check_2d.csv");
    os << "n,re_lambda,im_lambda,minor1,det_w,im_ab_residual,offdiag_residual\n";
    if (dim == 2) {
        out.m_emp = positivity_scan(p, n_max);
        for (int n = 0; n <= n_max; ++n) {
            const auto mode = mode_matrices(p, n);
            const Mat2c wt = -0.5 * (mode.W + mode.W.adjoint());
            const double minor1 = wt(0, 0).real();
            const double detw = (wt(0, 0) * wt(1, 1) - wt(0, 1) * wt(1, 0)).real();
            const auto d = rellich_diagnostics(p, n);
            const double resid =
                std::max(std::abs(d.lhs_p - d.rhs), std::abs(d.lhs_s - d.rhs)) / d.rhs;
            os << n << "," << mode.Lambda.real() << "," << mode.Lambda.imag() << "," << minor1 << ","
               << detw << "," << resid << "," << d.offdiag << "\n";
            const bool lambda_ok =
                std::max(std::abs(mode.Lambda.real()), std::abs(mode.Lambda.imag())) >
                1e-12 * (1.0 + double(n) * n);
            const bool pd_ok = (n < out.m_emp) || (minor1 > 0.0 && detw > 0.0);
            if (!lambda_ok || resid > 1e-9 || d.offdiag > 1e-11 || !pd_ok) ++out.violations;
        }
    } else if (dim == 3) {
        out.m_emp = positivity_scan_3d(p, n_max);
        for (int n = 0; n <= n_max; ++n) {
            const auto mode = mode_matrices_3d(p, n);
            const Mat3c wt = -0.5 * (mode.W + mode.W.adjoint());
            const double minor1 = wt(0, 0).real();
            const double detw = wt.determinant().real();
            const auto d = rellich_diagnostics_3d(p, n);
            const double resid = std::max({std::abs(d.lhs_v - d.rhs_v) / std::abs(d.rhs_v),
                                           std::abs(d.lhs_u - d.rhs_u) / std::abs(d.rhs_u),
                                           std::abs(d.lhs_y - d.rhs_y) / std::abs(d.rhs_y)});
            os << n << "," << mode.Lambda.real() << "," << mode.Lambda.imag() << "," << minor1 << ","
               << detw << "," << resid << "," << d.offdiag << "\n";
            const double zero_pattern = std::max({std::abs(mode.W(0, 1)), std::abs(mode.W(1, 0)),
                                                  std::abs(mode.W(0, 2)), std::abs(mode.W(2, 0))});
            const bool pd_ok = (n < out.m_emp) || (minor1 > 0.0 && detw > 0.0);
            if (resid > 1e-9 || d.offdiag > 1e-11 || zero_pattern != 0.0 || !pd_ok) ++out.violations;
        }
    } else {
        throw ConfigError("dtn-check: dim must be 2 or 3");
    }
    auto sj = rundetail::open_out(cfg.out_dir, dim == 3 ? "dtn_check_3d_summary.json"
                                                        : "dtn_check_2d_summary.json");
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["dim"] = dim;
    j["n_max"] = n_max;
    j["m_emp"] = out.m_emp;
    j["violations"] = out.violations;
    sj << j.dump(2) << "\n";
    return out;
}

struct InvertSummary {
    std::vector<double> rerrors;
    std::vector<ShapeParams> reconstructed;
    std::vector<double> symdiff_rel; // vs truth curves, when truth available
};

/// `invert`: crime-avoided synthetic data from the configured truth geometry,
/// staged descent from the configured initial guesses, JSON-lines log plus a
/// final report.
inline InvertSummary run_invert(const ExperimentConfig& cfg) {
    if (cfg.obstacles.empty()) throw ConfigError("invert: need at least one obstacle (the truth)");
    InverseScenario sc = cfg.scenario();
    std::vector<ShapeParams> truth;
    for (const auto& o : cfg.obstacles) truth.emplace_back(o.curve.center, o.curve.radial);
    const MeasurementSet data = synthesize_data(sc, truth, cfg.noise, cfg.seed);
    std::vector<ShapeParams> guess = cfg.initial_guess;
    if (guess.empty())
        for (const auto& o : cfg.obstacles)
            guess.push_back(ShapeParams::circle(o.curve.center, 0.5, cfg.M));
    for (auto& g : guess)
        if (int(g.radial.size()) != 2 * cfg.M + 1) g.radial.resize(2 * cfg.M + 1, 0.0);
    DescentOptions opt;
    opt.iterations_per_direction = cfg.L;
    opt.eps_coef = cfg.eps_coef;
    const DescentResult res = descend(sc, guess, data, opt);

    const std::filesystem::path dir(cfg.out_dir);
    {
        auto os = rundetail::open_out(dir, "inversion_log.jsonl");
        for (const auto& rec : res.log) {
            nlohmann::ordered_json j;
            j["schema_version"] = 1;
            j["stage"] = {{"m", rec.freq_idx}, {"j", rec.dir_idx}, {"i", rec.iter}};
            j["objective"] = rec.objective;
            j["grad_norm"] = rec.grad_norm;
            nlohmann::ordered_json params = nlohmann::ordered_json::array();
            for (const auto& p : rec.params) {
                nlohmann::ordered_json pj;
                pj["center"] = {p.center[0], p.center[1]};
                pj["radial"] = p.radial;
                params.push_back(pj);
            }
            j["params"] = params;
            j["wall_ms"] = rec.wall_ms;
            os << j.dump() << "\n";
        }
    }
    InvertSummary out;
    out.rerrors = res.rerrors;
    out.reconstructed = res.params;
    nlohmann::ordered_json rep;
    rep["schema_version"] = 1;
    rep["rerror"] = res.rerrors;
    rep["aborted_stages"] = res.aborted_stages;
    nlohmann::ordered_json obstacles = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < res.params.size(); ++l) {
        nlohmann::ordered_json oj;
        oj["center"] = {res.params[l].center[0], res.params[l].center[1]};
        oj["radial"] = res.params[l].radial;
        nlohmann::ordered_json samples = nlohmann::ordered_json::array();
        const StarCurve c = res.params[l].curve();
        for (int k = 0; k < 128; ++k) {
            const Vec2 x = c.point(2.0 * pi * k / 128.0);
            samples.push_back({x[0], x[1]});
        }
        oj["curve_samples"] = samples;
        const double sd = symmetric_difference_area(cfg.obstacles[l].curve, c);
        const double rel = sd / curve_area(cfg.obstacles[l].curve);
        oj["symdiff_area_rel_truth"] = rel;
        out.symdiff_rel.push_back(rel);
        obstacles.push_back(oj);
    }
    rep["obstacles"] = obstacles;
    auto os = rundetail::open_out(dir, "report.json");
    os << rep.dump(2) << "\n";
    return out;
}

/// hidden `specfun-table`: (n, t, H, H') dump for debugging.
inline void run_specfun_table(const std::string& out_dir, int n_max, const std::vector<double>& ts) {
    auto os = rundetail::open_out(out_dir, "specfun_table.csv");
    os << "n,t,re_h,im_h,re_dh,im_dh\n";
    for (int n = 0; n <= n_max; ++n)
        for (double t : ts) {
            try {
                auto [h, dh] = specfun::hankel1(n, t);
                os << n << "," << t << "," << h.real() << "," << h.imag() << "," << dh.real() << ","
                   << dh.imag() << "\n";
            } catch (const OverflowError&) {
                os << n << "," << t << ",overflow,overflow,overflow,overflow\n";
            }
        }
}

} // namespace elwave
