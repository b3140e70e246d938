// elwave command-line front door: config-driven experiments for the 2D elastic
// scattering solver and the shape-reconstruction loop.

#include <iostream>

#include <CLI11.hpp>

#include "elwave/runners.hpp"

namespace {

elwave::ExperimentConfig load_with_overrides(const std::string& config_path, const std::string& out,
                                             int mesh_level, int nt, std::uint64_t seed,
                                             bool seed_set) {
    elwave::ExperimentConfig cfg = elwave::load_config(config_path);
    if (!out.empty()) cfg.out_dir = out;
    for (int l = 0; l < mesh_level; ++l) cfg.h *= 0.5;
    if (nt > 0) cfg.nt = nt;
    if (seed_set) cfg.seed = seed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elwave: 2D elastic scattering with an exact DtN boundary, and "
                 "shape reconstruction from near-field data"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 1, mesh_level = 0, nt = -1, dim = 2;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--threads", threads, "Eigen internal thread cap")->capture_default_str();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment configuration file")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--mesh-level", mesh_level, "halve the mesh target this many times");
        sub->add_option("--nt", nt, "DtN truncation override");
        sub->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    auto* fwd = app.add_subcommand("forward", "solve the scattering problem, emit field CSVs");
    add_common(fwd);
    auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence table");
    add_common(conv);
    auto* ff = app.add_subcommand("farfield", "far-field patterns of the scattered field");
    add_common(ff);
    auto* dtn = app.add_subcommand("dtn-check", "DtN mode-matrix property sweep");
    add_common(dtn);
    dtn->add_option("--dim", dim, "2 or 3")->capture_default_str();
    auto* inv = app.add_subcommand("invert", "reconstruct obstacle boundaries from synthetic data");
    add_common(inv);
    auto* spt = app.add_subcommand("specfun-table", "dump Hankel values (debugging)");
    spt->add_option("--out", out_dir, "output directory");
    int spt_nmax = 20;
    std::vector<double> spt_ts{0.5, 1.0, 2.0, 5.0, 10.0};
    spt->add_option("--nmax", spt_nmax, "max order");
    spt->add_option("--t", spt_ts, "argument list");

    CLI11_PARSE(app, argc, argv);
    Eigen::setNbThreads(threads);

    try {
        if (app.got_subcommand(spt)) {
            elwave::run_specfun_table(out_dir.empty() ? "out" : out_dir, spt_nmax, spt_ts);
            return 0;
        }
        const auto cfg = load_with_overrides(config_path, out_dir, mesh_level, nt, seed, seed_set);
        if (app.got_subcommand(fwd)) {
            elwave::run_forward(cfg);
        } else if (app.got_subcommand(conv)) {
            elwave::run_convergence(cfg);
        } else if (app.got_subcommand(ff)) {
            elwave::run_farfield(cfg);
        } else if (app.got_subcommand(dtn)) {
            const auto s = elwave::run_dtn_check(cfg, dim);
            std::cout << "dtn-check dim=" << dim << ": M_emp=" << s.m_emp
                      << " violations=" << s.violations << "\n";
            if (s.violations > 0) return 2;
        } else if (app.got_subcommand(inv)) {
            const auto s = elwave::run_invert(cfg);
            std::cout << "invert: RError";
            for (double r : s.rerrors) std::cout << " " << r;
            std::cout << "\n";
            for (std::size_t l = 0; l < s.symdiff_rel.size(); ++l)
                std::cout << "obstacle " << l << ": symdiff/area = " << s.symdiff_rel[l] << "\n";
        }
    } catch (const elwave::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
