#pragma once

// Experiment configuration: flat key/value text with [section] headers.
//
//   # comment lines and blank lines are ignored
//   [scenario]
//   kind = invert            # forward | convergence | farfield | dtn-check | invert
//   R = 5.0
//   [background]
//   lambda = 5.04e9
//   mu = 6.48e9
//   rho = 2000
//   [obstacle]               # section may repeat, one per obstacle
//   center = -1.8 1.5
//   radial = 0.75 0.18 0.0 0.12
//   C = 6e10 8e10 2e10 21e10 10e10 30e10    # C11 C12 C13 C22 C23 C33
//   rho = 2400
//   lambda_mu = 2 3          # alternative to C: isotropic Lame constants
//   [incidence]
//   directions = 0 1.5707963267948966 3.141592653589793 4.71238898038469   # radians
//   cp = 1 0                 # complex: re im (im optional)
//   cs = 0
//   source = 6.0 0.0         # point source location (plane waves otherwise)
//   [frequencies]
//   omega = 7000 8400
//   [mesh]
//   h = 0.13
//   levels = 3
//   min_outer = 128
//   [dtn]
//   nt = -1                  # -1: default truncation rule
//   case = physical          # physical | pressure_like | intermediate
//   [convergence]
//   example = 1              # 1: isotropic obstacle, 2: anisotropic obstacle
//   [inverse]
//   M = 10
//   L = 10
//   eps_coef = 0.005
//   n_mea = 64
//   initial = -1.8 1.5 0.6 ; 1.7 -1.4 0.6   # center_x center_y radius, per obstacle
//   noise = 0.0
//   [output]
//   dir = out
//   seed = 1
//
// Unknown sections or keys are rejected with their path.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elwave/inverse.hpp"

namespace elwave {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace cfgdetail {

struct Section {
    std::string name;
    std::map<std::string, std::string> kv;
    std::vector<std::string> keys_seen;
};

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<Section> parse_sections(std::istream& in) {
    std::vector<Section> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            out.push_back({trim(line.substr(1, line.size() - 2)), {}, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (out.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": key before any section");
        const std::string key = trim(line.substr(0, eq));
        out.back().kv[key] = trim(line.substr(eq + 1));
        out.back().keys_seen.push_back(key);
    }
    return out;
}

inline std::vector<double> parse_doubles(const std::string& s, const std::string& path) {
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    std::string rest;
    if (is.clear(), is >> rest)
        throw ConfigError(path + ": trailing non-numeric token '" + rest + "'");
    if (out.empty()) throw ConfigError(path + ": expected at least one number");
    return out;
}

// key accessor with a seen-set for unknown-key detection
struct SectionReader {
    const Section& s;
    std::vector<std::string> known;

    std::optional<std::string> raw(const std::string& key) {
        known.push_back(key);
        auto it = s.kv.find(key);
        if (it == s.kv.end()) return std::nullopt;
        return it->second;
    }
    std::string require(const std::string& key) {
        auto v = raw(key);
        if (!v) throw ConfigError("[" + s.name + "]." + key + ": required key missing");
        return *v;
    }
    double number(const std::string& key, std::optional<double> def = std::nullopt) {
        auto v = raw(key);
        if (!v) {
            if (def) return *def;
            throw ConfigError("[" + s.name + "]." + key + ": required key missing");
        }
        return parse_doubles(*v, "[" + s.name + "]." + key).at(0);
    }
    std::vector<double> numbers(const std::string& key) {
        return parse_doubles(require(key), "[" + s.name + "]." + key);
    }
    void finish() const {
        for (const auto& k : s.keys_seen) {
            if (std::find(known.begin(), known.end(), k) == known.end())
                throw ConfigError("[" + s.name + "]." + k + ": unknown key");
        }
    }
};

} // namespace cfgdetail

struct ObstacleConfig {
    StarCurve curve;
    StiffnessTensor2D material;
};

struct ExperimentConfig {
    std::string kind; // forward | convergence | farfield | dtn-check | invert
    double R = 2.0;
    IsotropicBackground background{1.0, 2.0, 1.0};
    std::vector<ObstacleConfig> obstacles;
    // incidence
    std::vector<Vec2> directions{Vec2{1.0, 0.0}};
    Complex cp{1.0, 0.0}, cs{0.0, 0.0};
    std::optional<Vec2> source;
    std::vector<double> omegas{1.0};
    // mesh
    double h = 0.3;
    int levels = 3;
    int min_outer = 32;
    // dtn
    int nt = -1;
    StressCase stress_case = StressCase::physical;
    int convergence_example = 1;
    // inverse
    int M = 10;
    int L = 10;
    double eps_coef = 0.005;
    int n_mea = 64;
    std::vector<ShapeParams> initial_guess;
    double noise = 0.0;
    // output
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    InverseScenario scenario() const {
        InverseScenario sc;
        sc.background = background;
        for (const auto& o : obstacles) sc.obstacle_materials.push_back(o.material);
        sc.R = R;
        sc.omegas = omegas;
        sc.directions = directions;
        sc.cp = cp;
        sc.cs = cs;
        sc.n_mea = n_mea;
        sc.h = h;
        sc.min_outer = min_outer;
        sc.nt_override = nt;
        return sc;
    }

    std::vector<StarCurve> curves() const {
        std::vector<StarCurve> out;
        for (const auto& o : obstacles) out.push_back(o.curve);
        return out;
    }

    std::vector<StiffnessTensor2D> materials() const {
        std::vector<StiffnessTensor2D> mats{
            isotropic_stiffness(background.lambda, background.mu, background.rho0)};
        for (const auto& o : obstacles) mats.push_back(o.material);
        return mats;
    }
};

inline ExperimentConfig parse_config(std::istream& in) {
    using namespace cfgdetail;
    ExperimentConfig cfg;
    bool have_scenario = false;
    for (const auto& sec : parse_sections(in)) {
        SectionReader r{sec, {}};
        if (sec.name == "scenario") {
            have_scenario = true;
            cfg.kind = r.require("kind");
            if (cfg.kind != "forward" && cfg.kind != "convergence" && cfg.kind != "farfield" &&
                cfg.kind != "dtn-check" && cfg.kind != "invert")
                throw ConfigError("[scenario].kind: unknown kind '" + cfg.kind + "'");
            cfg.R = r.number("R", 2.0);
        } else if (sec.name == "background") {
            const double lam = r.number("lambda");
            const double mu = r.number("mu");
            const double rho = r.number("rho");
            cfg.background = IsotropicBackground(lam, mu, rho);
        } else if (sec.name == "obstacle") {
            ObstacleConfig o;
            const auto c = r.numbers("center");
            if (c.size() != 2) throw ConfigError("[obstacle].center: expected two numbers");
            const auto rad = r.numbers("radial");
            o.curve = StarCurve(Vec2{c[0], c[1]}, rad);
            const double rho = r.number("rho", 1.0);
            if (auto cs_ = r.raw("C")) {
                const auto v = parse_doubles(*cs_, "[obstacle].C");
                if (v.size() != 6) throw ConfigError("[obstacle].C: expected C11 C12 C13 C22 C23 C33");
                o.material = StiffnessTensor2D(v[0], v[1], v[2], v[3], v[4], v[5], rho);
                if (!o.material.is_elliptic())
                    throw ConfigError("[obstacle].C: tensor violates Legendre ellipticity");
            } else if (auto lm = r.raw("lambda_mu")) {
                const auto v = parse_doubles(*lm, "[obstacle].lambda_mu");
                if (v.size() != 2) throw ConfigError("[obstacle].lambda_mu: expected lambda mu");
                o.material = isotropic_stiffness(v[0], v[1], rho);
            } else {
                throw ConfigError("[obstacle]: need either C or lambda_mu");
            }
            cfg.obstacles.push_back(std::move(o));
        } else if (sec.name == "incidence") {
            if (auto d = r.raw("directions")) {
                cfg.directions.clear();
                for (double ang : parse_doubles(*d, "[incidence].directions"))
                    cfg.directions.push_back(Vec2{std::cos(ang), std::sin(ang)});
            }
            if (auto v = r.raw("cp")) {
                const auto x = parse_doubles(*v, "[incidence].cp");
                cfg.cp = Complex{x[0], x.size() > 1 ? x[1] : 0.0};
            }
            if (auto v = r.raw("cs")) {
                const auto x = parse_doubles(*v, "[incidence].cs");
                cfg.cs = Complex{x[0], x.size() > 1 ? x[1] : 0.0};
            }
            if (auto v = r.raw("source")) {
                const auto x = parse_doubles(*v, "[incidence].source");
                if (x.size() != 2) throw ConfigError("[incidence].source: expected x y");
                cfg.source = Vec2{x[0], x[1]};
            }
        } else if (sec.name == "frequencies") {
            cfg.omegas = r.numbers("omega");
            for (double w : cfg.omegas)
                if (!(w > 0.0)) throw ConfigError("[frequencies].omega: frequencies must be positive");
        } else if (sec.name == "mesh") {
            cfg.h = r.number("h", cfg.h);
            cfg.levels = int(r.number("levels", cfg.levels));
            cfg.min_outer = int(r.number("min_outer", cfg.min_outer));
        } else if (sec.name == "dtn") {
            cfg.nt = int(r.number("nt", -1.0));
            if (auto v = r.raw("case")) {
                if (*v == "physical")
                    cfg.stress_case = StressCase::physical;
                else if (*v == "pressure_like")
                    cfg.stress_case = StressCase::pressure_like;
                else if (*v == "intermediate")
                    cfg.stress_case = StressCase::intermediate;
                else
                    throw ConfigError("[dtn].case: unknown case '" + *v + "'");
            }
        } else if (sec.name == "convergence") {
            cfg.convergence_example = int(r.number("example", 1.0));
            if (cfg.convergence_example != 1 && cfg.convergence_example != 2)
                throw ConfigError("[convergence].example: must be 1 or 2");
        } else if (sec.name == "inverse") {
            cfg.M = int(r.number("M", cfg.M));
            cfg.L = int(r.number("L", cfg.L));
            cfg.eps_coef = r.number("eps_coef", cfg.eps_coef);
            cfg.n_mea = int(r.number("n_mea", cfg.n_mea));
            cfg.noise = r.number("noise", 0.0);
            if (auto v = r.raw("initial")) {
                cfg.initial_guess.clear();
                std::string item;
                std::istringstream is(*v);
                while (std::getline(is, item, ';')) {
                    const auto x = parse_doubles(item, "[inverse].initial");
                    if (x.size() != 3)
                        throw ConfigError("[inverse].initial: each entry is center_x center_y radius");
                    cfg.initial_guess.push_back(ShapeParams::circle(Vec2{x[0], x[1]}, x[2], cfg.M));
                }
            }
        } else if (sec.name == "output") {
            if (auto v = r.raw("dir")) cfg.out_dir = *v;
            cfg.seed = std::uint64_t(r.number("seed", 1.0));
        } else {
            throw ConfigError("[" + sec.name + "]: unknown section");
        }
        r.finish();
    }
    if (!have_scenario) throw ConfigError("config: missing [scenario] section");
    // downstream invariants: curves valid inside the disk
    if (!cfg.obstacles.empty()) {
        try {
            validate_curves(cfg.curves(), cfg.R, 0.0);
        } catch (const GeometryError& e) {
            throw ConfigError(std::string("[obstacle]: ") + e.what());
        }
    }
    // initial guesses sized to M
    for (auto& g : cfg.initial_guess)
        if (int(g.radial.size()) != 2 * cfg.M + 1)
            throw ConfigError("[inverse].initial: guess order does not match M");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

} // namespace elwave
