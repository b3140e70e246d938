#include <catch2/catch_amalgamated.hpp>

#include "elwave/farfield.hpp"
#include "elwave/fem.hpp"
#include "elwave/reference_solutions.hpp"

using namespace elwave;
using Catch::Approx;

namespace {

const IsotropicBackground bg12{1.0, 2.0, 1.0};

std::vector<double> test_angles() {
    std::vector<double> a;
    for (int k = 0; k < 24; ++k) a.push_back(2.0 * pi * k / 24.0);
    return a;
}

// analytic trace of grad H_0(kp |x - b|) on the ring of radius R
std::vector<Vec2c> translated_monopole_trace(double kp, double R, const Vec2& b, int nsamp) {
    std::vector<Vec2c> out(nsamp);
    for (int i = 0; i < nsamp; ++i) {
        const double th = 2.0 * pi * i / nsamp;
        const Vec2 x = R * Vec2{std::cos(th), std::sin(th)};
        const Vec2 d = x - b;
        const double r = d.norm();
        auto [h0, dh0] = specfun::hankel1(0, kp * r);
        (void)h0;
        out[i] = kp * dh0 * (d / r).cast<Complex>();
    }
    return out;
}

} // namespace

TEST_CASE("point-source far field is 4 kp xhat (analytic trace)", "[farfield]") {
    DtnParams p(2.0, 1.0, bg12);
    DtnModeCache cache(p);
    const double kp = bg12.kp(1.0);
    auto [h0, dh0] = specfun::hankel1(0, kp * p.R);
    (void)h0;
    BoundaryTrace w(p.n_trunc);
    w.coeff(0) = Vec2c{kp * dh0, 0.0};
    const auto ff = farfield_from_trace(cache, w, test_angles());
    for (std::size_t k = 0; k < ff.angles.size(); ++k) {
        CHECK(std::abs(ff.up[k] - 4.0 * kp) < 1e-8 * 4.0 * kp);
        CHECK(std::abs(ff.us[k]) < 1e-8 * 4.0 * kp);
        const Vec2 xh{std::cos(ff.angles[k]), std::sin(ff.angles[k])};
        CHECK((ff.vector_at(k) - 4.0 * kp * xh.cast<Complex>()).norm() < 1e-8 * 4.0 * kp);
    }
}

TEST_CASE("zero trace gives a zero far field", "[farfield]") {
    DtnParams p(2.0, 1.0, bg12);
    DtnModeCache cache(p);
    const auto ff = farfield_from_trace(cache, BoundaryTrace(p.n_trunc), test_angles());
    for (auto v : ff.up) CHECK(std::abs(v) == 0.0);
    for (auto v : ff.us) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("translation multiplies u_p by a pure phase", "[farfield]") {
    DtnParams p(2.0, 1.5, bg12);
    DtnModeCache cache(p);
    const double kp = bg12.kp(1.5);
    const Vec2 b{0.4, -0.3};
    const auto samples = translated_monopole_trace(kp, p.R, b, 512);
    const auto w = analyze_ring_samples(samples, p.n_trunc);
    const auto ff = farfield_from_trace(cache, w, test_angles());
    for (std::size_t k = 0; k < ff.angles.size(); ++k) {
        CHECK(std::abs(std::abs(ff.up[k]) - 4.0 * kp) < 1e-8 * 4.0 * kp);
        const Vec2 xh{std::cos(ff.angles[k]), std::sin(ff.angles[k])};
        const Complex phase = std::exp(-iu * kp * b.dot(xh));
        CHECK(std::abs(ff.up[k] - 4.0 * kp * phase) < 1e-7 * 4.0 * kp);
        CHECK(std::abs(ff.us[k]) < 1e-7 * 4.0 * kp);
    }
}

TEST_CASE("truncation stability under doubling N_t", "[farfield]") {
    const double kp = bg12.kp(1.5);
    const Vec2 b{0.4, -0.3};
    DtnParams p1(2.0, 1.5, bg12, std::nullopt, 20);
    DtnParams p2(2.0, 1.5, bg12, std::nullopt, 40);
    const auto samples = translated_monopole_trace(kp, 2.0, b, 512);
    const auto f1 = farfield_from_trace(DtnModeCache(p1), analyze_ring_samples(samples, 20), test_angles());
    const auto f2 = farfield_from_trace(DtnModeCache(p2), analyze_ring_samples(samples, 40), test_angles());
    for (std::size_t k = 0; k < f1.angles.size(); ++k)
        CHECK(std::abs(f1.up[k] - f2.up[k]) < 1e-6 * std::abs(f2.up[k]));
}

TEST_CASE("FEM scattered trace reproduces the exact far field at order ~2", "[farfield][slow]") {
    // Example 1 transmission: the outside field is exactly grad H_0(kp |x|),
    // whose far field is 4 kp xhat.
    const auto c = example1_case(1.0);
    const double kp = c.background.kp(1.0);
    std::vector<double> errs;
    Mesh2D mesh = generate({StarCurve::circle(Vec2{0, 0}, 1.0)}, 2.0, 0.43, 32);
    for (int lev = 0; lev < 3; ++lev) {
        DtnParams dtn(2.0, 1.0, c.background, std::nullopt, 14);
        std::vector<StiffnessTensor2D> mats{
            isotropic_stiffness(1.0, 2.0, 1.0), c.obstacle};
        auto sys = assemble(mesh, mats, dtn);
        const auto sol = solve_transmission(sys, transmission_jumps(c, mesh));
        // the outside solution is the scattered field itself -> analyze its ring trace
        const auto w = analyze_ring_trace(mesh, sol.continuous, dtn.n_trunc);
        const auto ff = farfield_from_trace(sys.modes(), w, test_angles());
        double emax = 0.0;
        for (std::size_t k = 0; k < ff.angles.size(); ++k) {
            const Vec2 xh{std::cos(ff.angles[k]), std::sin(ff.angles[k])};
            emax = std::max(emax, (ff.vector_at(k) - 4.0 * kp * xh.cast<Complex>()).norm());
        }
        errs.push_back(emax / (4.0 * kp));
        if (lev < 2) mesh = refine(mesh);
    }
    CHECK(errs[1] < 0.05); // within 5% at mesh level 2 (second level)
    const double order = std::log2(errs[1] / errs[2]);
    INFO("far-field errors " << errs[0] << " " << errs[1] << " " << errs[2] << ", order " << order);
    CHECK(order > 1.5);
    CHECK(order < 2.6);
}
