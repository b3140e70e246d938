#include <catch2/catch_amalgamated.hpp>

#include "elwave/dtn3d.hpp"

#include <random>

using namespace elwave;
using Catch::Approx;

namespace {
const IsotropicBackground bg12{1.0, 2.0, 1.0};
const DtnParams p32(2.0, 3.0, bg12);
} // namespace

TEST_CASE("Im Lambda_n > 0 for n = 0..100", "[dtn3d]") {
    for (int n = 0; n <= 100; ++n) {
        const auto m = mode_matrices_3d(p32, n);
        CHECK(m.Lambda.imag() > 0.0);
    }
}

TEST_CASE("closed-form inverse satisfies A A^{-1} = I", "[dtn3d]") {
    for (int n : {0, 1, 2, 7, 40, 200}) {
        const auto m = mode_matrices_3d(p32, n);
        const Mat3c prod = m.A * closed_form_inverse_3d(m, p32);
        CHECK((prod - Mat3c::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("spherical bound holds for every consumed ratio", "[dtn3d]") {
    for (double t : {p32.tp(), p32.ts()}) {
        auto ladder = specfun::spherical_ratio_ladder(200, t);
        for (int n = 0; n <= 200; ++n) {
            const Complex I = t * ladder[n].gamma;
            CHECK(-I.real() >= 1.0 - 1e-12);
            CHECK(-I.real() <= n + 1.0 + 1e-12);
        }
    }
}

TEST_CASE("3D Rellich diagonal and zero structure", "[dtn3d]") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int draw = 0; draw < 6; ++draw) {
        const double mu = 0.5 + 2.0 * U(rng);
        const double lam = -0.3 * mu + 2.5 * U(rng);
        const IsotropicBackground b{lam, mu, 0.5 + 2.0 * U(rng)};
        for (auto c : {StressCase::physical, StressCase::pressure_like, StressCase::intermediate}) {
            DtnParams p(0.8 + 3.0 * U(rng), 0.4 + 2.5 * U(rng), b, lambda_tilde_for(c, lam, mu));
            for (int n = 0; n <= 100; n += (n < 10 ? 1 : 13)) {
                const auto d = rellich_diagnostics_3d(p, n);
                CHECK(std::abs(d.lhs_v - d.rhs_v) < 1e-9 * std::abs(d.rhs_v));
                CHECK(std::abs(d.lhs_u - d.rhs_u) < 1e-9 * std::abs(d.rhs_u));
                CHECK(std::abs(d.lhs_y - d.rhs_y) < 1e-9 * std::abs(d.rhs_y));
                CHECK(d.offdiag < 1e-11);
            }
        }
    }
}

TEST_CASE("V-row couplings vanish exactly", "[dtn3d]") {
    for (int n : {0, 1, 5, 60, 400}) {
        const auto m = mode_matrices_3d(p32, n);
        CHECK(std::abs(m.W(0, 1)) == 0.0);
        CHECK(std::abs(m.W(1, 0)) == 0.0);
        CHECK(std::abs(m.W(0, 2)) == 0.0);
        CHECK(std::abs(m.W(2, 0)) == 0.0);
    }
}

TEST_CASE("W11 slope is -mu/R for large n", "[dtn3d]") {
    const auto w380 = mode_matrices_3d(p32, 380).W(0, 0).real();
    const auto w420 = mode_matrices_3d(p32, 420).W(0, 0).real();
    const double measured = -(w420 - w380) / 40.0;
    CHECK(measured == Approx(bg12.mu / p32.R).epsilon(0.02));
}

TEST_CASE("W22 and W33 slopes", "[dtn3d]") {
    const double lam = 1.0, mu = 2.0;
    const double slope = 2.0 * mu * (lam + 2.0 * mu) / (p32.R * (lam + 3.0 * mu));
    for (int idx : {1, 2}) {
        const double w380 = mode_matrices_3d(p32, 380).W(idx, idx).real();
        const double w420 = mode_matrices_3d(p32, 420).W(idx, idx).real();
        CHECK(-(w420 - w380) / 40.0 == Approx(slope).epsilon(0.02));
    }
}

TEST_CASE("trailing 2x2 block determinant growth", "[dtn3d]") {
    const double lam = 1.0, mu = 2.0, lt = p32.lambda_tilde;
    const double coef = (4.0 * mu * mu * sqr(lam + 2.0 * mu) -
                         sqr((lam - lt) * (lam + 3.0 * mu) + 2.0 * mu * mu)) /
                        (p32.R * p32.R * sqr(lam + 3.0 * mu));
    auto det_tail = [&](int n) {
        const auto m = mode_matrices_3d(p32, n);
        const Mat3c wt = -0.5 * (m.W + m.W.adjoint());
        return (wt(1, 1) * wt(2, 2) - wt(1, 2) * wt(2, 1)).real();
    };
    // quadratic growth: fit the n^2 coefficient by a second difference
    const double d = (det_tail(420) - 2.0 * det_tail(400) + det_tail(380)) / (40.0 * 40.0) * 2.0;
    CHECK(d == Approx(coef).epsilon(0.03));
}

TEST_CASE("positivity scan finds a small M_emp for the default parameters", "[dtn3d]") {
    const int m_emp = positivity_scan_3d(p32, 500);
    CHECK(m_emp <= 50);
    INFO("M_emp(3D) = " << m_emp);
    // near the admissible boundary lambda~ -> lambda + 2 mu the n^2 coefficient of
    // det(W~) degenerates and the PD tail starts later, eventually beyond n_max
    const double lam = 1.0, mu = 2.0;
    DtnParams near_bound(2.0, 3.0, bg12, lam + 2.0 * mu - 1e-2);
    const int m_bound = positivity_scan_3d(near_bound, 500);
    CHECK(m_bound >= m_emp);
    DtnParams nearer(2.0, 3.0, bg12, lam + 2.0 * mu - 1e-5);
    CHECK_THROWS_AS(positivity_scan_3d(nearer, 500), DomainError);
}

TEST_CASE("mode_matrices_3d rejects invalid orders", "[dtn3d]") {
    CHECK_THROWS_AS(mode_matrices_3d(p32, -1), DomainError);
    CHECK_THROWS_AS(mode_matrices_3d(p32, 501), DomainError);
}
