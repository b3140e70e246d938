#include <catch2/catch_amalgamated.hpp>

#include "elwave/mesh.hpp"

#include <sstream>

using namespace elwave;
using Catch::Approx;

namespace {

StarCurve rounded_triangle() {
    // (2 + 0.5 cos 3t)(cos t, sin t)
    return StarCurve(Vec2{0.0, 0.0}, {2.0, 0.0, 0.0, 0.0, 0.0, 0.5});
}

} // namespace

TEST_CASE("star curve evaluation and derivatives", "[mesh]") {
    const auto c = rounded_triangle();
    for (double t : {0.0, 0.7, 2.2, 5.5}) {
        CHECK(c.radius(t) == Approx(2.0 + 0.5 * std::cos(3.0 * t)).epsilon(1e-14));
        const Vec2 p = c.point(t);
        CHECK(p[0] == Approx((2.0 + 0.5 * std::cos(3.0 * t)) * std::cos(t)).margin(1e-14));
        // tangent by finite differences
        const double h = 1e-6;
        const Vec2 fd = (c.point(t + h) - c.point(t - h)) / (2.0 * h);
        CHECK((c.tangent(t) - fd).norm() < 1e-8);
        // outward normal points away from the center
        CHECK(c.outward_normal(t).dot(p - c.center) > 0.0);
        CHECK(c.outward_normal(t).norm() == Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("unit circle in B_2", "[mesh]") {
    const auto m = generate({StarCurve::circle(Vec2{0, 0}, 1.0)}, 2.0, 0.43 / 2.0);
    validate_mesh(m);
    for (int i : m.outer_ring) CHECK(std::abs(m.nodes[i].norm() - 2.0) < 1e-12);
    REQUIRE(m.interface_rings.size() == 1);
    for (int i : m.interface_rings[0].nodes) CHECK(std::abs(m.nodes[i].norm() - 1.0) < 1e-12);
    CHECK(m.max_diameter() <= 1.5 * 0.43 / 2.0);
    // both region tags present
    bool has0 = false, has1 = false;
    for (const auto& t : m.triangles) (t.tag == 0 ? has0 : has1) = true;
    CHECK(has0);
    CHECK(has1);
}

TEST_CASE("empty curve list gives a disk-only mesh", "[mesh]") {
    const auto m = generate({}, 2.0, 0.3);
    validate_mesh(m);
    for (const auto& t : m.triangles) CHECK(t.tag == 0);
    CHECK(m.interface_rings.empty());
}

TEST_CASE("rounded-triangle curve in B_5", "[mesh]") {
    const auto m = generate({rounded_triangle()}, 5.0, 0.5);
    validate_mesh(m);
    CHECK(m.max_diameter() <= 1.5 * 0.5);
}

TEST_CASE("refinement quadruples triangles and halves diameters", "[mesh]") {
    const auto m0 = generate({rounded_triangle()}, 5.0, 0.6);
    const auto m1 = refine(m0);
    validate_mesh(m1);
    CHECK(m1.triangles.size() == 4 * m0.triangles.size());
    const double ratio = m1.max_diameter() / m0.max_diameter();
    CHECK(ratio >= 0.5 - 1e-12);
    CHECK(ratio <= 0.75);
    // two refinements: outer nodes still on |x| = R
    const auto m2 = refine(m1);
    validate_mesh(m2);
    for (int i : m2.outer_ring) CHECK(std::abs(m2.nodes[i].norm() - 5.0) < 1e-12);
    // interface nodes on the exact curve
    const auto& c = m2.curves[0];
    const auto& ring = m2.interface_rings[0];
    for (std::size_t k = 0; k < ring.nodes.size(); ++k)
        CHECK((m2.nodes[ring.nodes[k]] - c.point(ring.theta[k])).norm() < 1e-12);
}

TEST_CASE("mesh determinism", "[mesh]") {
    const auto a = generate({rounded_triangle()}, 5.0, 0.55);
    const auto b = generate({rounded_triangle()}, 5.0, 0.55);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i] == b.nodes[i]);
    REQUIRE(a.triangles.size() == b.triangles.size());
    for (std::size_t i = 0; i < a.triangles.size(); ++i) {
        CHECK(a.triangles[i].v == b.triangles[i].v);
        CHECK(a.triangles[i].tag == b.triangles[i].tag);
    }
}

TEST_CASE("two obstacles get distinct tags", "[mesh]") {
    std::vector<StarCurve> curves{StarCurve::circle(Vec2{-1.7, 0.6}, 0.8),
                                  StarCurve(Vec2{1.6, -0.7}, {0.9, 0.0, 0.18})};
    const auto m = generate(curves, 5.0, 0.35);
    validate_mesh(m);
    std::array<int, 3> count{0, 0, 0};
    for (const auto& t : m.triangles) count[t.tag]++;
    CHECK(count[0] > 0);
    CHECK(count[1] > 0);
    CHECK(count[2] > 0);
}

TEST_CASE("geometry violations are rejected", "[mesh]") {
    CHECK_THROWS_AS(generate({StarCurve::circle(Vec2{0, 0}, 1.9)}, 2.0, 0.2), GeometryError);
    CHECK_THROWS_AS(generate({StarCurve::circle(Vec2{0, 0}, 1.0),
                              StarCurve::circle(Vec2{0.5, 0}, 1.0)},
                             5.0, 0.3),
                    GeometryError);
    CHECK_THROWS_AS(generate({StarCurve(Vec2{0, 0}, {0.5, 0.0, 0.8})}, 2.0, 0.2), GeometryError);
    CHECK_THROWS_AS(generate({}, 2.0, 0.6), GeometryError); // h too coarse
}

TEST_CASE("mesh export round trips through a stream", "[mesh]") {
    const auto m = generate({StarCurve::circle(Vec2{0, 0}, 1.0)}, 2.0, 0.3);
    std::ostringstream os;
    export_mesh(m, os);
    const std::string s = os.str();
    CHECK(s.find("nodes") != std::string::npos);
    CHECK(s.find("triangles") != std::string::npos);
    CHECK(s.find("outer_ring") != std::string::npos);
    // emitted counts match
    std::istringstream is(s);
    std::string line;
    std::getline(is, line); // header
    std::string word;
    std::size_t n;
    is >> word >> n;
    CHECK(word == "nodes");
    CHECK(n == m.nodes.size());
}
