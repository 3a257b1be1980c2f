#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutfem/cut_rules.hpp"
#include "cutfem/quadrature.hpp"

#include <random>

using namespace cutfem;

TEST_CASE("unit square rule integrates constants") {
    polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    quad_rule r = polygon_rule(sq, 3);
    CHECK(r.integrate([](const vec2&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("triangle rule: int x over reference triangle = 1/6") {
    quad_rule r = triangle_rule({0, 0}, {1, 0}, {0, 1}, 3);
    CHECK(r.integrate([](const vec2& p) { return p.x; }) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("random convex pentagon vs edge-sum oracle, degree 5") {
    polygon pent;
    pent.v = {{0, 0}, {1.3, -0.1}, {1.9, 0.8}, {0.9, 1.6}, {-0.3, 0.9}};
    REQUIRE(pent.area() > 0);
    quad_rule r = polygon_rule(pent, 5);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-1, 1);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<std::vector<double>> c(6, std::vector<double>(6, 0.0));
        double want = 0;
        for (int i = 0; i <= 5; ++i)
            for (int j = 0; i + j <= 5; ++j) {
                c[i][j] = coef(rng);
                want += c[i][j] * polygon_monomial_integral(pent, i, j);
            }
        double got = r.integrate([&](const vec2& p) {
            double v = 0;
            for (int i = 0; i <= 5; ++i)
                for (int j = 0; i + j <= 5; ++j) v += c[i][j] * std::pow(p.x, i) * std::pow(p.y, j);
            return v;
        });
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("area-rule weights positive and sum to the measure") {
    polygon pent;
    pent.v = {{0, 0}, {1.3, -0.1}, {1.9, 0.8}, {0.9, 1.6}, {-0.3, 0.9}};
    for (int q : {1, 3, 7}) {
        quad_rule r = polygon_rule(pent, q);
        double s = 0;
        for (const auto& n : r.nodes) {
            CHECK(n.w > 0);
            s += n.w;
        }
        CHECK(s == doctest::Approx(pent.area()).epsilon(1e-12));
    }
}

TEST_CASE("segment rule length and line integral") {
    quad_rule r = segment_rule({0, 0}, {3, 4}, 5);
    CHECK(r.total_weight() == doctest::Approx(5.0));
    // int of x along the segment = L * avg(x) = 5 * 1.5
    CHECK(r.integrate([](const vec2& p) { return p.x; }) == doctest::Approx(7.5));
}

TEST_CASE("arc rule: circumference and an analytic arc integral") {
    circle_curve c({0, 0}, 1.1);
    quad_rule full = arc_rule(c, 0, 2 * M_PI, 12);
    CHECK(full.total_weight() == doctest::Approx(2 * M_PI * 1.1).epsilon(1e-12));

    // quarter circle, f = x:  int_0^{pi/2} r cos(t) r dt = r^2
    quad_rule quarter = arc_rule(c, 0, M_PI / 2, 12);
    CHECK(quarter.integrate([](const vec2& p) { return p.x; }) ==
          doctest::Approx(1.1 * 1.1).epsilon(1e-12));

    // normals point out of Omega_1 (outward from the circle)
    for (size_t k = 0; k < full.nodes.size(); ++k) {
        CHECK(dot(full.normal[k], full.nodes[k].p) > 0);
        CHECK(std::abs(dot(full.normal[k], full.tangent[k])) < 1e-14);
    }
}

TEST_CASE("straight segment through arc_rule machinery") {
    line_curve line({0, 0.5}, {1, 0});
    quad_rule r = arc_rule(line, 0.0, 2.0, 6);
    CHECK(r.total_weight() == doctest::Approx(2.0));
}

TEST_CASE("cut region rules: straight cut reduces to the polygon part") {
    line_curve line({0, 0.25}, {1, 0});
    rect cell{0, 0, 1, 1};
    cut_topology topo = intersect_cell(line, cell, 0, 0.2);
    REQUIRE(topo.is_cut());
    cut_geometry g = build_cut_geometry(line, topo, cell, 2);
    CHECK(g.delta == doctest::Approx(0.0).epsilon(1e-14));
    quad_rule r0 = cut_region_rule(line, g, 0, 4);
    quad_rule r1 = cut_region_rule(line, g, 1, 4);
    CHECK(r0.total_weight() + r1.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::min(r0.total_weight(), r1.total_weight()) == doctest::Approx(0.25).epsilon(1e-12));
}

namespace {

// recursive quadtree area of {level > 0} inside a cell, for the area oracle
double region_area_oracle(const interface_curve& c, int side, rect r, int depth) {
    int corners_in = 0;
    for (const vec2& q : r.corners()) corners_in += (c.side(q) == side);
    if (depth >= 13 || r.area() < 1e-13) return corners_in >= 2 ? r.area() * corners_in / 4.0 : 0.0;
    if (corners_in == 4 && c.side(r.center()) == side && depth > 3) return r.area();
    if (corners_in == 0 && c.side(r.center()) != side && depth > 3) return 0.0;
    vec2 m = r.center();
    return region_area_oracle(c, side, {r.x0, r.y0, m.x, m.y}, depth + 1) +
           region_area_oracle(c, side, {m.x, r.y0, r.x1, m.y}, depth + 1) +
           region_area_oracle(c, side, {r.x0, m.y, m.x, r.y1}, depth + 1) +
           region_area_oracle(c, side, {m.x, m.y, r.x1, r.y1}, depth + 1);
}

} // namespace

TEST_CASE("cut region rule matches the adaptive area oracle on a circle cut") {
    circle_curve c({0, 0}, 1.1);
    rect cell{0.75, 0.5, 1.0, 0.75};
    cut_topology topo = intersect_cell(c, cell, 0, 0.2);
    REQUIRE(topo.is_cut());
    cut_geometry g = build_cut_geometry(c, topo, cell, 2);
    quad_rule r0 = cut_region_rule(c, g, 0, 6);
    double oracle = region_area_oracle(c, 1, cell, 0);
    CHECK(r0.total_weight() == doctest::Approx(oracle).epsilon(2e-8));

    // additivity: both sides sum to the cell area
    quad_rule r1 = cut_region_rule(c, g, 1, 6);
    CHECK(r0.total_weight() + r1.total_weight() == doctest::Approx(cell.area()).epsilon(1e-12));

    // smooth integrand additivity against the tensor rule on the cell
    auto f = [](const vec2& p) { return p.x * p.x + p.y * p.y; };
    quad_rule rc = rect_rule(cell, 8);
    CHECK(r0.integrate(f) + r1.integrate(f) == doctest::Approx(rc.integrate(f)).epsilon(1e-9));
}
