#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutfem/cut.hpp"

#include <random>

using namespace cutfem;

TEST_CASE("circle vs corner cell: crossings and classification") {
    circle_curve c({0, 0}, 1.1);
    rect cell{1.0, 0.0, 1.25, 0.25};
    cut_topology topo = intersect_cell(c, cell, 0, 0.2);
    REQUIRE(topo.is_cut());
    // bottom crossing at x = 1.1, top crossing at x = sqrt(1.21 - 0.0625)
    CHECK(topo.cuts[0].side != topo.cuts[1].side);
    std::array<int, 2> sides{topo.cuts[0].side, topo.cuts[1].side};
    std::sort(sides.begin(), sides.end());
    CHECK(sides[0] == 0);
    CHECK(sides[1] == 2);
    for (const auto& cut : topo.cuts) {
        if (cut.side == 0) CHECK(cut.point.x == doctest::Approx(1.1).epsilon(1e-12));
        if (cut.side == 2) CHECK(cut.point.x == doctest::Approx(std::sqrt(1.21 - 0.0625)).epsilon(1e-12));
    }
    // opposite sides and large at delta0 = 0.2
    CHECK(topo.type == cell_type::T3);

    // cross-check against dense boundary sampling: sign changes on the boundary
    int changes = 0;
    auto corners = cell.corners();
    for (int s = 0; s < 4; ++s) {
        vec2 a = corners[s], b = corners[(s + 1) % 4];
        int prev = c.side(a);
        for (int k = 1; k <= 2000; ++k) {
            int cur = c.side(a + (double(k) / 2000) * (b - a));
            if (cur != prev) ++changes;
            prev = cur;
        }
    }
    CHECK(changes == 2);
}

TEST_CASE("cell strictly inside Omega_1 is uncut") {
    circle_curve c({0, 0}, 1.1);
    cut_topology topo = intersect_cell(c, rect{0, 0, 0.1, 0.1}, 0, 0.2);
    CHECK(!topo.is_cut());
    CHECK(topo.uncut_side == 1);
}

TEST_CASE("horizontal line through the unit cell is a large pass element") {
    line_curve l({0, 0.5}, {1, 0});
    cut_topology topo = intersect_cell(l, rect{0, 0, 1, 1}, 0, 0.2);
    REQUIRE(topo.is_cut());
    CHECK(topo.type == cell_type::T3);
    CHECK(topo.cuts[0].side % 2 == 1); // left/right sides
    CHECK(topo.cuts[1].side % 2 == 1);
    for (const auto& cut : topo.cuts) CHECK(cut.point.y == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("near-tangential and multi-cut cells raise non_transversal_cut") {
    // small circle swallowed by the cell
    circle_curve tiny({0.5, 0.5}, 0.1);
    CHECK_THROWS_AS(intersect_cell(tiny, rect{0, 0, 1, 1}, 0, 0.2), non_transversal_cut);
    // four crossings: circle poking through one side twice
    circle_curve c({0.5, -0.05}, 0.2);
    CHECK_THROWS_AS(intersect_cell(c, rect{0, 0, 1, 1}, 0, 0.2), non_transversal_cut);
}

TEST_CASE("growth factor: identity at 0, monotone in eta and p, bounded at the deviation target") {
    for (int p : {1, 2, 5}) CHECK(growth_factor(0.0, p) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double eta : {0.02, 0.05, 0.08, 0.12, 0.16, 0.3}) {
        double th = growth_factor(eta, 3);
        CHECK(th > prev);
        prev = th;
    }
    for (double eta : {0.05, 0.16}) {
        for (int p = 1; p < 8; ++p) CHECK(growth_factor(eta, p + 1) > growth_factor(eta, p));
    }
    CHECK_THROWS_AS(growth_factor(1.0, 2), std::domain_error);
    CHECK_THROWS_AS(growth_factor(-0.1, 2), std::domain_error);

    // eta = 0.1/(p(p+1)): Theta stays uniformly bounded (around 40-90, decreasing
    // toward ~36) -- direct evaluation of the closed form
    double worst = 0;
    for (int p = 1; p <= 8; ++p) {
        double th = growth_factor(0.1 / (p * (p + 1.0)), p);
        worst = std::max(worst, th);
        if (p >= 2) CHECK(th < growth_factor(0.1 / ((p - 1.0) * p), p - 1));
    }
    CHECK(worst < 100.0);
    CHECK(growth_factor(0.16, 3) == doctest::Approx(growth_factor(0.16, 3)));
    CHECK(growth_factor(0.17, 3) > growth_factor(0.16, 3));
    CHECK(growth_factor(0.15, 3) < growth_factor(0.16, 3));
}

TEST_CASE("is_large_element examples") {
    circle_curve c({0, 0}, 1.1);
    CHECK(is_large_element(rect{0, 0, 0.1, 0.1}, c, 0.2));
    line_curve low({0, 0.05}, {1, 0});
    CHECK(!is_large_element(rect{0, 0, 1, 1}, low, 0.2));
    line_curve mid({0, 0.3}, {1, 0});
    CHECK(is_large_element(rect{0, 0, 1, 1}, mid, 0.2));
    // monotone in delta0
    line_curve l({0, 0.15}, {1, 0});
    bool was_large = true;
    for (double d0 : {0.05, 0.1, 0.14, 0.16, 0.2, 0.3}) {
        bool lg = is_large_element(rect{0, 0, 1, 1}, l, d0);
        if (!was_large) CHECK(!lg);
        was_large = lg;
    }
}

TEST_CASE("straight cut geometry: zero deviation") {
    line_curve l({0, 0.3}, {1, 0});
    rect cell{0, 0, 1, 1};
    cut_topology topo = intersect_cell(l, cell, 0, 0.2);
    cut_geometry g = build_cut_geometry(l, topo, cell, 3);
    CHECK(g.delta == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(g.eta == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(g.theta == doctest::Approx(1.0));
    CHECK(g.poly[0].area() + g.poly[1].area() == doctest::Approx(1.0));
    // shrunk polygons equal the chord polygons when delta = 0
    CHECK(g.shrunk[0].area() == doctest::Approx(g.poly[0].area()));
}

TEST_CASE("reference cubic-chord cut reproduces the closed-form deviation") {
    double mu = 3.8;
    cubic_chord_curve curve(mu);
    rect cell{-2, -2, 2, 2};
    cut_topology topo = intersect_cell(curve, cell, 0, 0.2);
    REQUIRE(topo.is_cut());
    CHECK(topo.type == cell_type::T1);
    cut_geometry g = build_cut_geometry(curve, topo, cell, 3);
    double eta_formula = 200.0 / (3.0 * std::sqrt(3.0) * std::pow(mu * mu + 1.0, 2));
    CHECK(g.eta == doctest::Approx(eta_formula).epsilon(1e-9));
    CHECK(g.eta == doctest::Approx(0.16).epsilon(0.02));
    CHECK(g.delta == doctest::Approx(curve.exact_deviation()).epsilon(1e-9));
    // triangle side: the side-1 chord polygon has 3 vertices, the other 5
    CHECK(std::min(g.poly[0].v.size(), g.poly[1].v.size()) == 3);
    CHECK(std::max(g.poly[0].v.size(), g.poly[1].v.size()) == 5);
    CHECK(std::min(g.shrunk[0].v.size(), g.shrunk[1].v.size()) == 3);
}

TEST_CASE("circle cut vs dense-sampling oracle") {
    circle_curve curve({0, 0}, 1.1);
    rect cell{1.0, 0.0, 1.125, 0.125};
    cut_topology topo = intersect_cell(curve, cell, 0, 0.2);
    REQUIRE(topo.is_cut());
    cut_geometry g = build_cut_geometry(curve, topo, cell, 2);

    // oracle: 1e5 arc samples for the Hausdorff distance to the chord
    vec2 p1 = g.p1, p2 = g.p2;
    vec2 d = normalized(p2 - p1);
    vec2 n = rot90(d);
    double dmax = 0;
    for (int k = 0; k <= 100000; ++k) {
        double t = topo.t_in + (topo.t_out - topo.t_in) * k / 100000.0;
        double tt = std::fmod(t, 2 * M_PI);
        dmax = std::max(dmax, std::abs(dot(curve.eval(tt) - p1, n)));
    }
    CHECK(g.delta == doctest::Approx(dmax).epsilon(1e-7));

    // vertex distances analytic: farthest vertices per side
    for (int side = 0; side < 2; ++side) {
        double best = -1;
        for (const vec2& c : cell.corners())
            if (curve.side(c) == side + 1) best = std::max(best, dist_point_segment(c, p1, p2));
        CHECK(g.far_dist[side] == doctest::Approx(best));
    }
    CHECK(g.eta == doctest::Approx(g.delta / std::min(g.far_dist[0], g.far_dist[1])));
}

TEST_CASE("delta estimator is stable under sampling refinement (convergence property)") {
    circle_curve curve({0, 0}, 1.1);
    rect cell{0.75, 0.5, 1.0, 0.75};
    cut_topology topo = intersect_cell(curve, cell, 0, 0.2);
    cut_geometry g2 = build_cut_geometry(curve, topo, cell, 2);
    cut_geometry g8 = build_cut_geometry(curve, topo, cell, 8); // denser start
    CHECK(std::abs(g2.delta - g8.delta) < 1e-10 * cell.diameter());
}

TEST_CASE("eta is scale invariant") {
    for (double s : {0.5, 2.0, 16.0}) {
        circle_curve c1({0, 0}, 1.1), cs({0, 0}, 1.1 * s);
        rect r1{0.75, 0.5, 1.0, 0.75};
        rect rs{0.75 * s, 0.5 * s, 1.0 * s, 0.75 * s};
        cut_geometry g1 = build_cut_geometry(c1, intersect_cell(c1, r1, 0, 0.2), r1, 2);
        cut_geometry gs = build_cut_geometry(cs, intersect_cell(cs, rs, 0, 0.2), rs, 2);
        CHECK(gs.eta == doctest::Approx(g1.eta).epsilon(1e-9));
    }
}

TEST_CASE("interface elements always report two crossings on distinct sides") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    circle_curve c({0, 0}, 1.1);
    int tested = 0;
    for (int rep = 0; rep < 300; ++rep) {
        double x0 = u(rng), y0 = u(rng);
        rect cell{x0, y0, x0 + 0.2, y0 + 0.2};
        try {
            cut_topology topo = intersect_cell(c, cell, 0, 0.2);
            if (!topo.is_cut()) continue;
            ++tested;
            CHECK(topo.cuts[0].side != topo.cuts[1].side);
            CHECK(cell.contains(topo.cuts[0].point));
            CHECK(cell.contains(topo.cuts[1].point));
            CHECK(topo.t_out > topo.t_in);
        } catch (const non_transversal_cut&) {
            // fine: the sampler found a tangential box
        }
    }
    CHECK(tested > 50);
}
