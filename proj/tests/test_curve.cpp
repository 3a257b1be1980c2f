#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutfem/curve.hpp"
#include "cutfem/expression.hpp"

using namespace cutfem;

TEST_CASE("expression parsing and symbolic derivative") {
    expression e("2*t^3 - sin(5*t) + 4^sin(t)");
    expression d = e.derivative();
    auto fd = [&](double t) { return (e.eval(t + 1e-6) - e.eval(t - 1e-6)) / 2e-6; };
    for (double t : {-1.0, 0.2, 0.7, 2.0}) CHECK(d.eval(t) == doctest::Approx(fd(t)).epsilon(1e-6));
    CHECK(expression("pi").eval(0.0) == doctest::Approx(M_PI));
    CHECK_THROWS(expression("2*"));
    CHECK_THROWS(expression("bogus(t)"));
}

TEST_CASE("circle basics") {
    circle_curve c({0, 0}, 1.1);
    CHECK(c.side({0, 0}) == 1);
    CHECK(c.side({2, 2}) == 2);
    CHECK(c.param_at({1.1, 0}) == doctest::Approx(0.0));
    vec2 n = c.normal_out1(M_PI / 3);
    vec2 p = c.eval(M_PI / 3);
    CHECK(dot(n, p) == doctest::Approx(1.1)); // radial outward unit normal
}

TEST_CASE("line side convention") {
    line_curve l({0, 0.5}, {1, 0});
    CHECK(l.side({0.3, 0.9}) == 1);  // left of the direction = above
    CHECK(l.side({0.3, 0.1}) == 2);
}

TEST_CASE("polar five-petal curve is closed, positive, and C^1-consistent") {
    curve_ptr c = make_example3_curve();
    CHECK(c->closed());
    for (double t : {0.0, 0.5, 1.2, 3.1, 5.0}) {
        vec2 fd = (c->eval(t + 1e-7) - c->eval(t - 1e-7)) / 2e-7;
        vec2 an = c->deriv(t);
        CHECK(norm(fd - an) / norm(an) < 1e-5);
    }
    // r range from the formula: (2/9)(3 + 4^{+-1})
    double rmin = 2.0 / 9.0 * (3 + 0.25), rmax = 2.0 / 9.0 * (3 + 4.0);
    for (double t = 0; t < 2 * M_PI; t += 0.01) {
        double r = norm(c->eval(t));
        CHECK(r > rmin - 1e-12);
        CHECK(r < rmax + 1e-12);
    }
}

TEST_CASE("cubic chord family: exact deviation and side classification") {
    double mu = 3.8;
    cubic_chord_curve c(mu);
    double eta_formula = 200.0 / (3.0 * std::sqrt(3.0) * std::pow(mu * mu + 1.0, 2));
    CHECK(c.exact_eta() == doctest::Approx(eta_formula).epsilon(1e-14));
    // corner A is on side 1, the other corners on side 2
    CHECK(c.side({-2, -2}) == 1);
    CHECK(c.side({2, -2}) == 2);
    CHECK(c.side({2, 2}) == 2);
    CHECK(c.side({-2, 2}) == 2);
    // curve endpoints sit on the square boundary
    vec2 e0 = c.eval(c.t_min()), e1 = c.eval(c.t_max());
    CHECK(((std::abs(e0.x + 2) < 1e-12) || (std::abs(e0.y + 2) < 1e-12)));
    CHECK(((std::abs(e1.x + 2) < 1e-12) || (std::abs(e1.y + 2) < 1e-12)));
    // mu_for_eta inverts the family
    CHECK(cubic_chord_curve::mu_for_eta(eta_formula) == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("curve config parsing") {
    CHECK(parse_curve("circle{0,0,1.1}")->side({0, 0}) == 1);
    CHECK(parse_curve("preset:example2")->closed());
    CHECK(parse_curve("preset:example1:mu=5")->t_max() == doctest::Approx(1.0 / 26.0));
    curve_ptr polar = parse_curve("polar{(2/9)*(3+4^sin(5*t))}");
    curve_ptr preset = make_example3_curve();
    for (double t : {0.3, 1.0, 2.2}) CHECK(norm(polar->eval(t) - preset->eval(t)) < 1e-12);
    curve_ptr par = parse_curve("parametric{cos(t);sin(t);0;6.283185307179586;closed}");
    CHECK(par->side({0, 0}) == 1);
    CHECK_THROWS(parse_curve("blob{1}"));
}

TEST_CASE("random smooth curves stay inside the domain and are closed") {
    for (unsigned seed : {1u, 7u, 23u}) {
        curve_ptr c = make_random_smooth_curve(seed);
        rect bb = c->bbox();
        CHECK(bb.x0 > -2.0);
        CHECK(bb.x1 < 2.0);
        CHECK(bb.y0 > -2.0);
        CHECK(bb.y1 < 2.0);
        CHECK(c->closed());
        CHECK(c->side({0, 0}) == 1);
    }
}
