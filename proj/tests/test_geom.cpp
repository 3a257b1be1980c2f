#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutfem/geom.hpp"

#include <random>

using namespace cutfem;

TEST_CASE("polygon area and orientation") {
    polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(sq.area() == doctest::Approx(1.0));
    polygon tri;
    tri.v = {{0, 0}, {1, 0}, {0, 1}};
    CHECK(tri.area() == doctest::Approx(0.5));
}

TEST_CASE("halfplane clip of a square") {
    polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    // keep x >= 0.25
    polygon c = clip_halfplane(sq, {1, 0}, 0.25);
    CHECK(c.area() == doctest::Approx(0.75));
    // empty clip
    polygon e = clip_halfplane(sq, {1, 0}, 2.0);
    CHECK(e.empty());
}

TEST_CASE("split rectangle by a chord") {
    rect r{0, 0, 1, 1};
    SUBCASE("diagonal-ish corner cut") {
        auto [left, right] = split_rect_by_chord(r, {0.0, 0.25}, {0.25, 0.0});
        double a0 = left.area(), a1 = right.area();
        CHECK(a0 + a1 == doctest::Approx(1.0));
        CHECK(std::min(a0, a1) == doctest::Approx(0.5 * 0.25 * 0.25));
    }
    SUBCASE("horizontal chord") {
        auto [left, right] = split_rect_by_chord(r, {0.0, 0.5}, {1.0, 0.5});
        CHECK(left.area() + right.area() == doctest::Approx(1.0));
        CHECK(left.area() == doctest::Approx(0.5));
    }
    SUBCASE("degenerate chord throws") {
        CHECK_THROWS_AS(split_rect_by_chord(r, {0.5, 0.0}, {0.5, 0.0}), degenerate_chord);
    }
}

TEST_CASE("monomial integrals via edge sums match closed forms") {
    polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    // int over unit square of x^i y^j = 1 / ((i+1)(j+1))
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
            CHECK(polygon_monomial_integral(sq, i, j) ==
                  doctest::Approx(1.0 / ((i + 1.0) * (j + 1.0))).epsilon(1e-13));

    polygon tri;
    tri.v = {{0, 0}, {1, 0}, {0, 1}};
    CHECK(polygon_monomial_integral(tri, 0, 0) == doctest::Approx(0.5));
    CHECK(polygon_monomial_integral(tri, 1, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(polygon_monomial_integral(tri, 1, 1) == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("point-segment distance") {
    CHECK(dist_point_segment({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(dist_point_segment({2, 0}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(dist_point_segment({-3, 4}, {-1, 0}, {1, 0}) == doctest::Approx(std::hypot(2, 4)));
}
