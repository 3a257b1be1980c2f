#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutfem {

struct vec2 {
    double x = 0.0;
    double y = 0.0;

    vec2() = default;
    vec2(double x_, double y_) : x(x_), y(y_) {}

    vec2 operator+(const vec2& o) const { return {x + o.x, y + o.y}; }
    vec2 operator-(const vec2& o) const { return {x - o.x, y - o.y}; }
    vec2 operator*(double s) const { return {x * s, y * s}; }
    vec2 operator/(double s) const { return {x / s, y / s}; }
    vec2& operator+=(const vec2& o) { x += o.x; y += o.y; return *this; }
    vec2& operator-=(const vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline vec2 operator*(double s, const vec2& v) { return v * s; }
inline double dot(const vec2& a, const vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const vec2& a, const vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const vec2& v) { return std::hypot(v.x, v.y); }
inline vec2 normalized(const vec2& v) { double n = norm(v); return {v.x / n, v.y / n}; }
inline vec2 rot90(const vec2& v) { return {-v.y, v.x}; }
inline double dist(const vec2& a, const vec2& b) { return norm(a - b); }

// Axis-aligned rectangle, sides indexed 0:bottom 1:right 2:top 3:left.
struct rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    rect() = default;
    rect(double x0_, double y0_, double x1_, double y1_) : x0(x0_), y0(y0_), x1(x1_), y1(y1_) {}

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diameter() const { return std::hypot(width(), height()); }
    vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(const vec2& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool contains_strict(const vec2& p) const { return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1; }

    // Corners CCW starting from (x0,y0).
    std::array<vec2, 4> corners() const {
        return {vec2{x0, y0}, vec2{x1, y0}, vec2{x1, y1}, vec2{x0, y1}};
    }
    // side s endpoints, CCW orientation of the rectangle boundary
    std::pair<vec2, vec2> side(int s) const {
        switch (s) {
        case 0: return {vec2{x0, y0}, vec2{x1, y0}};
        case 1: return {vec2{x1, y0}, vec2{x1, y1}};
        case 2: return {vec2{x1, y1}, vec2{x0, y1}};
        default: return {vec2{x0, y1}, vec2{x0, y0}};
        }
    }
    double side_length(int s) const { return (s % 2 == 0) ? width() : height(); }
};

// Distance from point to the closed segment [a,b].
inline double dist_point_segment(const vec2& p, const vec2& a, const vec2& b) {
    vec2 ab = b - a;
    double L2 = dot(ab, ab);
    if (L2 == 0.0) return dist(p, a);
    double t = dot(p - a, ab) / L2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

// Signed distance from p to the line through a,b; positive on the left of a->b.
inline double signed_dist_line(const vec2& p, const vec2& a, const vec2& b) {
    vec2 d = normalized(b - a);
    return cross(d, p - a);
}

// Simple polygon, CCW vertex list.
struct polygon {
    std::vector<vec2> v;

    double area() const {
        double s = 0;
        for (size_t i = 0; i < v.size(); ++i) {
            const vec2& a = v[i];
            const vec2& b = v[(i + 1) % v.size()];
            s += cross(a, b);
        }
        return 0.5 * s;
    }
    bool empty() const { return v.size() < 3; }
};

// Clip a convex CCW polygon by the halfplane { p : dot(n, p) >= c }.
polygon clip_halfplane(const polygon& poly, const vec2& n, double c);

// Split a rectangle by the chord from p to q (both on the boundary).
// Returns the two polygons; first = left of p->q, second = right.
std::pair<polygon, polygon> split_rect_by_chord(const rect& r, const vec2& p, const vec2& q);

// Exact integral of x^i y^j over a simple CCW polygon (Green's theorem edge sums).
double polygon_monomial_integral(const polygon& poly, int i, int j);

// ---- error types used across the toolkit ----

struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct non_transversal_cut : geometry_error {
    using geometry_error::geometry_error;
};
struct degenerate_chord : geometry_error {
    using geometry_error::geometry_error;
};
struct degenerate_polygon : geometry_error {
    using geometry_error::geometry_error;
};
struct gram_breakdown : geometry_error {
    using geometry_error::geometry_error;
};
struct point_outside_element : geometry_error {
    using geometry_error::geometry_error;
};
struct pattern_mismatch : geometry_error {
    using geometry_error::geometry_error;
};
struct delta_out_of_range : geometry_error {
    using geometry_error::geometry_error;
};
struct merge_conflict : geometry_error {
    using geometry_error::geometry_error;
};
struct precondition_violated : geometry_error {
    using geometry_error::geometry_error;
};
struct iteration_limit : geometry_error {
    using geometry_error::geometry_error;
};
struct not_a_leaf : geometry_error {
    using geometry_error::geometry_error;
};
struct empty_domain : geometry_error {
    using geometry_error::geometry_error;
};
struct factorization_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct convergence_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_local_mass : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cutfem
