#pragma once

#include "cutfem/geom.hpp"

#include <vector>

namespace cutfem {

struct quad_node {
    vec2 p;
    double w = 0.0;
};

// Quadrature rule in physical coordinates. For line rules each node also
// carries a unit tangent and a unit normal (see arc_rule for orientation).
struct quad_rule {
    std::vector<quad_node> nodes;
    std::vector<vec2> tangent; // line rules only
    std::vector<vec2> normal;  // line rules only
    int exactness = 0;

    double total_weight() const {
        double s = 0;
        for (const auto& n : nodes) s += n.w;
        return s;
    }
    template <class F> double integrate(F&& f) const {
        double s = 0;
        for (const auto& n : nodes) s += n.w * f(n.p);
        return s;
    }
};

// Gauss-Legendre nodes/weights on [-1,1], n points (exact for degree 2n-1).
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

// Line rule on the segment [a,b], exact for 1D polynomials of degree q along it.
quad_rule segment_rule(const vec2& a, const vec2& b, int q);

// Tensor Gauss rule on a rectangle, exact for Q_q (degree q per variable).
quad_rule rect_rule(const rect& r, int q);

// Rule on a triangle (a,b,c), exact for total degree q (collapsed tensor Gauss).
quad_rule triangle_rule(const vec2& a, const vec2& b, const vec2& c, int q);

// Rule on a simple CCW polygon, exact for bivariate total degree q.
// Fan triangulation from the vertex `anchor` (default 0).
quad_rule polygon_rule(const polygon& poly, int q, int anchor = 0);

} // namespace cutfem
