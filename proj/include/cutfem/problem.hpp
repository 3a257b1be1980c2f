#pragma once

#include "cutfem/curve.hpp"

#include <functional>

namespace cutfem {

// Elliptic interface problem data: -div(a grad u) = f with piecewise-constant
// a = a1 on Omega_1, a2 on Omega_2, u = g on the outer boundary. Field
// callables take the subdomain index (1 or 2) so exact solutions extend
// smoothly per side.
struct interface_problem {
    std::vector<rect> domain;
    interface_set interface;
    double a1 = 1.0, a2 = 1.0;
    std::function<double(const vec2&, int)> f;
    std::function<double(const vec2&)> g;
    bool has_exact = false;
    std::function<double(const vec2&, int)> exact;
    std::function<vec2(const vec2&, int)> exact_grad;

    double coeff(int side) const { return side == 1 ? a1 : a2; }
};

// Circle interface r0 = 1.1 in (-2,2)^2, a1 = 10, a2 = 1, with the smooth
// manufactured solution whose jump data vanish on the interface.
interface_problem make_example2_problem();

// Five-petal polar interface in (-2,2)^2, a1 = 10, a2 = 1, f = 1, g = 0.
interface_problem make_example3_problem();

// Polynomial patch problem with a1 = a2 = 1: u is a global polynomial
// (coefficients c[i][j] on x^i y^j), f = -laplace(u), g = u.
interface_problem make_patch_problem(const interface_set& interface,
                                     const std::vector<std::vector<double>>& c,
                                     std::vector<rect> domain = {rect{-2, -2, 2, 2}});

} // namespace cutfem
