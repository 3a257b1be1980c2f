#pragma once

#include "cutfem/curve.hpp"
#include "cutfem/geom.hpp"

#include <array>

namespace cutfem {

enum class cell_type { UNCUT, T1, T2, T3 };

inline const char* to_string(cell_type t) {
    switch (t) {
    case cell_type::UNCUT: return "UNCUT";
    case cell_type::T1: return "T1";
    case cell_type::T2: return "T2";
    case cell_type::T3: return "T3";
    }
    return "?";
}

struct crossing {
    int side = -1;   // 0 bottom, 1 right, 2 top, 3 left
    double s = 0;    // fraction along the side in CCW orientation
    vec2 point;
    double t = 0;    // curve parameter
};

struct cut_topology {
    long element = -1;
    cell_type type = cell_type::UNCUT;
    std::array<crossing, 2> cuts; // ordered along the curve: cuts[0] entry, cuts[1] exit
    double t_in = 0, t_out = 0;   // arc span; t_out may exceed the period on the wrap cell
    int uncut_side = 2;           // side classification when type == UNCUT

    bool is_cut() const { return type != cell_type::UNCUT; }
};

struct cut_geometry {
    long element = -1;
    rect cell;
    cut_topology topo;
    vec2 p1, p2;             // chord endpoints (entry, exit)
    polygon poly[2];         // K_1^h, K_2^h
    polygon shrunk[2];       // K_i^{h - delta}
    double delta = 0.0;      // dist_H(Gamma_K, Gamma_K^h)
    double eta_side[2] = {0, 0};
    double eta = 0.0;
    vec2 far_vertex[2];      // A_K^i
    double far_dist[2] = {0, 0};
    int degree = 1;
    double theta = 1.0;      // growth factor at `degree`

    double chord_length() const { return dist(p1, p2); }
};

// Find all transversal crossings of the curve with a segment [a,b].
// Returns pairs (s in [0,1] along the segment, curve parameter t).
std::vector<std::pair<double, double>> segment_crossings(const interface_curve& curve, const vec2& a,
                                                         const vec2& b, double length_scale);

// Classify a cell against the interface. delta0 only matters for the T2/T3
// distinction (T3 = opposite sides cut and large). Throws non_transversal_cut
// when the two-crossings-on-distinct-sides property fails.
cut_topology intersect_cell(const interface_curve& curve, const rect& cell, long element_id = -1,
                            double delta0 = 0.2);

// Full cut-cell geometry: chord, polygons, deviation, shrunk polygons, growth
// factor for degree p.
cut_geometry build_cut_geometry(const interface_curve& curve, const cut_topology& topo, const rect& cell,
                                int p);

// Theta(eta, p) = T((1+3 eta)/(1-eta))^(4p+3), T(t) = t + sqrt(t^2-1).
double growth_factor(double eta, int p);

// Def. 2.1 large-element test for an arbitrary axis-aligned rectangle.
bool is_large_element(const rect& region, const interface_curve& curve, double delta0);

// Per-side domain fractions: fraction of side s inside Omega_1 for s = 0..3.
std::array<double, 4> side_fractions_omega1(const rect& region, const interface_curve& curve);

} // namespace cutfem
