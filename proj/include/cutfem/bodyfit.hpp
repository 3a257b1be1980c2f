#pragma once

#include "cutfem/merge.hpp"

#include <iosfwd>

namespace cutfem {

// Mixed triangular-rectangular body-fitted mesh: triangles only inside
// interface elements (fans of the chord polygons from the farthest vertex),
// rectangles elsewhere. Vertices include the chord endpoints.
struct mixed_mesh {
    std::vector<vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 4>> quads;
    double min_triangle_angle = 0.0; // radians
    double delta0 = 0.2;

    double total_area() const;
};

mixed_mesh export_body_fitted(const induced_mesh& im);

// `tri v1 v2 v3` / `quad v1 v2 v3 v4` with a vertex table; the header reports
// the delta0-dependent angle bound and the measured minimum angle.
void write_mixed_mesh(std::ostream& os, const mixed_mesh& mm);

// Guaranteed lower bound on fan-triangle angles for large elements with
// fraction delta0 (conservative).
double min_angle_bound(double delta0);

} // namespace cutfem
