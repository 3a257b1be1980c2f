#pragma once

#include "cutfem/cut.hpp"
#include "cutfem/quadrature.hpp"

namespace cutfem {

// Area rule over the curved region K_side of a cut element: the chord polygon
// rule plus a signed blended sliver between the chord and the arc (linear
// blending transverse to the chord, Gauss panels along the arc parameter).
quad_rule cut_region_rule(const interface_curve& curve, const cut_geometry& g, int side, int q);

// Line rule along the interface arc between curve parameters t0 < t1 (t1 may
// exceed the period on closed curves). Nodes carry the unit tangent and the
// unit normal pointing out of Omega_1. Exact for polynomials of degree q in
// the arc parameter up to the smooth-geometry factor.
quad_rule arc_rule(const interface_curve& curve, double t0, double t1, int q);

} // namespace cutfem
