#pragma once

#include "cutfem/merge.hpp"

namespace cutfem {

// Face partition of an induced mesh: straight sides (including hanging-node
// partial sides), interface arcs, and boundary pieces.
struct face {
    enum kind_t { side, bdy, arc } kind = side;
    long minus = -1; // element the fixed normal points out of
    long plus = -1;  // the other element (side faces only)
    vec2 a, b;       // endpoints for straight faces
    vec2 n;          // fixed unit normal for straight faces
    long elem = -1;  // owning element for arcs
    double t0 = 0, t1 = 0;
    int component = 0;
    double h_face = 0;       // mesh function h|_e
    bool in_side[2] = {false, false}; // membership in E_i^side (side faces)

    double length() const { return dist(a, b); }
};

struct face_set {
    std::vector<face> faces;
    std::vector<std::vector<long>> touching; // per face: elements with closure meeting the face

    long count(face::kind_t k) const {
        long n = 0;
        for (const auto& f : faces) n += (f.kind == k);
        return n;
    }
};

face_set build_faces(const induced_mesh& im);

// The penalty function alpha|_e = alpha0 * a_e * Theta_e * p^2 / h_e with
// a_e, Theta_e the maxima over elements whose closure meets the face.
double face_alpha(const induced_mesh& im, const face_set& fs, size_t face_index, double a1, double a2,
                  double alpha0);

} // namespace cutfem
