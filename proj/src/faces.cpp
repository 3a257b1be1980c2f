#include "cutfem/faces.hpp"

#include <algorithm>
#include <map>

namespace cutfem {

namespace {

using icoord = cartesian_mesh::icoord;

struct interval_entry {
    icoord lo, hi;
    long elem;
};

bool meets(const induced_mesh& im, long elem, int side) {
    const auto& e = im.elements[elem];
    return e.cut || e.subdomain == side;
}

} // namespace

face_set build_faces(const induced_mesh& im) {
    face_set fs;
    const cartesian_mesh& base = *im.base;

    // straight faces by interval matching on shared grid lines, per axis
    for (int axis = 0; axis < 2; ++axis) {
        // axis 0: vertical lines x = const, intervals in y; normal +x
        std::map<icoord, std::pair<std::vector<interval_entry>, std::vector<interval_entry>>> lines;
        for (const auto& e : im.elements) {
            if (axis == 0) {
                lines[e.ix1].first.push_back({e.iy0, e.iy1, e.id});  // element's right side
                lines[e.ix0].second.push_back({e.iy0, e.iy1, e.id}); // element's left side
            } else {
                lines[e.iy1].first.push_back({e.ix0, e.ix1, e.id});  // top side
                lines[e.iy0].second.push_back({e.ix0, e.ix1, e.id}); // bottom side
            }
        }
        for (auto& [line, pair] : lines) {
            auto& left = pair.first;  // minus candidates (normal points away from them)
            auto& right = pair.second;
            std::sort(left.begin(), left.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
            std::sort(right.begin(), right.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
            // interior pieces: overlaps between a left and right entry
            std::vector<std::pair<icoord, icoord>> covered;
            for (const auto& L : left) {
                for (const auto& R : right) {
                    icoord lo = std::max(L.lo, R.lo), hi = std::min(L.hi, R.hi);
                    if (lo >= hi) continue;
                    face f;
                    f.kind = face::side;
                    f.minus = L.elem;
                    f.plus = R.elem;
                    if (axis == 0) {
                        f.a = {base.to_x(line), base.to_y(lo)};
                        f.b = {base.to_x(line), base.to_y(hi)};
                        f.n = {1, 0};
                    } else {
                        f.a = {base.to_x(lo), base.to_y(line)};
                        f.b = {base.to_x(hi), base.to_y(line)};
                        f.n = {0, 1};
                    }
                    f.h_face = 0.5 * (im.elements[f.minus].h() + im.elements[f.plus].h());
                    for (int s = 1; s <= 2; ++s)
                        f.in_side[s - 1] = meets(im, f.minus, s) && meets(im, f.plus, s);
                    fs.faces.push_back(f);
                    covered.push_back({lo, hi});
                }
            }
            // boundary pieces: parts of element sides with no partner
            std::sort(covered.begin(), covered.end());
            auto emit_boundary = [&](const interval_entry& E, bool outward_positive) {
                icoord cur = E.lo;
                std::vector<std::pair<icoord, icoord>> gaps;
                for (auto [lo, hi] : covered) {
                    if (hi <= E.lo || lo >= E.hi) continue;
                    if (lo > cur) gaps.push_back({cur, lo});
                    cur = std::max(cur, hi);
                }
                if (cur < E.hi) gaps.push_back({cur, E.hi});
                for (auto [lo, hi] : gaps) {
                    face f;
                    f.kind = face::bdy;
                    f.minus = E.elem;
                    if (axis == 0) {
                        f.a = {base.to_x(line), base.to_y(lo)};
                        f.b = {base.to_x(line), base.to_y(hi)};
                        f.n = {outward_positive ? 1.0 : -1.0, 0.0};
                    } else {
                        f.a = {base.to_x(lo), base.to_y(line)};
                        f.b = {base.to_x(hi), base.to_y(line)};
                        f.n = {0.0, outward_positive ? 1.0 : -1.0};
                    }
                    f.h_face = im.elements[f.minus].h();
                    fs.faces.push_back(f);
                }
            };
            for (const auto& L : left) emit_boundary(L, true);   // element's right/top side on the boundary
            for (const auto& R : right) emit_boundary(R, false); // element's left/bottom side
        }
    }

    // interface arcs
    for (const auto& e : im.elements) {
        if (!e.cut) continue;
        face f;
        f.kind = face::arc;
        f.minus = e.id;
        f.elem = e.id;
        f.t0 = e.geom->topo.t_in;
        f.t1 = e.geom->topo.t_out;
        f.component = e.component;
        f.a = e.geom->p1;
        f.b = e.geom->p2;
        f.h_face = e.h();
        fs.faces.push_back(f);
    }

    // elements whose closure meets each face (for a_e, Theta_e maxima)
    fs.touching.resize(fs.faces.size());
    auto add_touchers = [&](size_t fi, const vec2& a, const vec2& b) {
        auto& out = fs.touching[fi];
        // face endpoints sit on the integer lattice; query the closed box
        double ux = base.to_x(1) - base.to_x(0);
        double uy = base.to_y(1) - base.to_y(0);
        icoord qx0 = icoord(std::llround((std::min(a.x, b.x) - base.to_x(0)) / ux));
        icoord qx1 = icoord(std::llround((std::max(a.x, b.x) - base.to_x(0)) / ux));
        icoord qy0 = icoord(std::llround((std::min(a.y, b.y) - base.to_y(0)) / uy));
        icoord qy1 = icoord(std::llround((std::max(a.y, b.y) - base.to_y(0)) / uy));
        for (long leaf : base.leaves_touching_box(qx0, qy0, qx1, qy1)) {
            auto it = im.leaf_to_element.find(leaf);
            if (it != im.leaf_to_element.end()) out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    };
    for (size_t i = 0; i < fs.faces.size(); ++i) add_touchers(i, fs.faces[i].a, fs.faces[i].b);
    return fs;
}

double face_alpha(const induced_mesh& im, const face_set& fs, size_t fi, double a1, double a2,
                  double alpha0) {
    const face& f = fs.faces[fi];
    double a_e = 0, th_e = 0;
    for (long el : fs.touching[fi]) {
        const auto& e = im.elements[el];
        double aK = e.cut ? 0.5 * (a1 + a2) : (e.subdomain == 1 ? a1 : a2);
        double thK = e.cut ? e.geom->theta : 1.0;
        a_e = std::max(a_e, aK);
        th_e = std::max(th_e, thK);
    }
    int p = im.degree;
    return alpha0 * a_e * th_e * double(p) * double(p) / f.h_face;
}

} // namespace cutfem
