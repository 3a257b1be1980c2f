#include "cutfem/bodyfit.hpp"

#include <cmath>
#include <map>
#include <ostream>

namespace cutfem {

double mixed_mesh::total_area() const {
    double s = 0;
    for (const auto& t : triangles) {
        const vec2 &a = vertices[t[0]], &b = vertices[t[1]], &c = vertices[t[2]];
        s += 0.5 * std::abs(cross(b - a, c - a));
    }
    for (const auto& q : quads) {
        const vec2 &a = vertices[q[0]], &b = vertices[q[1]], &c = vertices[q[2]], &d = vertices[q[3]];
        s += 0.5 * std::abs(cross(b - a, c - a)) + 0.5 * std::abs(cross(c - a, d - a));
    }
    return s;
}

double min_angle_bound(double delta0) {
    // fan triangles of a chord polygon of a large element: every edge pair at
    // the apex subtends at least atan(delta0/3) (3 = the macro aspect cap)
    return std::atan(delta0 / 3.0);
}

namespace {

double tri_min_angle(const vec2& a, const vec2& b, const vec2& c) {
    double la = dist(b, c), lb = dist(a, c), lc = dist(a, b);
    auto ang = [](double opp, double s1, double s2) {
        double v = (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2);
        return std::acos(std::clamp(v, -1.0, 1.0));
    };
    return std::min({ang(la, lb, lc), ang(lb, la, lc), ang(lc, la, lb)});
}

} // namespace

mixed_mesh export_body_fitted(const induced_mesh& im) {
    mixed_mesh mm;
    mm.delta0 = im.delta0;
    std::map<std::pair<long long, long long>, int> vmap;
    const double q = 1e10; // vertex dedup quantization
    auto vid = [&](const vec2& p) {
        std::pair<long long, long long> key{(long long)std::llround(p.x * q), (long long)std::llround(p.y * q)};
        auto it = vmap.find(key);
        if (it != vmap.end()) return it->second;
        int id = int(mm.vertices.size());
        mm.vertices.push_back(p);
        vmap.emplace(key, id);
        return id;
    };

    mm.min_triangle_angle = M_PI;
    for (const auto& e : im.elements) {
        if (!e.cut) {
            auto c = e.bounds.corners();
            mm.quads.push_back({vid(c[0]), vid(c[1]), vid(c[2]), vid(c[3])});
            continue;
        }
        const cut_geometry& g = *e.geom;
        for (int side = 0; side < 2; ++side) {
            const polygon& poly = g.poly[side];
            if (poly.v.size() < 3)
                throw degenerate_polygon("export_body_fitted: degenerate chord polygon");
            // fan from the farthest vertex A_K^i (a polygon vertex)
            int anchor = -1;
            for (int k = 0; k < int(poly.v.size()); ++k)
                if (dist(poly.v[k], g.far_vertex[side]) < 1e-9 * g.cell.diameter()) anchor = k;
            if (anchor < 0) anchor = 0;
            int m = int(poly.v.size());
            for (int k = 1; k + 1 < m; ++k) {
                const vec2& a = poly.v[anchor];
                const vec2& b = poly.v[(anchor + k) % m];
                const vec2& c = poly.v[(anchor + k + 1) % m];
                mm.triangles.push_back({vid(a), vid(b), vid(c)});
                mm.min_triangle_angle = std::min(mm.min_triangle_angle, tri_min_angle(a, b, c));
            }
        }
    }
    return mm;
}

void write_mixed_mesh(std::ostream& os, const mixed_mesh& mm) {
    os << "# mixed triangular-rectangular mesh\n";
    os << "# min_triangle_angle_bound_rad " << min_angle_bound(mm.delta0) << "\n";
    os << "# min_triangle_angle_rad " << mm.min_triangle_angle << "\n";
    os << "vertices " << mm.vertices.size() << "\n";
    for (const vec2& v : mm.vertices) os << v.x << ' ' << v.y << '\n';
    for (const auto& t : mm.triangles) os << "tri " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& t : mm.quads) os << "quad " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

} // namespace cutfem
