#include "cutfem/patterns.hpp"

#include <algorithm>

namespace cutfem {

namespace {

using icoord = cartesian_mesh::icoord;

struct ibox {
    icoord x0, y0, x1, y1;
    icoord w() const { return x1 - x0; }
    icoord h() const { return y1 - y0; }
};

ibox box_of(const cartesian_mesh& mesh, long id) {
    const auto& c = mesh.at(id);
    return {c.ix0, c.iy0, c.ix1, c.iy1};
}

long find_exact_leaf(const cartesian_mesh& mesh, const ibox& b) {
    for (long id : mesh.leaves_touching_box(b.x0, b.y0, b.x1, b.y1)) {
        const auto& c = mesh.at(id);
        if (c.ix0 == b.x0 && c.iy0 == b.y0 && c.ix1 == b.x1 && c.iy1 == b.y1) return id;
    }
    return -1;
}

rect to_rect(const cartesian_mesh& mesh, const ibox& b) {
    return {mesh.to_x(b.x0), mesh.to_y(b.y0), mesh.to_x(b.x1), mesh.to_y(b.y1)};
}

bool is_pass(cell_type t) { return t == cell_type::T2 || t == cell_type::T3; }

// side of `a` that faces side-neighbor `b`; -1 if not side-adjacent
int facing_side(const cartesian_mesh& mesh, long a, long b) {
    for (int s = 0; s < 4; ++s)
        for (long n : mesh.side_neighbors(a, s))
            if (n == b) return s;
    return -1;
}

struct far_cross {
    vec2 point;
    int base_side;  // side of the base rectangle it lies on
    double e;       // distance to the nearest endpoint of that base side
    int toward_end; // 0 = nearest the CCW start of the side, 1 = nearest the end
};

// Locate a crossing point on the boundary of `base` and measure the distance
// to the nearest endpoint of the base side containing it.
far_cross locate_on_base(const rect& base, const vec2& p, double tol) {
    for (int s = 0; s < 4; ++s) {
        auto [a, b] = base.side(s);
        double L = dist(a, b);
        double t = dot(p - a, b - a) / (L * L);
        vec2 proj = a + t * (b - a);
        if (t >= -tol && t <= 1.0 + tol && dist(proj, p) <= tol * L) {
            double da = t * L, db = (1.0 - t) * L;
            far_cross fc;
            fc.point = p;
            fc.base_side = s;
            fc.e = std::max(0.0, std::min(da, db));
            fc.toward_end = da <= db ? 0 : 1;
            return fc;
        }
    }
    throw pattern_mismatch("pattern: interface crossing not on the macro candidate boundary");
}

// unit axis direction pointing out of `base` along side `s` beyond endpoint `which`
std::pair<int, int> extension_axis(int base_side, int which) {
    // returns (axis 0=x 1=y, sign)
    // side endpoints in CCW orientation: bottom a=(x0,y0) b=(x1,y0), right a=(x1,y0) b=(x1,y1),
    // top a=(x1,y1) b=(x0,y1), left a=(x0,y1) b=(x0,y0)
    switch (base_side) {
    case 0: return which == 0 ? std::pair{0, -1} : std::pair{0, +1};
    case 1: return which == 0 ? std::pair{1, -1} : std::pair{1, +1};
    case 2: return which == 0 ? std::pair{0, +1} : std::pair{0, -1};
    default: return which == 0 ? std::pair{1, +1} : std::pair{1, -1};
    }
}

// Collect the leaf ids of one cell-layer glued to `base` in direction
// (axis, sign); cells must exist as uncut same-size leaves.
std::vector<long> extension_layer(const cartesian_mesh& mesh, const leaf_classification& cls,
                                  const ibox& base, icoord cw, icoord chh, int axis, int sign) {
    std::vector<long> out;
    if (axis == 0) {
        icoord x0 = sign > 0 ? base.x1 : base.x0 - cw;
        for (icoord y = base.y0; y < base.y1; y += chh) {
            long id = find_exact_leaf(mesh, {x0, y, x0 + cw, y + chh});
            if (id < 0 || cls.is_cut(id))
                throw pattern_mismatch("pattern: extension cell missing or cut");
            out.push_back(id);
        }
    } else {
        icoord y0 = sign > 0 ? base.y1 : base.y0 - chh;
        for (icoord x = base.x0; x < base.x1; x += cw) {
            long id = find_exact_leaf(mesh, {x, y0, x + cw, y0 + chh});
            if (id < 0 || cls.is_cut(id))
                throw pattern_mismatch("pattern: extension cell missing or cut");
            out.push_back(id);
        }
    }
    return out;
}

ibox grow(const ibox& b, icoord cw, icoord chh, int axis, int sign) {
    ibox g = b;
    if (axis == 0) {
        if (sign > 0) g.x1 += cw;
        else g.x0 -= cw;
    } else {
        if (sign > 0) g.y1 += chh;
        else g.y0 -= chh;
    }
    return g;
}

pattern_result finish(const cartesian_mesh& mesh, const interface_curve& curve, double delta0,
                      const ibox& macro_box, std::vector<long> absorbed, int branch) {
    pattern_result r;
    r.branch = branch;
    r.macro = to_rect(mesh, macro_box);
    std::sort(absorbed.begin(), absorbed.end());
    absorbed.erase(std::unique(absorbed.begin(), absorbed.end()), absorbed.end());
    r.absorbed = std::move(absorbed);
    if (!is_large_element(r.macro, curve, delta0))
        throw pattern_mismatch("pattern: emitted macro-element fails the large-element test");
    // the absorbed leaves must tile the macro exactly
    double area = 0;
    for (long id : r.absorbed) area += mesh.bounds(id).area();
    if (std::abs(area - r.macro.area()) > 1e-9 * r.macro.area())
        throw pattern_mismatch("pattern: absorbed cells do not tile the macro rectangle");
    return r;
}

// shared implementation for patterns 1 and 2 (corner element + two neighbors
// across its cut sides; 2x2 base completed by the diagonal cell)
pattern_result elbow_pattern(int kind, const std::vector<long>& cells, const cartesian_mesh& mesh,
                             const interface_curve& curve, const leaf_classification& cls, double delta0) {
    long n1 = cells[0], k = cells[1], n2 = cells[2];
    const cut_topology& tk = cls.topo.at(k);
    const cut_topology& t1 = cls.topo.at(n1);
    const cut_topology& t2 = cls.topo.at(n2);
    if (tk.type != cell_type::T1) throw pattern_mismatch("pattern 1/2: middle element is not corner-cut");
    if (kind == 1 && !(is_pass(t1.type) && is_pass(t2.type)))
        throw pattern_mismatch("pattern 1: flankers must be pass elements");
    if (kind == 2 && !(t1.type == cell_type::T1 && t2.type == cell_type::T1))
        throw pattern_mismatch("pattern 2: flankers must be corner elements");

    int lev = mesh.level(k);
    if (mesh.level(n1) != lev || mesh.level(n2) != lev)
        throw pattern_mismatch("pattern 1/2: input sizes differ");

    if (is_large_element(mesh.bounds(k), curve, delta0) && is_large_element(mesh.bounds(n1), curve, delta0) &&
        is_large_element(mesh.bounds(n2), curve, delta0)) {
        pattern_result r;
        r.identity = true;
        return r;
    }

    int s1 = facing_side(mesh, k, n1);
    int s2 = facing_side(mesh, k, n2);
    if (s1 < 0 || s2 < 0) throw pattern_mismatch("pattern 1/2: inputs are not neighbors of the middle");
    int ca = tk.cuts[0].side, cb = tk.cuts[1].side;
    if (!((s1 == ca && s2 == cb) || (s1 == cb && s2 == ca)))
        throw pattern_mismatch("pattern 1/2: neighbors are not across the cut sides");

    ibox bk = box_of(mesh, k);
    icoord cw = bk.w(), chh = bk.h();
    // diagonal cell across the cut corner
    int dx = (s1 == 1 || s2 == 1) ? +1 : -1; // one of s1,s2 is horizontal-facing
    int dy = (s1 == 2 || s2 == 2) ? +1 : -1;
    ibox bd{bk.x0 + dx * cw, bk.y0 + dy * chh, bk.x1 + dx * cw, bk.y1 + dy * chh};
    long d = find_exact_leaf(mesh, bd);
    if (d < 0 || cls.is_cut(d)) throw pattern_mismatch("pattern 1/2: diagonal cell missing or cut");

    ibox b1 = box_of(mesh, n1), b2 = box_of(mesh, n2);
    ibox base{std::min({bk.x0, b1.x0, b2.x0, bd.x0}), std::min({bk.y0, b1.y0, b2.y0, bd.y0}),
              std::max({bk.x1, b1.x1, b2.x1, bd.x1}), std::max({bk.y1, b1.y1, b2.y1, bd.y1})};
    if (base.w() != 2 * cw || base.h() != 2 * chh)
        throw pattern_mismatch("pattern 1/2: cells do not form a 2x2 block");

    rect base_r = to_rect(mesh, base);
    double tol = 1e-9 * base_r.diameter();
    auto far_of = [&](const cut_topology& t, long nid) {
        int shared = facing_side(mesh, nid, k); // side of the neighbor facing K
        const crossing& c = t.cuts[t.cuts[0].side == shared ? 1 : 0];
        if (c.side == shared) throw pattern_mismatch("pattern 1/2: neighbor crossing data inconsistent");
        return locate_on_base(base_r, c.point, tol);
    };
    far_cross f1 = far_of(t1, n1), f2 = far_of(t2, n2);

    auto axis_size = [&](int base_side) { return base_side % 2 == 0 ? base_r.width() / 2 : base_r.height() / 2; };
    bool ok1 = f1.e >= 2.0 * delta0 * axis_size(f1.base_side);
    bool ok2 = f2.e >= 2.0 * delta0 * axis_size(f2.base_side);

    std::vector<long> absorbed{n1, k, n2, d};
    if (ok1 && ok2) return finish(mesh, curve, delta0, base, absorbed, 1);

    auto [ax1, sg1] = extension_axis(f1.base_side, f1.toward_end);
    auto [ax2, sg2] = extension_axis(f2.base_side, f2.toward_end);
    if (!ok1 && ok2) {
        auto ext = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(base, cw, chh, ax1, sg1), absorbed, 3);
    }
    if (ok1 && !ok2) {
        auto ext = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(base, cw, chh, ax2, sg2), absorbed, 2);
    }
    // both deficient: both layers plus the shared corner cell
    if (ax1 == ax2) throw pattern_mismatch("pattern 1/2: extension directions degenerate");
    auto e1 = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
    auto e2 = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
    ibox g1 = grow(base, cw, chh, ax1, sg1);
    ibox g2 = grow(g1, cw, chh, ax2, sg2);
    icoord cx0 = ax1 == 0 ? (sg1 > 0 ? base.x1 : base.x0 - cw) : (sg2 > 0 ? base.x1 : base.x0 - cw);
    icoord cy0 = ax1 == 1 ? (sg1 > 0 ? base.y1 : base.y0 - chh) : (sg2 > 0 ? base.y1 : base.y0 - chh);
    long corner = find_exact_leaf(mesh, {cx0, cy0, cx0 + cw, cy0 + chh});
    if (corner < 0 || cls.is_cut(corner))
        throw pattern_mismatch("pattern 1/2: corner extension cell missing or cut");
    absorbed.insert(absorbed.end(), e1.begin(), e1.end());
    absorbed.insert(absorbed.end(), e2.begin(), e2.end());
    absorbed.push_back(corner);
    return finish(mesh, curve, delta0, g2, absorbed, 4);
}

// patterns 3 and 4: collinear runs (2 or 3 cells) extended along the row axis
pattern_result row_pattern(int kind, const std::vector<long>& cells, const cartesian_mesh& mesh,
                           const interface_curve& curve, const leaf_classification& cls, double delta0) {
    int lev = mesh.level(cells[0]);
    for (long c : cells)
        if (mesh.level(c) != lev) throw pattern_mismatch("pattern 3/4: input sizes differ");

    if (kind == 3) {
        if (cls.topo.at(cells[0]).type != cell_type::T1 || cls.topo.at(cells[1]).type != cell_type::T1)
            throw pattern_mismatch("pattern 3: both cells must be corner-cut");
    } else {
        if (cls.topo.at(cells[0]).type != cell_type::T1 || cls.topo.at(cells[2]).type != cell_type::T1 ||
            !is_pass(cls.topo.at(cells[1]).type))
            throw pattern_mismatch("pattern 4: need corner-pass-corner");
    }

    bool all_large = true;
    for (long c : cells) all_large = all_large && is_large_element(mesh.bounds(c), curve, delta0);
    if (all_large) {
        pattern_result r;
        r.identity = true;
        return r;
    }

    ibox b0 = box_of(mesh, cells[0]);
    icoord cw = b0.w(), chh = b0.h();
    ibox base = b0;
    for (long c : cells) {
        ibox b = box_of(mesh, c);
        base.x0 = std::min(base.x0, b.x0);
        base.y0 = std::min(base.y0, b.y0);
        base.x1 = std::max(base.x1, b.x1);
        base.y1 = std::max(base.y1, b.y1);
    }
    icoord n = icoord(cells.size());
    bool horizontal;
    if (base.w() == n * cw && base.h() == chh) horizontal = true;
    else if (base.w() == cw && base.h() == n * chh) horizontal = false;
    else throw pattern_mismatch("pattern 3/4: cells are not collinear");
    (void)horizontal;

    rect base_r = to_rect(mesh, base);
    double tol = 1e-9 * base_r.diameter();

    // far crossings of the two outer corner-cut cells
    long left = cells.front(), right = cells.back();
    long mid_for_left = cells[1], mid_for_right = cells[cells.size() - 2];
    auto far_of = [&](long cell, long toward) {
        int shared = facing_side(mesh, cell, toward);
        if (shared < 0) throw pattern_mismatch("pattern 3/4: inputs are not consecutive neighbors");
        const cut_topology& t = cls.topo.at(cell);
        const crossing& c = t.cuts[t.cuts[0].side == shared ? 1 : 0];
        if (c.side == shared) throw pattern_mismatch("pattern 3/4: crossing data inconsistent");
        return locate_on_base(base_r, c.point, tol);
    };
    far_cross f1 = far_of(left, mid_for_left);
    far_cross f2 = far_of(right, mid_for_right);

    // crossings sit on the long sides of the row; the guard length is the cell
    // size along the row axis
    double h_axis = horizontal ? (base_r.width() / n) : (base_r.height() / n);

    double g2 = 2.0 * delta0 * h_axis, g3 = 3.0 * delta0 * h_axis, g4 = 4.0 * delta0 * h_axis;
    std::vector<long> absorbed(cells.begin(), cells.end());

    auto [ax1, sg1] = extension_axis(f1.base_side, f1.toward_end);
    auto [ax2, sg2] = extension_axis(f2.base_side, f2.toward_end);
    int row_axis = horizontal ? 0 : 1;
    if (ax1 != row_axis || ax2 != row_axis || sg1 == sg2)
        throw pattern_mismatch("pattern 3/4: crossings not at opposite row ends");

    if (kind == 3) {
        if (f1.e >= g2 && f2.e >= g2) return finish(mesh, curve, delta0, base, absorbed, 1);
        if (f1.e >= g3) {
            auto ext = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
            absorbed.insert(absorbed.end(), ext.begin(), ext.end());
            return finish(mesh, curve, delta0, grow(base, cw, chh, ax2, sg2), absorbed, 2);
        }
        if (f2.e >= g3) {
            auto ext = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
            absorbed.insert(absorbed.end(), ext.begin(), ext.end());
            return finish(mesh, curve, delta0, grow(base, cw, chh, ax1, sg1), absorbed, 3);
        }
        auto e1 = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
        auto e2 = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
        absorbed.insert(absorbed.end(), e1.begin(), e1.end());
        absorbed.insert(absorbed.end(), e2.begin(), e2.end());
        return finish(mesh, curve, delta0, grow(grow(base, cw, chh, ax1, sg1), cw, chh, ax2, sg2), absorbed, 4);
    }
    // kind 4
    if (f1.e >= g3 && f2.e >= g3) return finish(mesh, curve, delta0, base, absorbed, 1);
    if (f2.e >= g4) {
        auto ext = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(base, cw, chh, ax1, sg1), absorbed, 2);
    }
    if (f1.e >= g4) {
        auto ext = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(base, cw, chh, ax2, sg2), absorbed, 3);
    }
    auto e1 = extension_layer(mesh, cls, base, cw, chh, ax1, sg1);
    auto e2 = extension_layer(mesh, cls, base, cw, chh, ax2, sg2);
    absorbed.insert(absorbed.end(), e1.begin(), e1.end());
    absorbed.insert(absorbed.end(), e2.begin(), e2.end());
    return finish(mesh, curve, delta0, grow(grow(base, cw, chh, ax1, sg1), cw, chh, ax2, sg2), absorbed, 4);
}

pattern_result lone_pattern(const std::vector<long>& cells, const cartesian_mesh& mesh,
                            const interface_curve& curve, const leaf_classification& cls, double delta0) {
    long k = cells[0];
    const cut_topology& t = cls.topo.at(k);
    if (!is_pass(t.type)) throw pattern_mismatch("pattern 5: element is not a pass element");
    rect b = mesh.bounds(k);
    if (is_large_element(b, curve, delta0)) {
        pattern_result r;
        r.identity = true;
        return r;
    }
    ibox bk = box_of(mesh, k);
    icoord cw = bk.w(), chh = bk.h();
    // lateral axis: along the crossed sides
    int lateral = (t.cuts[0].side % 2 == 0) ? 0 : 1; // crossings on bottom/top -> lateral x
    double h_lat = lateral == 0 ? b.width() : b.height();
    auto minus_dist = [&](const crossing& c) {
        return lateral == 0 ? (c.point.x - b.x0) : (c.point.y - b.y0);
    };
    double e1 = minus_dist(t.cuts[0]);
    double e2 = minus_dist(t.cuts[1]);
    std::vector<long> absorbed{k};
    if (e1 < (1.0 - 2.0 * delta0) * h_lat && e2 < (1.0 - 2.0 * delta0) * h_lat) {
        auto ext = extension_layer(mesh, cls, bk, cw, chh, lateral, -1);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(bk, cw, chh, lateral, -1), absorbed, 1);
    }
    if (e1 >= 2.0 * delta0 * h_lat && e2 >= 2.0 * delta0 * h_lat) {
        auto ext = extension_layer(mesh, cls, bk, cw, chh, lateral, +1);
        absorbed.insert(absorbed.end(), ext.begin(), ext.end());
        return finish(mesh, curve, delta0, grow(bk, cw, chh, lateral, +1), absorbed, 2);
    }
    auto em = extension_layer(mesh, cls, bk, cw, chh, lateral, -1);
    auto ep = extension_layer(mesh, cls, bk, cw, chh, lateral, +1);
    absorbed.insert(absorbed.end(), em.begin(), em.end());
    absorbed.insert(absorbed.end(), ep.begin(), ep.end());
    return finish(mesh, curve, delta0, grow(grow(bk, cw, chh, lateral, -1), cw, chh, lateral, +1), absorbed, 3);
}

} // namespace

pattern_result apply_pattern(int kind, const std::vector<long>& cells, const cartesian_mesh& mesh,
                             const interface_curve& curve, const leaf_classification& cls, double delta0) {
    static const double max_delta0[6] = {0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0, 1.0 / 3.0};
    if (kind < 1 || kind > 5) throw std::invalid_argument("apply_pattern: kind must be 1..5");
    if (!(delta0 > 0.0 && delta0 <= max_delta0[kind] + 1e-12))
        throw delta_out_of_range("apply_pattern: delta0 outside the validity range of pattern " +
                                 std::to_string(kind));
    size_t need = (kind == 3) ? 2 : (kind == 5 ? 1 : 3);
    if (cells.size() != need) throw pattern_mismatch("apply_pattern: wrong number of input cells");
    for (long c : cells)
        if (!cls.is_cut(c)) throw pattern_mismatch("apply_pattern: input cell is not an interface element");

    switch (kind) {
    case 1:
    case 2: return elbow_pattern(kind, cells, mesh, curve, cls, delta0);
    case 3:
    case 4: return row_pattern(kind, cells, mesh, curve, cls, delta0);
    default: return lone_pattern(cells, mesh, curve, cls, delta0);
    }
}

} // namespace cutfem
