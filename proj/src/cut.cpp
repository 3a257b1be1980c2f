#include "cutfem/cut.hpp"

#include <algorithm>

namespace cutfem {

namespace {

bool rects_overlap(const rect& a, const rect& b) {
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

double refine_root(const interface_curve& curve, const vec2& a, const vec2& b, double s0, double s1) {
    auto g = [&](double s) { return curve.level(a + s * (b - a)); };
    double g0 = g(s0), g1 = g(s1);
    for (int it = 0; it < 90; ++it) {
        double sm = 0.5 * (s0 + s1);
        double gm = g(sm);
        if (gm == 0.0) return sm;
        if ((gm > 0) == (g0 > 0)) {
            s0 = sm;
            g0 = gm;
        } else {
            s1 = sm;
            g1 = gm;
        }
        if (s1 - s0 < 1e-15) break;
    }
    // secant polish inside the bracket
    double x0 = s0, x1 = s1, f0 = g0, f1 = g1;
    for (int it = 0; it < 8; ++it) {
        if (f1 == f0) break;
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (x2 < s0 || x2 > s1) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = g(x2);
        if (f1 == 0.0) break;
    }
    return x1;
}

} // namespace

std::vector<std::pair<double, double>> segment_crossings(const interface_curve& curve, const vec2& a,
                                                         const vec2& b, double length_scale) {
    const int N = 64;
    std::vector<std::pair<double, double>> out;
    auto g = [&](double s) { return curve.level(a + s * (b - a)); };
    double prev = g(0.0);
    double prev_s = 0.0;
    for (int k = 1; k <= N; ++k) {
        double s = double(k) / N;
        double cur = g(s);
        if ((prev > 0 && cur < 0) || (prev < 0 && cur > 0)) {
            double root = refine_root(curve, a, b, prev_s, s);
            vec2 p = a + root * (b - a);
            out.push_back({root, curve.param_at(p)});
        } else if (cur == 0.0 && k < N) {
            // exact hit: treat as crossing if the sign flips around it
            double next = g(double(k + 1) / N);
            if ((prev > 0 && next < 0) || (prev < 0 && next > 0)) {
                vec2 p = a + s * (b - a);
                out.push_back({s, curve.param_at(p)});
            }
        }
        prev = cur;
        prev_s = s;
    }
    // merge near-duplicates (tangential threshold)
    std::sort(out.begin(), out.end());
    double L = dist(a, b);
    double tol = (length_scale > 0 ? 1e-9 * length_scale : 1e-12) / std::max(L, 1e-300);
    std::vector<std::pair<double, double>> merged;
    for (auto& r : out) {
        if (!merged.empty() && r.first - merged.back().first < tol)
            throw non_transversal_cut("segment_crossings: near-tangential double root");
        merged.push_back(r);
    }
    return merged;
}

cut_topology intersect_cell(const interface_curve& curve, const rect& cell, long element_id, double delta0) {
    if (cell.area() <= 0) throw std::invalid_argument("intersect_cell: empty cell");
    cut_topology topo;
    topo.element = element_id;

    double h = cell.diameter();
    rect cb = curve.bbox();
    if (!rects_overlap(cb, cell)) {
        topo.type = cell_type::UNCUT;
        topo.uncut_side = curve.side(cell.center());
        return topo;
    }

    struct raw_cross {
        int side;
        double s;
        vec2 point;
        double t;
    };
    std::vector<raw_cross> found;
    double snap = 1e-11;
    for (int s = 0; s < 4; ++s) {
        auto [a, b] = cell.side(s);
        for (auto [frac, t] : segment_crossings(curve, a, b, h)) {
            vec2 p = a + frac * (b - a);
            // crossing at a shared corner: snap and assign to the lower side index
            if (frac < snap || frac > 1.0 - snap) {
                vec2 corner = frac < snap ? a : b;
                bool dup = false;
                for (auto& rc : found)
                    if (dist(rc.point, corner) < 1e-9 * h) dup = true;
                if (dup) continue;
                p = corner;
            }
            found.push_back({s, frac, p, t});
        }
    }

    if (found.empty()) {
        // no boundary crossing: either clean or a component swallowed by the cell
        if (cb.x0 >= cell.x0 && cb.x1 <= cell.x1 && cb.y0 >= cell.y0 && cb.y1 <= cell.y1)
            throw non_transversal_cut("intersect_cell: interface component contained in cell");
        topo.type = cell_type::UNCUT;
        topo.uncut_side = curve.side(cell.center());
        return topo;
    }
    if (found.size() != 2)
        throw non_transversal_cut("intersect_cell: " + std::to_string(found.size()) +
                                  " boundary crossings (need exactly 2)");
    if (found[0].side == found[1].side)
        throw non_transversal_cut("intersect_cell: both crossings on one side");

    // order the two crossings along the curve so the arc between them is inside
    double t0 = found[0].t, t1 = found[1].t;
    int first = 0;
    double T = curve.period();
    auto arc_inside = [&](double ta, double tb) {
        double tm = 0.5 * (ta + tb);
        vec2 p = curve.eval(curve.closed() ? std::fmod(tm - curve.t_min(), T) + curve.t_min() : tm);
        double pad = 1e-9 * h;
        return p.x >= cell.x0 - pad && p.x <= cell.x1 + pad && p.y >= cell.y0 - pad && p.y <= cell.y1 + pad;
    };
    double tin, tout;
    if (!curve.closed()) {
        first = t0 <= t1 ? 0 : 1;
        tin = std::min(t0, t1);
        tout = std::max(t0, t1);
        if (!arc_inside(tin, tout))
            throw non_transversal_cut("intersect_cell: arc between crossings leaves the cell");
    } else {
        double ta = std::min(t0, t1), tb = std::max(t0, t1);
        if (arc_inside(ta, tb)) {
            first = t0 <= t1 ? 0 : 1;
            tin = ta;
            tout = tb;
        } else if (arc_inside(tb, ta + T)) {
            first = t0 <= t1 ? 1 : 0;
            tin = tb;
            tout = ta + T;
        } else {
            throw non_transversal_cut("intersect_cell: no in-cell arc between crossings");
        }
    }
    const raw_cross& c0 = found[first];
    const raw_cross& c1 = found[1 - first];
    topo.cuts[0] = {c0.side, c0.s, c0.point, tin};
    topo.cuts[1] = {c1.side, c1.s, c1.point, tout};
    topo.t_in = tin;
    topo.t_out = tout;

    int sa = topo.cuts[0].side, sb = topo.cuts[1].side;
    bool opposite = (sa % 2) == (sb % 2);
    if (!opposite) {
        topo.type = cell_type::T1;
    } else {
        topo.type = is_large_element(cell, curve, delta0) ? cell_type::T3 : cell_type::T2;
    }
    return topo;
}

double growth_factor(double eta, int p) {
    if (eta < 0.0 || eta >= 1.0) throw std::domain_error("growth_factor: eta must be in [0,1)");
    if (p < 1) throw std::domain_error("growth_factor: p >= 1 required");
    double s = (1.0 + 3.0 * eta) / (1.0 - eta);
    double T = s + std::sqrt(s * s - 1.0);
    return std::pow(T, 4.0 * p + 3.0);
}

std::array<double, 4> side_fractions_omega1(const rect& region, const interface_curve& curve) {
    std::array<double, 4> frac{};
    for (int s = 0; s < 4; ++s) {
        auto [a, b] = region.side(s);
        std::vector<double> bk{0.0, 1.0};
        for (auto [f, t] : segment_crossings(curve, a, b, region.diameter())) bk.push_back(f);
        std::sort(bk.begin(), bk.end());
        double len1 = 0.0;
        for (size_t k = 0; k + 1 < bk.size(); ++k) {
            double mid = 0.5 * (bk[k] + bk[k + 1]);
            if (curve.side(a + mid * (b - a)) == 1) len1 += bk[k + 1] - bk[k];
        }
        frac[s] = len1;
    }
    return frac;
}

bool is_large_element(const rect& region, const interface_curve& curve, double delta0) {
    if (!(delta0 > 0.0 && delta0 < 0.5)) throw std::domain_error("is_large_element: delta0 in (0, 1/2)");
    auto frac = side_fractions_omega1(region, curve);
    double tol = 1e-12;
    for (int s = 0; s < 4; ++s) {
        double f1 = frac[s], f2 = 1.0 - frac[s];
        if (f1 > tol && f1 < delta0 - tol) return false;
        if (f2 > tol && f2 < delta0 - tol) return false;
    }
    return true;
}

cut_geometry build_cut_geometry(const interface_curve& curve, const cut_topology& topo, const rect& cell,
                                int p) {
    if (!topo.is_cut()) throw std::invalid_argument("build_cut_geometry: topology is not an interface cut");
    cut_geometry g;
    g.element = topo.element;
    g.cell = cell;
    g.topo = topo;
    g.p1 = topo.cuts[0].point;
    g.p2 = topo.cuts[1].point;
    g.degree = p;

    double h = cell.diameter();
    if (dist(g.p1, g.p2) < 1e-12 * h) throw degenerate_chord("build_cut_geometry: chord collapses");

    vec2 dir = normalized(g.p2 - g.p1);
    vec2 nch = rot90(dir); // left normal of the directed chord

    auto [left, right] = split_rect_by_chord(cell, g.p1, g.p2);

    // Which chord side is Omega_1: compare the chord normal with the outward
    // Omega_1 normal at the arc midpoint (orientation only, robust when the
    // arc crosses its own chord).
    double tm = 0.5 * (topo.t_in + topo.t_out);
    if (curve.closed()) {
        double T = curve.period();
        tm = std::fmod(tm - curve.t_min(), T) + curve.t_min();
    }
    vec2 nout1 = curve.normal_out1(tm);
    bool left_is_side2 = dot(nout1, nch) > 0.0;
    g.poly[0] = left_is_side2 ? right : left;
    g.poly[1] = left_is_side2 ? left : right;
    if (g.poly[0].empty() || g.poly[1].empty())
        throw degenerate_chord("build_cut_geometry: chord does not split the cell");

    // deviation delta_K: max distance of the arc to the chord, adaptive
    // sampling with local polish until stable
    auto sdist = [&](double t) {
        double tt = t;
        if (curve.closed()) {
            double T = curve.period();
            tt = std::fmod(t - curve.t_min(), T) + curve.t_min();
        }
        return dot(curve.eval(tt) - g.p1, nch);
    };
    auto polish_extremum = [&](double ta, double tb, double tc) {
        // golden-section maximization of |sdist| restricted to the bracket
        double lo = ta, hi = tc;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = std::abs(sdist(x1)), f2 = std::abs(sdist(x2));
        for (int it = 0; it < 120 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = std::abs(sdist(x2));
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = std::abs(sdist(x1));
            }
        }
        return std::max(f1, f2);
    };
    int n = 2 * p + 16;
    double delta_prev = -1.0;
    for (int pass = 0; pass < 14; ++pass) {
        double best = 0.0;
        std::vector<double> d(n + 1);
        for (int k = 0; k <= n; ++k) d[k] = sdist(topo.t_in + (topo.t_out - topo.t_in) * k / n);
        for (int k = 1; k < n; ++k) {
            bool locmax = std::abs(d[k]) >= std::abs(d[k - 1]) && std::abs(d[k]) >= std::abs(d[k + 1]);
            if (locmax) {
                double ta = topo.t_in + (topo.t_out - topo.t_in) * (k - 1) / double(n);
                double tb = topo.t_in + (topo.t_out - topo.t_in) * k / double(n);
                double tc = topo.t_in + (topo.t_out - topo.t_in) * (k + 1) / double(n);
                best = std::max(best, polish_extremum(ta, tb, tc));
            }
        }
        if (delta_prev >= 0 && std::abs(best - delta_prev) <= 1e-12 * h) {
            g.delta = best;
            break;
        }
        delta_prev = best;
        g.delta = best;
        n *= 2;
    }

    // farthest vertices per side and the interface deviation
    for (int i = 0; i < 2; ++i) {
        g.far_dist[i] = -1.0;
        for (const vec2& c : cell.corners()) {
            if (curve.side(c) != i + 1) continue;
            double d = dist_point_segment(c, g.p1, g.p2);
            if (d > g.far_dist[i]) {
                g.far_dist[i] = d;
                g.far_vertex[i] = c;
            }
        }
        if (g.far_dist[i] <= 0.0)
            throw degenerate_chord("build_cut_geometry: no cell vertex on side " + std::to_string(i + 1));
        g.eta_side[i] = g.delta / g.far_dist[i];
    }
    g.eta = std::max(g.eta_side[0], g.eta_side[1]);

    // shrunk polygons: clip K_i^h by the chord shifted distance delta into side i
    for (int i = 0; i < 2; ++i) {
        vec2 ni = nch;
        // orient into polygon i: the farthest vertex lies on that side
        if (dot(g.far_vertex[i] - g.p1, nch) < 0) ni = vec2{-nch.x, -nch.y};
        double c = dot(ni, g.p1) + g.delta;
        g.shrunk[i] = clip_halfplane(g.poly[i], ni, c);
    }

    g.theta = g.eta < 1.0 ? growth_factor(g.eta, p) : std::numeric_limits<double>::infinity();
    return g;
}

} // namespace cutfem
