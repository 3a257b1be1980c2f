#include "cutfem/geom.hpp"

#include <algorithm>

namespace cutfem {

polygon clip_halfplane(const polygon& poly, const vec2& n, double c) {
    polygon out;
    size_t m = poly.v.size();
    if (m == 0) return out;
    for (size_t i = 0; i < m; ++i) {
        const vec2& a = poly.v[i];
        const vec2& b = poly.v[(i + 1) % m];
        double da = dot(n, a) - c;
        double db = dot(n, b) - c;
        if (da >= 0) out.v.push_back(a);
        if ((da > 0 && db < 0) || (da < 0 && db > 0)) {
            double t = da / (da - db);
            out.v.push_back(a + t * (b - a));
        }
    }
    // drop duplicate consecutive vertices
    polygon clean;
    for (const vec2& p : out.v) {
        if (clean.v.empty() || dist(clean.v.back(), p) > 1e-14) clean.v.push_back(p);
    }
    if (clean.v.size() >= 2 && dist(clean.v.front(), clean.v.back()) <= 1e-14) clean.v.pop_back();
    return clean;
}

std::pair<polygon, polygon> split_rect_by_chord(const rect& r, const vec2& p, const vec2& q) {
    if (dist(p, q) < 1e-14 * r.diameter())
        throw degenerate_chord("split_rect_by_chord: chord endpoints coincide");
    polygon full;
    for (const vec2& c : r.corners()) full.v.push_back(c);
    vec2 d = normalized(q - p);
    vec2 n = rot90(d); // left normal of p->q
    double c = dot(n, p);
    polygon left = clip_halfplane(full, n, c);
    polygon right = clip_halfplane(full, vec2{-n.x, -n.y}, -c);
    return {left, right};
}

double polygon_monomial_integral(const polygon& poly, int i, int j) {
    // integral over the polygon of x^i y^j via the divergence theorem with
    // F = (x^{i+1} y^j / (i+1), 0):  int = sum over edges of int F . n ds.
    double total = 0.0;
    size_t m = poly.v.size();
    for (size_t k = 0; k < m; ++k) {
        const vec2& a = poly.v[k];
        const vec2& b = poly.v[(k + 1) % m];
        // param edge (1-t) a + t b; outward normal * ds = (dy, -dx) dt
        double dy = b.y - a.y;
        if (dy == 0.0) continue;
        // integrate x(t)^{i+1} y(t)^j dy over t in [0,1] by Gauss of enough order
        int n = (i + j) / 2 + 2;
        // Gauss-Legendre nodes via Newton on the fly (small n); use fixed 16-pt rule cap
        static const int NG = 24;
        n = std::min(std::max(n, 2), NG);
        // nodes/weights for [0,1] computed once per n (tiny table cache)
        static thread_local std::vector<std::vector<std::pair<double, double>>> cache(NG + 1);
        auto& tab = cache[n];
        if (tab.empty()) {
            // Newton for Legendre roots on [-1,1]
            for (int kk = 0; kk < n; ++kk) {
                double x = std::cos(M_PI * (kk + 0.75) / (n + 0.5));
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1.0, p1 = x;
                    for (int d2 = 2; d2 <= n; ++d2) {
                        double p2 = ((2 * d2 - 1) * x * p1 - (d2 - 1) * p0) / d2;
                        p0 = p1;
                        p1 = p2;
                    }
                    double dp = n * (x * p1 - p0) / (x * x - 1.0);
                    double dx = p1 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16) break;
                }
                double p0 = 1.0, p1 = x;
                for (int d2 = 2; d2 <= n; ++d2) {
                    double p2 = ((2 * d2 - 1) * x * p1 - (d2 - 1) * p0) / d2;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1.0);
                double w = 2.0 / ((1.0 - x * x) * dp * dp);
                tab.push_back({0.5 * (x + 1.0), 0.5 * w});
            }
        }
        double acc = 0.0;
        for (auto [t, w] : tab) {
            double x = a.x + t * (b.x - a.x);
            double y = a.y + t * (b.y - a.y);
            acc += w * std::pow(x, i + 1) * std::pow(y, j);
        }
        total += acc * dy / (i + 1);
    }
    return total;
}

} // namespace cutfem
