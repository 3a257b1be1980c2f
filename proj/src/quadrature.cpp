#include "cutfem/quadrature.hpp"

#include <map>
#include <mutex>

namespace cutfem {

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> rule(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double p1 = 0, dp = 0;
        for (int iter = 0; iter < 200; ++iter) {
            double pm = 1.0, pc = x;
            if (n == 1) { pc = x; pm = 1.0; }
            for (int d = 2; d <= n; ++d) {
                double pn = ((2 * d - 1) * x * pc - (d - 1) * pm) / d;
                pm = pc;
                pc = pn;
            }
            p1 = (n == 1) ? x : pc;
            dp = n * (x * p1 - pm) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule[k] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    std::sort(rule.begin(), rule.end());
    return cache.emplace(n, std::move(rule)).first->second;
}

quad_rule segment_rule(const vec2& a, const vec2& b, int q) {
    int n = std::max(1, (q + 2) / 2);
    const auto& g = gauss_legendre(n);
    quad_rule r;
    r.exactness = 2 * n - 1;
    double L = dist(a, b);
    vec2 t = (L > 0) ? normalized(b - a) : vec2{1, 0};
    vec2 nv = rot90(t);
    for (auto [x, w] : g) {
        double s = 0.5 * (x + 1.0);
        r.nodes.push_back({a + s * (b - a), 0.5 * L * w});
        r.tangent.push_back(t);
        r.normal.push_back(nv);
    }
    return r;
}

quad_rule rect_rule(const rect& rc, int q) {
    int n = std::max(1, (q + 2) / 2);
    const auto& g = gauss_legendre(n);
    quad_rule r;
    r.exactness = 2 * n - 1;
    for (auto [xi, wi] : g)
        for (auto [yj, wj] : g) {
            vec2 p{rc.x0 + 0.5 * (xi + 1.0) * rc.width(), rc.y0 + 0.5 * (yj + 1.0) * rc.height()};
            r.nodes.push_back({p, 0.25 * rc.area() * wi * wj});
        }
    return r;
}

quad_rule triangle_rule(const vec2& a, const vec2& b, const vec2& c, int q) {
    // Duffy transform of a tensor Gauss rule: (u,v) in [0,1]^2 -> a + u*(b-a) + u v*(c-b).
    // The Jacobian is linear in u, so one extra point in u keeps total degree q exact.
    int nu = std::max(1, (q + 3) / 2);
    int nv = std::max(1, (q + 2) / 2);
    const auto& gu = gauss_legendre(nu);
    const auto& gv = gauss_legendre(nv);
    double A2 = cross(b - a, c - a); // twice the signed area
    quad_rule r;
    r.exactness = q;
    for (auto [xu, wu] : gu) {
        double u = 0.5 * (xu + 1.0);
        for (auto [xv, wv] : gv) {
            double v = 0.5 * (xv + 1.0);
            vec2 p = a + u * (b - a) + (u * v) * (c - b);
            double w = 0.25 * wu * wv * A2 * u;
            r.nodes.push_back({p, w});
        }
    }
    return r;
}

quad_rule polygon_rule(const polygon& poly, int q, int anchor) {
    if (poly.v.size() < 3) throw degenerate_polygon("polygon_rule: fewer than 3 vertices");
    if (poly.area() <= 0) throw degenerate_polygon("polygon_rule: polygon not CCW or degenerate");
    quad_rule r;
    r.exactness = q;
    const vec2& a = poly.v[anchor % poly.v.size()];
    size_t m = poly.v.size();
    for (size_t k = 0; k < m; ++k) {
        size_t i = (anchor + k) % m;
        size_t j = (anchor + k + 1) % m;
        if (i == size_t(anchor % m) || j == size_t(anchor % m)) continue;
        quad_rule tri = triangle_rule(a, poly.v[i], poly.v[j], q);
        for (size_t t = 0; t < tri.nodes.size(); ++t) r.nodes.push_back(tri.nodes[t]);
    }
    return r;
}

} // namespace cutfem
