#pragma once

#include "cutfem/gauss_lobatto.hpp"

#include <Eigen/Dense>

namespace cutfem {

// Analytic one-interface-element setup on K = (-2,2)^2 cut by the
// cubic-perturbed chord family (see cubic_chord_curve): chord across the
// corner A = (-2,-2) with half-length L = 1/(mu^2+1), perturbation
// w(u) = 100 (u^3 - L^2 u). All geometry is closed-form, so mass and
// stiffness matrices can be assembled at any floating-point precision; the
// conditioning studies instantiate Real = long double.
template <typename Real> struct one_element_matrices {
    int p = 1;
    Real L = 0, delta = 0, eta = 0, theta = 0;
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> mass;      // 2n x 2n, block diag
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> stiffness; // 2n x 2n
};

namespace one_elem_detail {

template <typename Real> std::vector<std::pair<Real, Real>> gauss_t(int n) {
    std::vector<std::pair<Real, Real>> rule(n);
    for (int k = 0; k < n; ++k) {
        Real x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        Real dp = 1;
        for (int it = 0; it < 200; ++it) {
            Real pm = 1, pc = x;
            for (int d = 2; d <= n; ++d) {
                Real pn = ((2 * d - 1) * x * pc - (d - 1) * pm) / d;
                pm = pc;
                pc = pn;
            }
            Real p1 = (n == 1) ? x : pc;
            dp = n * (x * p1 - pm) / (x * x - 1);
            Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < std::numeric_limits<Real>::epsilon() * 2) break;
        }
        rule[k] = {x, Real(2) / ((1 - x * x) * dp * dp)};
    }
    std::sort(rule.begin(), rule.end());
    return rule;
}

template <typename Real> struct vec2t {
    Real x = 0, y = 0;
};

template <typename Real> struct frame {
    // chord frame: origin at the chord midpoint, that = (1,-1)/sqrt2,
    // nhat = (1,1)/sqrt2 (into the square)
    Real L, delta;
    Real mx, my; // chord midpoint

    explicit frame(Real mu) {
        L = Real(1) / (mu * mu + 1);
        delta = Real(200) * L * L * L / (Real(3) * std::sqrt(Real(3)));
        Real s2L = std::sqrt(Real(2)) * L;
        mx = Real(-2) + s2L / 2;
        my = Real(-2) + s2L / 2;
    }
    Real w(Real u) const { return Real(100) * (u * u * u - L * L * u); }
    Real dw(Real u) const { return Real(100) * (3 * u * u - L * L); }
    vec2t<Real> to_xy(Real u, Real wv) const {
        Real s = std::sqrt(Real(2));
        return {mx + (u + wv) / s, my + (-u + wv) / s};
    }
    // (u,w) coordinates of a physical point
    std::pair<Real, Real> to_uw(Real x, Real y) const {
        Real s = std::sqrt(Real(2));
        Real dx = x - mx, dy = y - my;
        return {(dx - dy) / s, (dx + dy) / s};
    }
};

template <typename Real> using mat_t = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real> using vecx_t = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real> struct qnode {
    Real x, y, w;
};

// tensor basis helper: values/gradients of the GL Lagrange tensor seed at a
// physical point of K = (-2,2)^2 (reference = x/2)
template <typename Real> struct seed_basis {
    int p;
    lagrange_1d<Real> line;
    explicit seed_basis(int p_) : p(p_), line(gauss_lobatto_nodes<Real>(p_)) {}
    int n() const { return (p + 1) * (p + 1); }
    void values(Real x, Real y, vecx_t<Real>& out) const {
        std::vector<Real> lx, ly;
        line.values(x / 2, lx);
        line.values(y / 2, ly);
        out.resize(n());
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= p; ++j) out[i * (p + 1) + j] = lx[i] * ly[j];
    }
    void gradients(Real x, Real y, mat_t<Real>& out) const {
        std::vector<Real> lx, ly, dx, dy;
        line.values(x / 2, lx);
        line.values(y / 2, ly);
        line.derivatives(x / 2, dx);
        line.derivatives(y / 2, dy);
        out.resize(n(), 2);
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= p; ++j) {
                out(i * (p + 1) + j, 0) = dx[i] * ly[j] / 2;
                out(i * (p + 1) + j, 1) = lx[i] * dy[j] / 2;
            }
    }
};

// triangle quadrature via Duffy collapse, exact for total degree q
template <typename Real>
void add_triangle(std::vector<qnode<Real>>& out, vec2t<Real> a, vec2t<Real> b, vec2t<Real> c, int q) {
    auto gu = gauss_t<Real>(std::max(1, (q + 3) / 2));
    auto gv = gauss_t<Real>(std::max(1, (q + 2) / 2));
    Real A2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    for (auto [xu, wu] : gu) {
        Real u = (xu + 1) / 2;
        for (auto [xv, wv] : gv) {
            Real v = (xv + 1) / 2;
            Real x = a.x + u * (b.x - a.x) + u * v * (c.x - b.x);
            Real y = a.y + u * (b.y - a.y) + u * v * (c.y - b.y);
            out.push_back({x, y, wu * wv * A2 * u / 4});
        }
    }
}

} // namespace one_elem_detail

// Assemble the single-element mass and LDG stiffness matrices (a == 1) for
// the cubic-chord family at parameter mu.
template <typename Real>
one_element_matrices<Real> build_one_element(Real mu, int p, Real alpha0 = Real(1)) {
    using namespace one_elem_detail;
    one_element_matrices<Real> out;
    out.p = p;
    frame<Real> fr(mu);
    out.L = fr.L;
    out.delta = fr.delta;
    out.eta = fr.delta / fr.L; // dist(A, chord) = L exactly; the far side is much deeper
    {
        Real s = (1 + 3 * out.eta) / (1 - out.eta);
        out.theta = std::pow(s + std::sqrt(s * s - 1), Real(4 * p + 3));
    }
    const Real L = fr.L;
    const Real s2 = std::sqrt(Real(2));
    seed_basis<Real> seed(p);
    const int n = seed.n();

    // ---- quadrature over K_1 (corner side, the graph region) and K_2 ----
    // K_1 = {(u,w): |u| <= L, |u| - L <= w <= w(u)} in the chord frame
    std::vector<qnode<Real>> q1, q2;
    {
        int nu = 4 * p + 10, nw = p + 4;
        auto gu = gauss_t<Real>(nu);
        auto gw = gauss_t<Real>(nw);
        for (int panel = 0; panel < 2; ++panel) {
            Real ua = panel == 0 ? -L : Real(0);
            Real ub = panel == 0 ? Real(0) : L;
            for (auto [xu, wu] : gu) {
                Real u = ua + (xu + 1) / 2 * (ub - ua);
                Real lo = std::abs(u) - L, hi = fr.w(u);
                for (auto [xw, ww] : gw) {
                    Real wv = lo + (xw + 1) / 2 * (hi - lo);
                    auto pt = fr.to_xy(u, wv);
                    Real wgt = wu * ww * (ub - ua) * (hi - lo) / 4;
                    q1.push_back({pt.x, pt.y, wgt});
                }
            }
        }
        // K_2 rule: full square tensor rule minus the K_1 rule
        auto g = gauss_t<Real>(2 * p + 6);
        for (auto [xx, wx] : g)
            for (auto [yy, wy] : g) q2.push_back({2 * xx, 2 * yy, 4 * wx * wy});
        for (const auto& qn : q1) q2.push_back({qn.x, qn.y, -qn.w});
    }

    // ---- orthonormal bases on the shrunk polygons (MGS against exact rules) ----
    // side 1: triangle A, E' = (-L+delta on the legs...), in chord coords the
    // clip is w <= -delta: triangle with vertices A=(0,-L), (-(L-delta),-delta),
    // ((L-delta),-delta)
    std::vector<qnode<Real>> s1, s2adj;
    {
        int q = 4 * p + 2;
        vec2t<Real> A = fr.to_xy(0, -L);
        vec2t<Real> E1 = fr.to_xy(-(L - fr.delta), -fr.delta);
        vec2t<Real> F1 = fr.to_xy(L - fr.delta, -fr.delta);
        add_triangle(s1, A, E1, F1, q);
        // side 2: pentagon F'', B, C, D, E'' (clip of the square at w >= delta)
        Real t = s2 * (L + fr.delta);
        vec2t<Real> F2{Real(-2) + t, Real(-2)};
        vec2t<Real> B{Real(2), Real(-2)};
        vec2t<Real> C{Real(2), Real(2)};
        vec2t<Real> D{Real(-2), Real(2)};
        vec2t<Real> E2{Real(-2), Real(-2) + t};
        add_triangle(s2adj, F2, B, C, q);
        add_triangle(s2adj, F2, C, D, q);
        add_triangle(s2adj, F2, D, E2, q);
    }
    auto orthonormalize = [&](const std::vector<qnode<Real>>& rule) {
        mat_t<Real> U(rule.size(), n);
        vecx_t<Real> wq(rule.size()), vals;
        for (size_t k = 0; k < rule.size(); ++k) {
            seed.values(rule[k].x, rule[k].y, vals);
            U.row(k) = vals.transpose();
            wq[k] = rule[k].w;
        }
        mat_t<Real> C = mat_t<Real>::Identity(n, n);
        for (int j = 0; j < n; ++j) {
            for (int pass = 0; pass < 2; ++pass)
                for (int k = 0; k < j; ++k) {
                    Real r = (wq.array() * U.col(k).array() * U.col(j).array()).sum();
                    U.col(j) -= r * U.col(k);
                    C.col(j) -= r * C.col(k);
                }
            Real nrm = std::sqrt((wq.array() * U.col(j).array().square()).sum());
            U.col(j) /= nrm;
            C.col(j) /= nrm;
        }
        return C;
    };
    mat_t<Real> C1 = orthonormalize(s1);
    mat_t<Real> C2 = orthonormalize(s2adj);
    Real scale = std::pow(Real(p), Real(-1.5));

    // field helpers: values/gradients of the 2n local dofs at a point
    auto field_values = [&](int side, Real x, Real y, vecx_t<Real>& out) {
        vecx_t<Real> sv;
        seed.values(x, y, sv);
        out = vecx_t<Real>::Zero(2 * n);
        const mat_t<Real>& C = side == 0 ? C1 : C2;
        out.segment(side * n, n) = scale * (C.transpose() * sv);
    };
    auto field_grads = [&](int side, Real x, Real y, mat_t<Real>& out) {
        mat_t<Real> sg;
        seed.gradients(x, y, sg);
        out = mat_t<Real>::Zero(2 * n, 2);
        const mat_t<Real>& C = side == 0 ? C1 : C2;
        out.block(side * n, 0, n, 1) = scale * (C.transpose() * sg.col(0));
        out.block(side * n, 1, n, 1) = scale * (C.transpose() * sg.col(1));
    };

    // ---- mass matrix ----
    mat_t<Real> M = mat_t<Real>::Zero(2 * n, 2 * n);
    {
        vecx_t<Real> v;
        for (const auto& qn : q1) {
            field_values(0, qn.x, qn.y, v);
            M.topLeftCorner(n, n).noalias() += qn.w * v.head(n) * v.head(n).transpose();
        }
        for (const auto& qn : q2) {
            field_values(1, qn.x, qn.y, v);
            M.bottomRightCorner(n, n).noalias() += qn.w * v.tail(n) * v.tail(n).transpose();
        }
    }
    out.mass = M;

    // ---- stiffness matrix ----
    // faces: the interface arc plus the four boundary sides (split at the
    // crossings E, F); alpha = alpha0 * Theta * p^2 / h_K on every face
    Real hK = 4 * s2;
    Real al = alpha0 * out.theta * Real(p) * Real(p) / hK;
    Real htan = hK / (Real(p) * Real(p));

    mat_t<Real> Bx = mat_t<Real>::Zero(2 * n, 2 * n), By = Bx;
    mat_t<Real> J = mat_t<Real>::Zero(2 * n, 2 * n); // penalty terms

    vecx_t<Real> v1, v2, wtr;
    mat_t<Real> g1, g2;

    // interface arc: gamma(u) = (u, w(u)); normal out of side 1 (corner side):
    // side 1 is w < w(u), so the outward normal points toward +w-ish
    {
        auto gu = gauss_t<Real>(4 * p + 24);
        for (int panel = 0; panel < 2; ++panel) {
            Real ua = panel == 0 ? -L : Real(0);
            Real ub = panel == 0 ? Real(0) : L;
            for (auto [xu, wu] : gu) {
                Real u = ua + (xu + 1) / 2 * (ub - ua);
                Real wv = fr.w(u), dwv = fr.dw(u);
                auto pt = fr.to_xy(u, wv);
                Real speed = std::sqrt(1 + dwv * dwv);
                Real wgt = wu * (ub - ua) / 2 * speed;
                // tangent (1, w') normalized in the chord frame -> physical
                Real tx = (1 + dwv) / (s2 * speed), ty = (-1 + dwv) / (s2 * speed);
                Real nx = -ty, ny = tx; // rotate +90: points toward +w (out of side 1)
                field_values(0, pt.x, pt.y, v1);
                field_values(1, pt.x, pt.y, v2);
                vecx_t<Real> jump = v1 - v2;
                // lifting moments: w^- is the side-1 trace
                Bx.noalias() += wgt * nx * v1 * jump.transpose();
                By.noalias() += wgt * ny * v1 * jump.transpose();
                J.noalias() += (al * wgt) * jump * jump.transpose();
                field_grads(0, pt.x, pt.y, g1);
                field_grads(1, pt.x, pt.y, g2);
                vecx_t<Real> gt = (g1.col(0) - g2.col(0)) * tx + (g1.col(1) - g2.col(1)) * ty;
                J.noalias() += (htan * wgt) * gt * gt.transpose();
            }
        }
    }
    // boundary pieces: (side index, endpoints, outward normal, field side)
    {
        Real c = s2 * L; // leg length of the corner cut
        struct piece {
            Real ax, ay, bx, by, nx, ny;
            int side;
        };
        std::vector<piece> pieces = {
            {-2, -2, -2 + c, -2, 0, -1, 0},      // bottom, corner part (side 1)
            {-2 + c, -2, 2, -2, 0, -1, 1},       // bottom, rest (side 2)
            {2, -2, 2, 2, 1, 0, 1},              // right
            {2, 2, -2, 2, 0, 1, 1},              // top
            {-2, 2, -2, -2 + c, -1, 0, 1},       // left, upper part (side 2)
            {-2, -2 + c, -2, -2, -1, 0, 0},      // left, corner part (side 1)
        };
        auto g = gauss_t<Real>(2 * p + 6);
        for (const auto& pc : pieces) {
            Real len = std::hypot(pc.bx - pc.ax, pc.by - pc.ay);
            if (len <= 0) continue;
            for (auto [xq, wq] : g) {
                Real t = (xq + 1) / 2;
                Real x = pc.ax + t * (pc.bx - pc.ax), y = pc.ay + t * (pc.by - pc.ay);
                Real wgt = wq * len / 2;
                field_values(pc.side, x, y, wtr);
                Bx.noalias() += wgt * pc.nx * wtr * wtr.transpose();
                By.noalias() += wgt * pc.ny * wtr * wtr.transpose();
                J.noalias() += (al * wgt) * wtr * wtr.transpose();
            }
        }
    }

    // derivative expansion within each field: conjugate the seed differentiation
    mat_t<Real> Dx = mat_t<Real>::Zero(2 * n, 2 * n), Dy = Dx;
    {
        mat_t<Real> dx = mat_t<Real>::Zero(n, n), dy = dx;
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= p; ++j)
                for (int k = 0; k <= p; ++k) {
                    dx(k * (p + 1) + j, i * (p + 1) + j) = seed.line.diff_matrix(k, i) / 2;
                    dy(i * (p + 1) + k, i * (p + 1) + j) = seed.line.diff_matrix(k, j) / 2;
                }
        for (int side = 0; side < 2; ++side) {
            const mat_t<Real>& C = side == 0 ? C1 : C2;
            mat_t<Real> Cinv = C.inverse();
            Dx.block(side * n, side * n, n, n) = Cinv * dx * C;
            Dy.block(side * n, side * n, n, n) = Cinv * dy * C;
        }
    }

    Eigen::LDLT<mat_t<Real>> Mldlt(M);
    mat_t<Real> Sx = Dx - Mldlt.solve(Bx);
    mat_t<Real> Sy = Dy - Mldlt.solve(By);
    out.stiffness = Sx.transpose() * (M * Sx) + Sy.transpose() * (M * Sy) + J;
    return out;
}

} // namespace cutfem
