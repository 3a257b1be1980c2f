#include "cutfem/cut_rules.hpp"

namespace cutfem {

namespace {

double wrap_param(const interface_curve& curve, double t) {
    if (!curve.closed()) return t;
    double T = curve.period();
    double s = std::fmod(t - curve.t_min(), T);
    if (s < 0) s += T;
    return curve.t_min() + s;
}

} // namespace

quad_rule cut_region_rule(const interface_curve& curve, const cut_geometry& g, int side, int q) {
    if (side != 0 && side != 1) throw std::invalid_argument("cut_region_rule: side is 0 or 1");
    quad_rule r = polygon_rule(g.poly[side], q);
    r.exactness = q;

    vec2 dir = normalized(g.p2 - g.p1);
    vec2 nch = rot90(dir);
    // sign of the sliver correction for this side: +1 when the side lies to
    // the right of the directed chord (see the derivation in the docs)
    double sgn = dot(g.far_vertex[side] - g.p1, nch) < 0 ? +1.0 : -1.0;

    if (g.delta <= 1e-15 * g.cell.diameter()) return r; // straight cut: empty sliver

    const int panels = 4;
    int nt = std::max(q + 6, 12);
    int nxi = std::max((q + 3) / 2 + 1, 3);
    const auto& gt = gauss_legendre(nt);
    const auto& gxi = gauss_legendre(nxi);
    double span = g.topo.t_out - g.topo.t_in;
    for (int pan = 0; pan < panels; ++pan) {
        double ta = g.topo.t_in + span * pan / panels;
        double tb = g.topo.t_in + span * (pan + 1) / panels;
        for (auto [xt, wt] : gt) {
            double t = ta + 0.5 * (xt + 1.0) * (tb - ta);
            double tw = wrap_param(curve, t);
            vec2 gam = curve.eval(tw);
            vec2 dgam = curve.deriv(tw);
            double beta = dot(gam - g.p1, nch);
            vec2 qpt = gam - beta * nch;             // projection onto the chord line
            vec2 qprime = dgam - dot(dgam, nch) * nch; // tangential part
            vec2 d = beta * nch;
            vec2 dprime = dgam - qprime;
            for (auto [xxi, wxi] : gxi) {
                double xi = 0.5 * (xxi + 1.0);
                vec2 x = qpt + xi * d;
                double J = cross(qprime + xi * dprime, d);
                double w = 0.25 * (tb - ta) * wt * wxi * J * sgn;
                r.nodes.push_back({x, w});
            }
        }
    }
    return r;
}

quad_rule arc_rule(const interface_curve& curve, double t0, double t1, int q) {
    quad_rule r;
    r.exactness = q;
    const int panels = 3;
    int nt = std::max((q + 2) / 2 + 4, 8);
    const auto& gt = gauss_legendre(nt);
    double span = t1 - t0;
    // consistent normal orientation from the mid-parameter
    vec2 nref = curve.normal_out1(wrap_param(curve, t0 + 0.5 * span));
    for (int pan = 0; pan < panels; ++pan) {
        double ta = t0 + span * pan / panels;
        double tb = t0 + span * (pan + 1) / panels;
        for (auto [xt, wt] : gt) {
            double t = wrap_param(curve, ta + 0.5 * (xt + 1.0) * (tb - ta));
            vec2 dgam = curve.deriv(t);
            double speed = norm(dgam);
            vec2 tan = dgam / speed;
            vec2 n = rot90(tan);
            if (dot(n, nref) < 0) n = vec2{-n.x, -n.y};
            r.nodes.push_back({curve.eval(t), 0.5 * (tb - ta) * wt * speed});
            r.tangent.push_back(tan);
            r.normal.push_back(n);
        }
    }
    return r;
}

} // namespace cutfem
