#include "cutfem/assembly.hpp"

#include <Eigen/Cholesky>

namespace cutfem {

namespace {

// reference Gram of the tensor Gauss-Lobatto Lagrange basis (exact)
const Eigen::MatrixXd& reference_gram(int p) {
    static std::map<int, Eigen::MatrixXd> cache;
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const tensor_lagrange_basis& basis = shared_tensor_basis(p);
    quad_rule rule = rect_rule(rect{-1, -1, 1, 1}, 2 * p + 2);
    int n = basis.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd vals;
    for (const auto& node : rule.nodes) {
        basis.values(node.p, vals);
        M.noalias() += node.w * vals * vals.transpose();
    }
    return cache.emplace(p, std::move(M)).first->second;
}

} // namespace

ldg_system::ldg_system(const interface_problem& pb, const induced_mesh& im, double alpha0)
    : pb_(&pb), im_(&im), p_(im.degree), alpha0_(alpha0) {
    dofs_ = coefficient_map::build(im);
    faces_ = build_faces(im);
    spaces_.resize(im.elements.size());
    vol_rules_.resize(im.elements.size());
    int q = 2 * p_ + 2;
    for (const auto& e : im.elements) {
        spaces_[e.id] = std::make_unique<element_space>(e, p_);
        if (e.cut) {
            const interface_curve& curve = *im.interface.components[e.component];
            vol_rules_[e.id][0] = cut_region_rule(curve, *e.geom, 0, q);
            vol_rules_[e.id][1] = cut_region_rule(curve, *e.geom, 1, q);
        } else {
            vol_rules_[e.id][0] = rect_rule(e.bounds, q);
        }
    }
    build_face_rules();
}

const interface_curve* ldg_system::curve_of(long elem) const {
    const auto& e = im_->elements[elem];
    if (!e.cut) return nullptr;
    return im_->interface.components[e.component].get();
}

void ldg_system::build_face_rules() {
    face_rules_.resize(faces_.faces.size());
    int q = 2 * p_ + 2;
    for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
        const face& f = faces_.faces[fi];
        face_quad& fq = face_rules_[fi];
        if (f.kind == face::arc) {
            const interface_curve& curve = *im_->interface.components[f.component];
            fq.arc = arc_rule(curve, f.t0, f.t1, q);
            continue;
        }
        // split straight faces at interface crossings when an adjacent element is cut
        const interface_curve* curve = curve_of(f.minus);
        if (!curve && f.plus >= 0) curve = curve_of(f.plus);
        std::vector<double> breaks{0.0, 1.0};
        if (curve) {
            for (auto [s, t] : segment_crossings(*curve, f.a, f.b, f.length()))
                if (s > 1e-12 && s < 1.0 - 1e-12) breaks.push_back(s);
            std::sort(breaks.begin(), breaks.end());
        }
        for (size_t k = 0; k + 1 < breaks.size(); ++k) {
            vec2 a = f.a + breaks[k] * (f.b - f.a);
            vec2 b = f.a + breaks[k + 1] * (f.b - f.a);
            face_quad::piece pc;
            pc.rule = segment_rule(a, b, q);
            vec2 mid = 0.5 * (a + b);
            pc.side = im_->interface.empty() ? 2 : im_->interface.side(mid);
            fq.pieces.push_back(std::move(pc));
        }
    }
}

double ldg_system::alpha(size_t fi) const { return face_alpha(*im_, faces_, fi, pb_->a1, pb_->a2, alpha0_); }

void ldg_system::trace_values(long elem, const vec2& x, int sub, Eigen::VectorXd& out) const {
    const element_space& sp = *spaces_[elem];
    sp.values(x, sp.cut() ? sub - 1 : 0, out);
}

void ldg_system::trace_gradients(long elem, const vec2& x, int sub, Eigen::MatrixX2d& out) const {
    const element_space& sp = *spaces_[elem];
    sp.gradients(x, sp.cut() ? sub - 1 : 0, out);
}

Eigen::MatrixXd ldg_system::mass_weighted(long elem, bool with_a) const {
    const auto& e = im_->elements[elem];
    const element_space& sp = *spaces_[elem];
    int nd = sp.ndof();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nd, nd);
    if (!e.cut) {
        double scale = e.bounds.area() / 4.0;
        if (with_a) scale *= pb_->coeff(e.subdomain);
        M = scale * reference_gram(p_);
        return M;
    }
    Eigen::VectorXd vals;
    for (int side = 0; side < 2; ++side) {
        double a = with_a ? pb_->coeff(side + 1) : 1.0;
        for (const auto& node : vol_rules_[elem][side].nodes) {
            sp.values(node.p, side, vals);
            int off = sp.side_offset(side), n = sp.block();
            M.block(off, off, n, n).noalias() += (a * node.w) * vals.segment(off, n) * vals.segment(off, n).transpose();
        }
    }
    return M;
}

Eigen::MatrixXd ldg_system::element_mass(long elem) const { return mass_weighted(elem, false); }

namespace {

struct star_map {
    std::vector<long> elems;
    std::vector<int> col0;
    int total = 0;

    int of(long elem) const {
        for (size_t k = 0; k < elems.size(); ++k)
            if (elems[k] == elem) return col0[k];
        return -1;
    }
};

} // namespace

assembled_system ldg_system::assemble() const {
    long N = dofs_.total;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);

    // per-element: volume + lifting products and the load terms
    Eigen::VectorXd vals;
    Eigen::MatrixX2d grads;
    for (const auto& e : im_->elements) {
        const element_space& sp = *spaces_[e.id];
        int nd = sp.ndof();

        Eigen::MatrixXd M = mass_weighted(e.id, false);
        Eigen::MatrixXd Ma = mass_weighted(e.id, true);
        Eigen::LDLT<Eigen::MatrixXd> Mldlt(M);
        if (Mldlt.info() != Eigen::Success)
            throw singular_local_mass("assemble: local mass factorization failed on element " +
                                      std::to_string(e.id));

        // star: this element plus the partners of faces it lifts
        star_map star;
        star.elems.push_back(e.id);
        for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
            const face& f = faces_.faces[fi];
            if (f.minus != e.id || f.kind != face::side || f.plus < 0) continue;
            if (std::find(star.elems.begin(), star.elems.end(), f.plus) == star.elems.end())
                star.elems.push_back(f.plus);
        }
        star.total = 0;
        star.col0.clear();
        for (long el : star.elems) {
            star.col0.push_back(star.total);
            star.total += spaces_[el]->ndof();
        }

        Eigen::MatrixXd Bx = Eigen::MatrixXd::Zero(nd, star.total);
        Eigen::MatrixXd By = Eigen::MatrixXd::Zero(nd, star.total);
        Eigen::VectorXd bgx = Eigen::VectorXd::Zero(nd), bgy = Eigen::VectorXd::Zero(nd);

        Eigen::VectorXd w_tr, v_minus, v_plus;
        for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
            const face& f = faces_.faces[fi];
            if (f.minus != e.id) continue;
            const face_quad& fq = face_rules_[fi];
            if (f.kind == face::arc) {
                // w^- is the Omega_1-side trace; [[v]] = v_1 - v_2 within the element
                const quad_rule& ar = fq.arc;
                for (size_t k = 0; k < ar.nodes.size(); ++k) {
                    const vec2& x = ar.nodes[k].p;
                    double w = ar.nodes[k].w;
                    const vec2& n = ar.normal[k];
                    trace_values(e.id, x, 1, w_tr);
                    trace_values(e.id, x, 1, v_minus);
                    trace_values(e.id, x, 2, v_plus);
                    Eigen::VectorXd jump = v_minus - v_plus;
                    Bx.block(0, star.of(e.id), nd, nd).noalias() += (w * n.x) * w_tr * jump.transpose();
                    By.block(0, star.of(e.id), nd, nd).noalias() += (w * n.y) * w_tr * jump.transpose();
                }
                continue;
            }
            for (const auto& pc : fq.pieces) {
                for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                    const vec2& x = pc.rule.nodes[k].p;
                    double w = pc.rule.nodes[k].w;
                    trace_values(e.id, x, pc.side, w_tr);
                    if (f.kind == face::bdy) {
                        double nx = f.n.x, ny = f.n.y;
                        // jump on the boundary is the trace itself
                        Bx.block(0, star.of(e.id), nd, nd).noalias() += (w * nx) * w_tr * w_tr.transpose();
                        By.block(0, star.of(e.id), nd, nd).noalias() += (w * ny) * w_tr * w_tr.transpose();
                        double g = pb_->g(x);
                        bgx.noalias() += (w * nx * g) * w_tr;
                        bgy.noalias() += (w * ny * g) * w_tr;
                    } else {
                        trace_values(e.id, x, pc.side, v_minus);
                        trace_values(f.plus, x, pc.side, v_plus);
                        int cm = star.of(e.id), cp = star.of(f.plus);
                        Bx.block(0, cm, nd, nd).noalias() += (w * f.n.x) * w_tr * v_minus.transpose();
                        By.block(0, cm, nd, nd).noalias() += (w * f.n.y) * w_tr * v_minus.transpose();
                        Bx.block(0, cp, nd, spaces_[f.plus]->ndof()).noalias() -=
                            (w * f.n.x) * w_tr * v_plus.transpose();
                        By.block(0, cp, nd, spaces_[f.plus]->ndof()).noalias() -=
                            (w * f.n.y) * w_tr * v_plus.transpose();
                    }
                }
            }
        }

        Eigen::MatrixXd Sx = -Mldlt.solve(Bx);
        Eigen::MatrixXd Sy = -Mldlt.solve(By);
        Sx.block(0, star.of(e.id), nd, nd) += sp.diff(0);
        Sy.block(0, star.of(e.id), nd, nd) += sp.diff(1);

        Eigen::MatrixXd contrib = Sx.transpose() * (Ma * Sx) + Sy.transpose() * (Ma * Sy);

        // load: (f, v) over the element
        Eigen::VectorXd fv = Eigen::VectorXd::Zero(nd);
        if (e.cut) {
            for (int side = 0; side < 2; ++side)
                for (const auto& node : vol_rules_[e.id][side].nodes) {
                    sp.values(node.p, side, vals);
                    fv.noalias() += (node.w * pb_->f(node.p, side + 1)) * vals;
                }
        } else {
            for (const auto& node : vol_rules_[e.id][0].nodes) {
                sp.values(node.p, 0, vals);
                fv.noalias() += (node.w * pb_->f(node.p, e.subdomain)) * vals;
            }
        }

        // -(a L1(g), grad v - L(v)): l1 = M^{-1} bg componentwise
        Eigen::VectorXd l1x = Mldlt.solve(bgx), l1y = Mldlt.solve(bgy);
        Eigen::VectorXd bstar = -(Sx.transpose() * (Ma * l1x) + Sy.transpose() * (Ma * l1y));

        // scatter
        long row0 = dofs_.offset[e.id];
        for (int i = 0; i < nd; ++i) b[row0 + i] += fv[i];
        for (size_t kb = 0; kb < star.elems.size(); ++kb) {
            long eb = star.elems[kb];
            long gb = dofs_.offset[eb];
            int nb = spaces_[eb]->ndof();
            for (int i = 0; i < nb; ++i) b[gb + i] += bstar[star.col0[kb] + i];
            for (size_t ka = 0; ka <= kb; ++ka) {
                long ea = star.elems[ka];
                long ga = dofs_.offset[ea];
                int na = spaces_[ea]->ndof();
                for (int jb = 0; jb < nb; ++jb)
                    for (int ia = 0; ia < na; ++ia) {
                        long gi = ga + ia, gj = gb + jb;
                        double val = contrib(star.col0[ka] + ia, star.col0[kb] + jb);
                        if (val == 0.0) continue;
                        if (gi >= gj) trip.emplace_back(int(gi), int(gj), val);
                        else if (ea != eb) trip.emplace_back(int(gj), int(gi), val);
                    }
            }
        }
    }

    // face penalties
    Eigen::VectorXd tm, tp;
    Eigen::MatrixX2d gm, gp;
    for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
        const face& f = faces_.faces[fi];
        const face_quad& fq = face_rules_[fi];
        double al = alpha(fi);
        auto scatter_pair = [&](long em, long ep, const Eigen::VectorXd& jm, const Eigen::VectorXd& jp,
                                double w) {
            // accumulate w * (jm ; -jp) (jm ; -jp)^T over the two elements
            long gm0 = dofs_.offset[em], gp0 = ep >= 0 ? dofs_.offset[ep] : -1;
            int nm = spaces_[em]->ndof();
            int np = ep >= 0 ? spaces_[ep]->ndof() : 0;
            for (int i = 0; i < nm; ++i)
                for (int j = 0; j <= i; ++j) trip.emplace_back(int(gm0 + i), int(gm0 + j), w * jm[i] * jm[j]);
            for (int i = 0; i < np; ++i)
                for (int j = 0; j <= i; ++j) trip.emplace_back(int(gp0 + i), int(gp0 + j), w * jp[i] * jp[j]);
            if (ep >= 0)
                for (int i = 0; i < nm; ++i)
                    for (int j = 0; j < np; ++j) {
                        long gi = gm0 + i, gj = gp0 + j;
                        double val = -w * jm[i] * jp[j];
                        if (gi >= gj) trip.emplace_back(int(gi), int(gj), val);
                        else trip.emplace_back(int(gj), int(gi), val);
                    }
        };
        if (f.kind == face::side) {
            for (int sub = 1; sub <= 2; ++sub) {
                if (!f.in_side[sub - 1]) continue;
                for (const auto& pc : fq.pieces)
                    for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                        const vec2& x = pc.rule.nodes[k].p;
                        double w = al * pc.rule.nodes[k].w;
                        trace_values(f.minus, x, sub, tm);
                        trace_values(f.plus, x, sub, tp);
                        scatter_pair(f.minus, f.plus, tm, tp, w);
                    }
            }
        } else if (f.kind == face::bdy) {
            for (const auto& pc : fq.pieces)
                for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                    const vec2& x = pc.rule.nodes[k].p;
                    double w = al * pc.rule.nodes[k].w;
                    trace_values(f.minus, x, pc.side, tm);
                    scatter_pair(f.minus, -1, tm, tm, w);
                    double g = pb_->g(x);
                    long g0 = dofs_.offset[f.minus];
                    for (int i = 0; i < tm.size(); ++i) b[g0 + i] += w * g * tm[i];
                }
        } else {
            const auto& e = im_->elements[f.elem];
            double htan = e.h() / double(p_ * p_);
            for (size_t k = 0; k < fq.arc.nodes.size(); ++k) {
                const vec2& x = fq.arc.nodes[k].p;
                double w = fq.arc.nodes[k].w;
                trace_values(f.elem, x, 1, tm);
                trace_values(f.elem, x, 2, tp);
                scatter_pair(f.elem, -1, tm - tp, tm - tp, al * w);
                trace_gradients(f.elem, x, 1, gm);
                trace_gradients(f.elem, x, 2, gp);
                const vec2& tq = fq.arc.tangent[k];
                Eigen::VectorXd gt = (gm.col(0) - gp.col(0)) * tq.x + (gm.col(1) - gp.col(1)) * tq.y;
                scatter_pair(f.elem, -1, gt, gt, htan * w);
            }
        }
    }

    assembled_system sys;
    sys.dofs = dofs_;
    sys.alpha0 = alpha0_;
    sys.b = std::move(b);
    sys.A_lower.resize(N, N);
    sys.A_lower.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

std::vector<Eigen::VectorXd> ldg_system::lifting(const Eigen::VectorXd& v) const {
    std::vector<Eigen::VectorXd> L(im_->elements.size());
    Eigen::VectorXd w_tr, v_minus, v_plus;
    for (const auto& e : im_->elements) {
        const element_space& sp = *spaces_[e.id];
        int nd = sp.ndof();
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(nd), by = Eigen::VectorXd::Zero(nd);
        for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
            const face& f = faces_.faces[fi];
            if (f.minus != e.id) continue;
            const face_quad& fq = face_rules_[fi];
            if (f.kind == face::arc) {
                for (size_t k = 0; k < fq.arc.nodes.size(); ++k) {
                    const vec2& x = fq.arc.nodes[k].p;
                    double w = fq.arc.nodes[k].w;
                    const vec2& n = fq.arc.normal[k];
                    trace_values(e.id, x, 1, w_tr);
                    trace_values(e.id, x, 1, v_minus);
                    trace_values(e.id, x, 2, v_plus);
                    double jump = (v_minus - v_plus).dot(v.segment(dofs_.offset[e.id], nd));
                    bx.noalias() += (w * n.x * jump) * w_tr;
                    by.noalias() += (w * n.y * jump) * w_tr;
                }
                continue;
            }
            for (const auto& pc : fq.pieces) {
                for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                    const vec2& x = pc.rule.nodes[k].p;
                    double w = pc.rule.nodes[k].w;
                    trace_values(e.id, x, pc.side, w_tr);
                    double jump;
                    if (f.kind == face::bdy) {
                        trace_values(e.id, x, pc.side, v_minus);
                        jump = v_minus.dot(v.segment(dofs_.offset[e.id], nd));
                    } else {
                        trace_values(e.id, x, pc.side, v_minus);
                        trace_values(f.plus, x, pc.side, v_plus);
                        jump = v_minus.dot(v.segment(dofs_.offset[e.id], nd)) -
                               v_plus.dot(v.segment(dofs_.offset[f.plus], spaces_[f.plus]->ndof()));
                    }
                    bx.noalias() += (w * f.n.x * jump) * w_tr;
                    by.noalias() += (w * f.n.y * jump) * w_tr;
                }
            }
        }
        Eigen::MatrixXd M = mass_weighted(e.id, false);
        Eigen::LDLT<Eigen::MatrixXd> Mldlt(M);
        Eigen::VectorXd out(2 * nd);
        out.head(nd) = Mldlt.solve(bx);
        out.tail(nd) = Mldlt.solve(by);
        L[e.id] = std::move(out);
    }
    return L;
}

std::vector<Eigen::VectorXd> ldg_system::lifting_boundary() const {
    std::vector<Eigen::VectorXd> L(im_->elements.size());
    Eigen::VectorXd w_tr;
    for (const auto& e : im_->elements) {
        const element_space& sp = *spaces_[e.id];
        int nd = sp.ndof();
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(nd), by = Eigen::VectorXd::Zero(nd);
        for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
            const face& f = faces_.faces[fi];
            if (f.minus != e.id || f.kind != face::bdy) continue;
            for (const auto& pc : face_rules_[fi].pieces)
                for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                    const vec2& x = pc.rule.nodes[k].p;
                    double w = pc.rule.nodes[k].w;
                    trace_values(e.id, x, pc.side, w_tr);
                    double g = pb_->g(x);
                    bx.noalias() += (w * f.n.x * g) * w_tr;
                    by.noalias() += (w * f.n.y * g) * w_tr;
                }
        }
        Eigen::LDLT<Eigen::MatrixXd> Mldlt(mass_weighted(e.id, false));
        Eigen::VectorXd out(2 * nd);
        out.head(nd) = Mldlt.solve(bx);
        out.tail(nd) = Mldlt.solve(by);
        L[e.id] = std::move(out);
    }
    return L;
}

double ldg_system::volume_pairing(const std::vector<Eigen::VectorXd>& w,
                                  const std::vector<Eigen::VectorXd>& L) const {
    double s = 0;
    for (const auto& e : im_->elements) {
        int nd = spaces_[e.id]->ndof();
        Eigen::MatrixXd M = mass_weighted(e.id, false);
        s += w[e.id].head(nd).dot(M * L[e.id].head(nd));
        s += w[e.id].tail(nd).dot(M * L[e.id].tail(nd));
    }
    return s;
}

double ldg_system::face_pairing(const std::vector<Eigen::VectorXd>& w, const Eigen::VectorXd& v) const {
    double s = 0;
    Eigen::VectorXd w_tr, v_minus, v_plus;
    for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
        const face& f = faces_.faces[fi];
        const face_quad& fq = face_rules_[fi];
        long em = f.minus;
        int nd = spaces_[em]->ndof();
        if (f.kind == face::arc) {
            for (size_t k = 0; k < fq.arc.nodes.size(); ++k) {
                const vec2& x = fq.arc.nodes[k].p;
                double wq = fq.arc.nodes[k].w;
                const vec2& n = fq.arc.normal[k];
                trace_values(em, x, 1, w_tr);
                double wn = n.x * w_tr.dot(w[em].head(nd)) + n.y * w_tr.dot(w[em].tail(nd));
                trace_values(em, x, 1, v_minus);
                trace_values(em, x, 2, v_plus);
                double jump = (v_minus - v_plus).dot(v.segment(dofs_.offset[em], nd));
                s += wq * wn * jump;
            }
            continue;
        }
        for (const auto& pc : fq.pieces)
            for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                const vec2& x = pc.rule.nodes[k].p;
                double wq = pc.rule.nodes[k].w;
                trace_values(em, x, pc.side, w_tr);
                double wn = f.n.x * w_tr.dot(w[em].head(nd)) + f.n.y * w_tr.dot(w[em].tail(nd));
                trace_values(em, x, pc.side, v_minus);
                double jump = v_minus.dot(v.segment(dofs_.offset[em], nd));
                if (f.kind == face::side) {
                    trace_values(f.plus, x, pc.side, v_plus);
                    jump -= v_plus.dot(v.segment(dofs_.offset[f.plus], spaces_[f.plus]->ndof()));
                }
                s += wq * wn * jump;
            }
    }
    return s;
}

Eigen::VectorXd ldg_system::interpolate(const std::function<double(const vec2&, int)>& u) const {
    Eigen::VectorXd U = Eigen::VectorXd::Zero(dofs_.total);
    const tensor_lagrange_basis& seed = shared_tensor_basis(p_);
    const auto& nodes = seed.nodes();
    int np1 = p_ + 1;
    for (const auto& e : im_->elements) {
        const element_space& sp = *spaces_[e.id];
        Eigen::VectorXd c_seed(sp.block());
        if (!e.cut) {
            for (int i = 0; i < np1; ++i)
                for (int j = 0; j < np1; ++j) {
                    vec2 x = sp.to_phys({nodes[i], nodes[j]});
                    c_seed[seed.flat(i, j)] = u(x, e.subdomain);
                }
            U.segment(dofs_.offset[e.id], sp.block()) = c_seed;
            continue;
        }
        for (int side = 0; side < 2; ++side) {
            for (int i = 0; i < np1; ++i)
                for (int j = 0; j < np1; ++j) {
                    vec2 x = sp.to_phys({nodes[i], nodes[j]});
                    c_seed[seed.flat(i, j)] = u(x, side + 1);
                }
            // u = seed^T c_seed = (scale * seed C)^T c_psi  =>  c_psi = C^{-1} c_seed / scale
            Eigen::VectorXd c_psi =
                sp.side_basis(side).coeff.partialPivLu().solve(c_seed) / std::pow(double(p_), -1.5);
            U.segment(dofs_.offset[e.id] + sp.side_offset(side), sp.block()) = c_psi;
        }
    }
    return U;
}

double ldg_system::evaluate(const Eigen::VectorXd& U, const vec2& x) const {
    long el = im_->element_at(x);
    if (el < 0) throw point_outside_element("evaluate: point outside the mesh");
    const element_space& sp = *spaces_[el];
    Eigen::VectorXd vals;
    sp.values_dispatch(x, curve_of(el), vals);
    return vals.dot(U.segment(dofs_.offset[el], sp.ndof()));
}

dg_norm_parts ldg_system::dg_error_against(const Eigen::VectorXd& U,
                                           const std::function<double(const vec2&, int)>& u_ref,
                                           const std::function<vec2(const vec2&, int)>& grad_ref) const {
    dg_norm_parts out;
    bool discrete_only = !u_ref;
    Eigen::VectorXd vals, tm, tp;
    Eigen::MatrixX2d grads, gm, gp;

    // broken gradient term
    for (const auto& e : im_->elements) {
        const element_space& sp = *spaces_[e.id];
        int nd = sp.ndof();
        Eigen::VectorXd Ue = U.segment(dofs_.offset[e.id], nd);
        int nsides = e.cut ? 2 : 1;
        for (int s = 0; s < nsides; ++s) {
            int sub = e.cut ? s + 1 : e.subdomain;
            double a = pb_->coeff(sub);
            for (const auto& node : vol_rules_[e.id][s].nodes) {
                sp.gradients(node.p, s, grads);
                vec2 gU{grads.col(0).dot(Ue), grads.col(1).dot(Ue)};
                vec2 d = discrete_only ? gU : (grad_ref(node.p, sub) - gU);
                out.grad2 += a * node.w * (d.x * d.x + d.y * d.y);
            }
        }
    }

    // jumps
    for (size_t fi = 0; fi < faces_.faces.size(); ++fi) {
        const face& f = faces_.faces[fi];
        const face_quad& fq = face_rules_[fi];
        double al = alpha(fi);
        if (f.kind == face::side) {
            for (int sub = 1; sub <= 2; ++sub) {
                if (!f.in_side[sub - 1]) continue;
                for (const auto& pc : fq.pieces)
                    for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                        const vec2& x = pc.rule.nodes[k].p;
                        trace_values(f.minus, x, sub, tm);
                        trace_values(f.plus, x, sub, tp);
                        double jm = tm.dot(U.segment(dofs_.offset[f.minus], tm.size()));
                        double jp = tp.dot(U.segment(dofs_.offset[f.plus], tp.size()));
                        double jump = jm - jp; // the shared exact branch cancels in u - U
                        if (!discrete_only) jump = -jump;
                        out.jump2 += al * pc.rule.nodes[k].w * jump * jump;
                    }
            }
        } else if (f.kind == face::bdy) {
            for (const auto& pc : fq.pieces)
                for (size_t k = 0; k < pc.rule.nodes.size(); ++k) {
                    const vec2& x = pc.rule.nodes[k].p;
                    trace_values(f.minus, x, pc.side, tm);
                    double v = tm.dot(U.segment(dofs_.offset[f.minus], tm.size()));
                    double jump = discrete_only ? v : (u_ref(x, pc.side) - v);
                    out.jump2 += al * pc.rule.nodes[k].w * jump * jump;
                }
        } else {
            const auto& e = im_->elements[f.elem];
            double htan = e.h() / double(p_ * p_);
            Eigen::VectorXd Ue = U.segment(dofs_.offset[f.elem], spaces_[f.elem]->ndof());
            for (size_t k = 0; k < fq.arc.nodes.size(); ++k) {
                const vec2& x = fq.arc.nodes[k].p;
                double w = fq.arc.nodes[k].w;
                trace_values(f.elem, x, 1, tm);
                trace_values(f.elem, x, 2, tp);
                double jU = (tm - tp).dot(Ue);
                double jump = discrete_only ? jU : (u_ref(x, 1) - u_ref(x, 2) - jU);
                out.jump2 += al * w * jump * jump;

                trace_gradients(f.elem, x, 1, gm);
                trace_gradients(f.elem, x, 2, gp);
                const vec2& tq = fq.arc.tangent[k];
                double gt = ((gm.col(0) - gp.col(0)) * tq.x + (gm.col(1) - gp.col(1)) * tq.y).dot(Ue);
                double tjump;
                if (discrete_only) {
                    tjump = gt;
                } else {
                    vec2 g1 = grad_ref(x, 1), g2 = grad_ref(x, 2);
                    tjump = (g1.x - g2.x) * tq.x + (g1.y - g2.y) * tq.y - gt;
                }
                out.tang2 += htan * w * tjump * tjump;
            }
        }
    }
    return out;
}

dg_norm_parts ldg_system::dg_norm(const Eigen::VectorXd& U) const {
    return dg_error_against(U, nullptr, nullptr);
}

dg_norm_parts ldg_system::dg_error(const Eigen::VectorXd& U) const {
    if (!pb_->has_exact) throw std::logic_error("dg_error: problem has no exact solution");
    return dg_error_against(U, pb_->exact, pb_->exact_grad);
}

} // namespace cutfem
