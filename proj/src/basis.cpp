#include "cutfem/basis.hpp"

#include <map>
#include <mutex>

namespace cutfem {

tensor_lagrange_basis::tensor_lagrange_basis(int p) : p_(p), l1d_(gauss_lobatto_nodes<double>(p)) {}

void tensor_lagrange_basis::values(const vec2& ref, Eigen::VectorXd& out) const {
    std::vector<double> lx, ly;
    l1d_.values(ref.x, lx);
    l1d_.values(ref.y, ly);
    out.resize(size());
    for (int i = 0; i <= p_; ++i)
        for (int j = 0; j <= p_; ++j) out[flat(i, j)] = lx[i] * ly[j];
}

void tensor_lagrange_basis::gradients(const vec2& ref, Eigen::MatrixX2d& out) const {
    std::vector<double> lx, ly, dx, dy;
    l1d_.values(ref.x, lx);
    l1d_.values(ref.y, ly);
    l1d_.derivatives(ref.x, dx);
    l1d_.derivatives(ref.y, dy);
    out.resize(size(), 2);
    for (int i = 0; i <= p_; ++i)
        for (int j = 0; j <= p_; ++j) {
            out(flat(i, j), 0) = dx[i] * ly[j];
            out(flat(i, j), 1) = lx[i] * dy[j];
        }
}

Eigen::MatrixXd tensor_lagrange_basis::diff_x() const {
    // d/dx l_i(x) l_j(y) = sum_k D(k,i) l_k(x) l_j(y)
    int n = size();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i <= p_; ++i)
        for (int j = 0; j <= p_; ++j)
            for (int k = 0; k <= p_; ++k) D(flat(k, j), flat(i, j)) = l1d_.diff_matrix(k, i);
    return D;
}

Eigen::MatrixXd tensor_lagrange_basis::diff_y() const {
    int n = size();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i <= p_; ++i)
        for (int j = 0; j <= p_; ++j)
            for (int k = 0; k <= p_; ++k) D(flat(i, k), flat(i, j)) = l1d_.diff_matrix(k, j);
    return D;
}

const tensor_lagrange_basis& shared_tensor_basis(int p) {
    static std::map<int, tensor_lagrange_basis> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, tensor_lagrange_basis(p)).first;
    return it->second;
}

polygon_ortho_basis build_polygon_basis_ref(const polygon& ref_shrunk, int p) {
    if (ref_shrunk.v.size() < 3 || ref_shrunk.area() < 1e-12)
        throw degenerate_polygon("build_polygon_basis: shrunk polygon degenerate");
    const tensor_lagrange_basis& seed = shared_tensor_basis(p);
    int n = seed.size();
    quad_rule rule = polygon_rule(ref_shrunk, 4 * p + 2);
    int m = int(rule.nodes.size());

    Eigen::VectorXd w(m);
    Eigen::MatrixXd U(m, n);
    Eigen::VectorXd vals;
    for (int k = 0; k < m; ++k) {
        w[k] = rule.nodes[k].w;
        seed.values(rule.nodes[k].p, vals);
        U.row(k) = vals.transpose();
    }

    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double r = (w.array() * U.col(k).array() * U.col(j).array()).sum();
                U.col(j) -= r * U.col(k);
                C.col(j) -= r * C.col(k);
            }
        }
        double nrm = std::sqrt((w.array() * U.col(j).array().square()).sum());
        if (!(nrm > 1e-150)) throw gram_breakdown("build_polygon_basis: norm collapse at column " +
                                                  std::to_string(j));
        U.col(j) /= nrm;
        C.col(j) /= nrm;
    }

    // independent residual check of the Gram matrix
    Eigen::MatrixXd G = U.transpose() * w.asDiagonal() * U;
    double resid = (G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (resid > 1e-6)
        throw gram_breakdown("build_polygon_basis: orthogonality loss " + std::to_string(resid));

    polygon_ortho_basis b;
    b.p = p;
    b.domain = ref_shrunk;
    b.coeff = C;
    b.gram_residual = resid;
    return b;
}

namespace {

polygon to_reference(const polygon& phys, const rect& cell) {
    polygon ref;
    for (const vec2& v : phys.v)
        ref.v.push_back({(v.x - cell.center().x) / (0.5 * cell.width()),
                         (v.y - cell.center().y) / (0.5 * cell.height())});
    return ref;
}

} // namespace

polygon_ortho_basis build_polygon_basis(const cut_geometry& g, int side, int p) {
    return build_polygon_basis_ref(to_reference(g.shrunk[side], g.cell), p);
}

element_space::element_space(const induced_element& e, int p) : elem_(&e), p_(p) {
    cut_ = e.cut;
    n_ = (p + 1) * (p + 1);
    if (cut_) {
        scale_ = std::pow(double(p), -1.5);
        for (int s = 0; s < 2; ++s) ortho_[s] = build_polygon_basis(*e.geom, s, p);
    }
}

vec2 element_space::to_ref(const vec2& x) const {
    const rect& b = elem_->bounds;
    return {(x.x - b.center().x) / (0.5 * b.width()), (x.y - b.center().y) / (0.5 * b.height())};
}

vec2 element_space::to_phys(const vec2& r) const {
    const rect& b = elem_->bounds;
    return {b.center().x + 0.5 * b.width() * r.x, b.center().y + 0.5 * b.height() * r.y};
}

void element_space::values(const vec2& x, int side, Eigen::VectorXd& out) const {
    out = Eigen::VectorXd::Zero(ndof());
    vec2 ref = to_ref(x);
    const tensor_lagrange_basis& seed = shared_tensor_basis(p_);
    Eigen::VectorXd sv;
    seed.values(ref, sv);
    if (!cut_) {
        out = sv;
        return;
    }
    out.segment(side_offset(side), n_) = scale_ * (ortho_[side].coeff.transpose() * sv);
}

void element_space::gradients(const vec2& x, int side, Eigen::MatrixX2d& out) const {
    out = Eigen::MatrixX2d::Zero(ndof(), 2);
    vec2 ref = to_ref(x);
    const tensor_lagrange_basis& seed = shared_tensor_basis(p_);
    Eigen::MatrixX2d sg;
    seed.gradients(ref, sg);
    double jx = 2.0 / elem_->bounds.width(), jy = 2.0 / elem_->bounds.height();
    if (!cut_) {
        out.col(0) = jx * sg.col(0);
        out.col(1) = jy * sg.col(1);
        return;
    }
    out.block(side_offset(side), 0, n_, 1) = scale_ * jx * (ortho_[side].coeff.transpose() * sg.col(0));
    out.block(side_offset(side), 1, n_, 1) = scale_ * jy * (ortho_[side].coeff.transpose() * sg.col(1));
}

void element_space::values_dispatch(const vec2& x, const interface_curve* curve, Eigen::VectorXd& out) const {
    const rect& b = elem_->bounds;
    double tol = 1e-12 * b.diameter();
    if (x.x < b.x0 - tol || x.x > b.x1 + tol || x.y < b.y0 - tol || x.y > b.y1 + tol)
        throw point_outside_element("values_dispatch: point outside element");
    if (!cut_) {
        values(x, 0, out);
        return;
    }
    int side = curve->side(x) - 1;
    values(x, side, out);
}

Eigen::MatrixXd element_space::diff(int axis) const {
    const tensor_lagrange_basis& seed = shared_tensor_basis(p_);
    Eigen::MatrixXd Dref = axis == 0 ? seed.diff_x() : seed.diff_y();
    double j = axis == 0 ? 2.0 / elem_->bounds.width() : 2.0 / elem_->bounds.height();
    if (!cut_) return j * Dref;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ndof(), ndof());
    for (int s = 0; s < 2; ++s) {
        // seed-space differentiation conjugated into the orthonormal basis
        Eigen::MatrixXd Cinv = ortho_[s].coeff.inverse();
        out.block(side_offset(s), side_offset(s), n_, n_) = j * (Cinv * Dref * ortho_[s].coeff);
    }
    return out;
}

coefficient_map coefficient_map::build(const induced_mesh& im) {
    coefficient_map m;
    int n = (im.degree + 1) * (im.degree + 1);
    m.offset.resize(im.elements.size());
    m.count.resize(im.elements.size());
    long off = 0;
    for (size_t i = 0; i < im.elements.size(); ++i) {
        m.offset[i] = off;
        m.count[i] = im.elements[i].cut ? 2 * n : n;
        off += m.count[i];
    }
    m.total = off;
    return m;
}

} // namespace cutfem
