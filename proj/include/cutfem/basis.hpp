#pragma once

#include "cutfem/cut_rules.hpp"
#include "cutfem/gauss_lobatto.hpp"
#include "cutfem/merge.hpp"

#include <Eigen/Dense>

namespace cutfem {

// Tensor Gauss-Lobatto Lagrange basis on the reference square (-1,1)^2.
// Flat index = ix * (p+1) + iy.
class tensor_lagrange_basis {
  public:
    explicit tensor_lagrange_basis(int p);

    int degree() const { return p_; }
    int size() const { return (p_ + 1) * (p_ + 1); }
    int flat(int ix, int iy) const { return ix * (p_ + 1) + iy; }
    const std::vector<double>& nodes() const { return l1d_.nodes(); }
    const lagrange_1d<double>& line() const { return l1d_; }

    void values(const vec2& ref, Eigen::VectorXd& out) const;
    void gradients(const vec2& ref, Eigen::MatrixX2d& out) const; // d/dref
    // exact expansion of d/dref_x and d/dref_y in the basis itself
    Eigen::MatrixXd diff_x() const;
    Eigen::MatrixXd diff_y() const;

  private:
    int p_;
    lagrange_1d<double> l1d_;
};

const tensor_lagrange_basis& shared_tensor_basis(int p);

// L2-orthonormal polynomial basis on a reference polygon, built by modified
// Gram-Schmidt (with reorthogonalization) from the Gauss-Lobatto Lagrange
// seed of Q_p. psi_j = sum_k C(k,j) seed_k.
struct polygon_ortho_basis {
    int p = 1;
    polygon domain; // reference shrunk polygon
    Eigen::MatrixXd coeff;
    double gram_residual = 0.0;

    int size() const { return (p + 1) * (p + 1); }
};

polygon_ortho_basis build_polygon_basis_ref(const polygon& ref_shrunk, int p);

// Spec-facing wrapper: basis for side i of a cut element, orthonormalized on
// the reference image of the shrunk polygon.
polygon_ortho_basis build_polygon_basis(const cut_geometry& g, int side, int p);

// Per induced-element basis evaluations in physical coordinates. Interface
// elements carry two independent fields (side 0 = Omega_1, side 1 = Omega_2),
// each of dimension (p+1)^2 and scaled by p^{-3/2}; uncut elements carry the
// mapped tensor Lagrange basis.
class element_space {
  public:
    element_space(const induced_element& e, int p);

    bool cut() const { return cut_; }
    int degree() const { return p_; }
    int block() const { return n_; }               // dofs per field
    int ndof() const { return cut_ ? 2 * n_ : n_; }
    int side_offset(int side) const { return side * n_; }
    const induced_element& element() const { return *elem_; }

    vec2 to_ref(const vec2& x) const;
    vec2 to_phys(const vec2& ref) const;

    // Field values / gradients at a physical point. For interface elements
    // `side` selects the field (0 or 1); out has `block()` entries mapped into
    // rows [side_offset, side_offset+block).
    void values(const vec2& x, int side, Eigen::VectorXd& out) const;      // size ndof
    void gradients(const vec2& x, int side, Eigen::MatrixX2d& out) const;  // ndof x 2

    // characteristic-function evaluation: selects the field by the side
    // classifier; zero rows on the inactive field. Throws
    // point_outside_element when x is outside the closed element.
    void values_dispatch(const vec2& x, const interface_curve* curve, Eigen::VectorXd& out) const;

    // exact expansion of the physical partial derivatives within each field
    Eigen::MatrixXd diff(int axis) const; // ndof x ndof, block diagonal per field

    const polygon_ortho_basis& side_basis(int side) const { return ortho_[side]; }

  private:
    const induced_element* elem_;
    int p_;
    bool cut_;
    int n_;
    double scale_ = 1.0; // p^{-3/2} on interface elements
    polygon_ortho_basis ortho_[2];
};

// Global coefficient layout: (p+1)^2 dofs per uncut element, 2 (p+1)^2 per
// interface element, ordered by induced-element id.
struct coefficient_map {
    std::vector<long> offset;
    std::vector<int> count;
    long total = 0;

    static coefficient_map build(const induced_mesh& im);
};

} // namespace cutfem
