#pragma once

#include "cutfem/basis.hpp"
#include "cutfem/faces.hpp"
#include "cutfem/problem.hpp"

#include <Eigen/Sparse>

namespace cutfem {

struct assembled_system {
    Eigen::SparseMatrix<double> A_lower; // lower triangle of the symmetric stiffness matrix
    Eigen::VectorXd b;
    coefficient_map dofs;
    double alpha0 = 1.0;

    long n() const { return dofs.total; }
    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd L = Eigen::MatrixXd(A_lower);
        Eigen::MatrixXd A = L.selfadjointView<Eigen::Lower>();
        return A;
    }
};

struct dg_norm_parts {
    double grad2 = 0, jump2 = 0, tang2 = 0;
    double total() const { return std::sqrt(grad2 + jump2 + tang2); }
};

// LDG discretization of the interface problem on an induced mesh: bases,
// face set, penalty, liftings, stiffness matrix, load vector and the DG norm.
class ldg_system {
  public:
    ldg_system(const interface_problem& pb, const induced_mesh& im, double alpha0 = 1.0);

    const coefficient_map& dofs() const { return dofs_; }
    const face_set& faces() const { return faces_; }
    const induced_mesh& mesh() const { return *im_; }
    int degree() const { return p_; }
    double alpha(size_t face_index) const;
    const element_space& space(long elem) const { return *spaces_[elem]; }

    assembled_system assemble() const;

    // Gram matrix of the physical basis over the element (block-diagonal
    // across the two sides of an interface element).
    Eigen::MatrixXd element_mass(long elem) const;

    // lifting coefficients per element for a global coefficient vector v:
    // result[e] has 2*ndof entries (x block then y block)
    std::vector<Eigen::VectorXd> lifting(const Eigen::VectorXd& v) const;
    // lifting of boundary data g (the L_1 lifting)
    std::vector<Eigen::VectorXd> lifting_boundary() const;

    // (w, L)_M for a broken vector field given per-element (x,y) coefficients
    double volume_pairing(const std::vector<Eigen::VectorXd>& w,
                          const std::vector<Eigen::VectorXd>& L) const;
    // <w^- . n, [[v]]>_E by face quadrature (the right side of the lifting identity)
    double face_pairing(const std::vector<Eigen::VectorXd>& w, const Eigen::VectorXd& v) const;

    // DG norm of a discrete function, and of the error against the exact
    // solution (requires pb.has_exact)
    dg_norm_parts dg_norm(const Eigen::VectorXd& U) const;
    dg_norm_parts dg_error(const Eigen::VectorXd& U) const;
    // DG-norm error of the discrete field against an arbitrary reference pair
    dg_norm_parts dg_error_against(const Eigen::VectorXd& U,
                                   const std::function<double(const vec2&, int)>& u_ref,
                                   const std::function<vec2(const vec2&, int)>& grad_ref) const;

    // interpolate a smooth per-side function into the discrete space
    Eigen::VectorXd interpolate(const std::function<double(const vec2&, int)>& u) const;
    // point evaluation of a discrete function (side via the classifier)
    double evaluate(const Eigen::VectorXd& U, const vec2& x) const;

  private:
    const interface_problem* pb_;
    const induced_mesh* im_;
    int p_;
    double alpha0_;
    coefficient_map dofs_;
    face_set faces_;
    std::vector<std::unique_ptr<element_space>> spaces_;
    std::vector<std::array<quad_rule, 2>> vol_rules_; // per element, per side (uncut: side 0 only)

    struct face_quad {
        // sub-segments with a fixed subdomain side (straight faces)
        struct piece {
            quad_rule rule;
            int side; // subdomain 1 or 2 at the piece midpoint
        };
        std::vector<piece> pieces;
        quad_rule arc; // arcs
    };
    std::vector<face_quad> face_rules_;

    const interface_curve* curve_of(long elem) const;
    void trace_values(long elem, const vec2& x, int subdomain_side, Eigen::VectorXd& out) const;
    void trace_gradients(long elem, const vec2& x, int subdomain_side, Eigen::MatrixX2d& out) const;
    Eigen::MatrixXd mass_weighted(long elem, bool with_a) const;
    void build_face_rules();
};

} // namespace cutfem
