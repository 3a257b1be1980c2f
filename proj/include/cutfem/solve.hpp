#pragma once

#include "cutfem/assembly.hpp"

namespace cutfem {

struct spectral_report {
    double lambda_min = 0;
    double lambda_max = 0;
    double kappa = 0;
    std::string method; // "dense" or "iterative"
    double residual = 0; // max extremal-pair residual / ||A|| (dense path)
    long dimension = 0;
};

// Direct sparse factorization (LDLT) of the SPD stiffness matrix; checks the
// relative residual.
Eigen::VectorXd solve_linear(const assembled_system& sys, double* residual_out = nullptr);
Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A_lower, const Eigen::VectorXd& b,
                             double* residual_out = nullptr);

// Symmetric dense eigensolve by cyclic Jacobi rotations (templated so the
// conditioning studies can run in long double).
template <typename Real>
std::vector<Real> jacobi_eigenvalues(std::vector<Real> A, int n, Real tol_factor = Real(1e3));

// Condition number of a symmetric matrix. mode "dense" requires dim <= 4000;
// mode "iterative" uses Lanczos on A and on A^{-1} through the factorization.
spectral_report condition_number_dense(const Eigen::MatrixXd& A);
spectral_report condition_number_iterative(const Eigen::SparseMatrix<double>& A_lower, double tol = 1e-6,
                                           int max_iters = 400);

} // namespace cutfem
