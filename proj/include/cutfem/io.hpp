#pragma once

#include "cutfem/assembly.hpp"
#include "cutfem/bodyfit.hpp"

#include <iosfwd>

namespace cutfem {

// coordinate text format: `row col value`, 0-based, sorted, full symmetric matrix
void write_matrix_coord(std::ostream& os, const Eigen::SparseMatrix<double>& A_lower);
// one value per line
void write_vector(std::ostream& os, const Eigen::VectorXd& v);

// induced-mesh serialization: the base-leaf section (id level x0 y0 x1 y1 type)
// followed by `macro id kind leaf_ids... | x0 y0 x1 y1` records
void write_induced_mesh(std::ostream& os, const induced_mesh& im);

// uniform grid of solution samples `x y value`
void write_solution_samples(std::ostream& os, const ldg_system& sys, const Eigen::VectorXd& U, int nx,
                            int ny);

} // namespace cutfem
