#include "cutfem/gauss_lobatto.hpp"

namespace cutfem {

// explicit instantiations used across the project
template std::vector<double> gauss_lobatto_nodes<double>(int);
template std::vector<long double> gauss_lobatto_nodes<long double>(int);
template class lagrange_1d<double>;
template class lagrange_1d<long double>;

} // namespace cutfem
