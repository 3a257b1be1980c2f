#include "cutfem/io.hpp"

#include <iomanip>
#include <ostream>

namespace cutfem {

void write_matrix_coord(std::ostream& os, const Eigen::SparseMatrix<double>& A_lower) {
    Eigen::SparseMatrix<double> A = A_lower.selfadjointView<Eigen::Lower>();
    A.makeCompressed();
    os << std::scientific << std::setprecision(16);
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
    os << std::scientific << std::setprecision(16);
    for (long i = 0; i < v.size(); ++i) os << v[i] << '\n';
}

void write_induced_mesh(std::ostream& os, const induced_mesh& im) {
    std::unordered_map<long, std::string> tags;
    for (const auto& e : im.elements)
        if (e.cut)
            for (long leaf : e.leaves) tags[leaf] = to_string(e.geom->topo.type);
    im.base->serialize(os, &tags);
    os << "# macros: `macro id kind leaf_ids... | x0 y0 x1 y1`\n";
    for (const auto& e : im.elements) {
        if (e.leaves.size() == 1 && e.pattern_kind == 0) continue;
        os << "macro " << e.id << ' ' << e.pattern_kind;
        for (long leaf : e.leaves) os << ' ' << leaf;
        os << " | " << e.bounds.x0 << ' ' << e.bounds.y0 << ' ' << e.bounds.x1 << ' ' << e.bounds.y1
           << '\n';
    }
    os << "# elements " << im.size() << " interface " << im.n_interface() << " max_eta " << im.max_eta
       << '\n';
}

void write_solution_samples(std::ostream& os, const ldg_system& sys, const Eigen::VectorXd& U, int nx,
                            int ny) {
    const auto& dom = sys.mesh().base->domain();
    rect bb = dom.front();
    for (const rect& r : dom) {
        bb.x0 = std::min(bb.x0, r.x0);
        bb.y0 = std::min(bb.y0, r.y0);
        bb.x1 = std::max(bb.x1, r.x1);
        bb.y1 = std::max(bb.y1, r.y1);
    }
    os << std::scientific << std::setprecision(10);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            vec2 p{bb.x0 + (bb.x1 - bb.x0) * (i + 0.5) / (nx + 1),
                   bb.y0 + (bb.y1 - bb.y0) * (j + 0.5) / (ny + 1)};
            long el = sys.mesh().element_at(p);
            if (el < 0) continue;
            os << p.x << ' ' << p.y << ' ' << sys.evaluate(U, p) << '\n';
        }
}

} // namespace cutfem
