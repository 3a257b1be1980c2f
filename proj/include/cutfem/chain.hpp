#pragma once

#include "cutfem/cut.hpp"
#include "cutfem/mesh.hpp"

#include <unordered_map>

namespace cutfem {

// Classification of every leaf against an interface set.
struct leaf_classification {
    std::unordered_map<long, cut_topology> topo; // interface leaves only
    std::unordered_map<long, int> component;     // interface leaf -> component index
    std::vector<long> non_transversal;           // leaves that need refinement

    bool is_cut(long id) const { return topo.count(id) > 0; }
    cell_type type_of(long id) const {
        auto it = topo.find(id);
        return it == topo.end() ? cell_type::UNCUT : it->second.type;
    }
};

leaf_classification classify_leaves(const cartesian_mesh& mesh, const interface_set& interface,
                                    double delta0);

// Ordered chain of interface elements along one interface component.
struct chain {
    int component = 0;
    bool closed = false;
    std::vector<long> elements;   // leaf ids in curve order
    std::vector<cell_type> types; // accompany chain (1 = T1, 2 = T2; T3 recorded)

    size_t length() const { return elements.size(); }
};

// Chains follow increasing curve parameter; a closed interface yields one
// cyclic chain starting at the element containing the parameter origin.
// Throws non_transversal_cut if the crossing data is inconsistent (e.g. the
// curve threads a cell corner so consecutive elements are not side-adjacent).
std::vector<chain> extract_chains(const cartesian_mesh& mesh, const interface_set& interface,
                                  const leaf_classification& cls);

struct admissibility_violation {
    int rule = 0; // 1..4 per Def. 3.1
    std::vector<long> cells;
    std::string detail;
};

std::vector<admissibility_violation> check_admissible(const cartesian_mesh& mesh,
                                                      const interface_set& interface, const chain& ch,
                                                      const leaf_classification& cls);

} // namespace cutfem
