#pragma once

#include "cutfem/patterns.hpp"

#include <memory>
#include <optional>

namespace cutfem {

struct macro_element {
    rect bounds;
    std::vector<long> leaves; // constituent background leaves, sorted
    int pattern_kind = 0;     // 1..5; 0 = SELF (already-large interface element)
    int component = 0;        // interface component of the chain that created it
};

// Shared merge bookkeeping across the chains of one mesh. `claim` maps a
// background leaf to the macro that absorbed it; double claims raise
// merge_conflict (they cannot occur on admissible chains).
struct merge_state {
    std::vector<macro_element> macros;
    std::unordered_map<long, size_t> claim;

    void add_macro(macro_element m);
};

// Algorithm: process one admissible chain in the fixed order
//   1) maximal runs of corner-cut elements: pairs (pattern 3), an odd run
//      closing with one pattern-2 triple on its last three elements;
//   2) remaining corner-pass-corner triples (pattern 4);
//   3) remaining pass-corner-pass triples (pattern 1);
//   4) remaining small pass elements alone (pattern 5).
// Large pass-through elements stay unmerged (SELF). Requires delta0 <= 1/5 and
// either a closed chain or pass-type endpoints.
void merge_chain(const cartesian_mesh& mesh, const interface_curve& curve, const leaf_classification& cls,
                 const chain& ch, double delta0, merge_state& state);

// The post-merge mesh: macro-elements plus untouched leaves.
struct induced_element {
    long id = -1;
    rect bounds;
    cartesian_mesh::icoord ix0 = 0, iy0 = 0, ix1 = 0, iy1 = 0;
    std::vector<long> leaves;
    int pattern_kind = 0;
    bool cut = false;
    int component = 0;
    int subdomain = 0; // for uncut elements: 1 or 2
    std::optional<cut_geometry> geom;

    double h() const { return bounds.diameter(); }
};

struct induced_mesh {
    std::shared_ptr<cartesian_mesh> base;
    interface_set interface;
    std::vector<induced_element> elements;
    std::unordered_map<long, long> leaf_to_element;
    double delta0 = 0.2;
    int degree = 1;
    double max_eta = 0.0;
    int rounds_used = 0;

    long size() const { return long(elements.size()); }
    long n_interface() const {
        long n = 0;
        for (const auto& e : elements) n += e.cut;
        return n;
    }
    double h_min() const {
        double h = 1e300;
        for (const auto& e : elements) h = std::min(h, e.h());
        return h;
    }
    long element_at(const vec2& p) const {
        long leaf = base->leaf_at(p);
        if (leaf < 0) return -1;
        auto it = leaf_to_element.find(leaf);
        return it == leaf_to_element.end() ? -1 : it->second;
    }
};

// Assemble induced elements from a merge pass over all chains. Cut metadata
// (geom) is attached for interface elements using degree p.
induced_mesh build_induced_mesh(std::shared_ptr<cartesian_mesh> mesh, const interface_set& interface,
                                const leaf_classification& cls, const merge_state& state, double delta0,
                                int p);

} // namespace cutfem
