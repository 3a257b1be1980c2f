#include "cutfem/pipeline.hpp"

#include <iostream>

namespace cutfem {

double eta_target(int p) { return 0.1 / (double(p) * (p + 1)); }

namespace {

// Refine until every leaf classifies transversally and all interface leaves
// sit at level `target_level` exactly.
leaf_classification refine_to_level(cartesian_mesh& mesh, const interface_set& interface, double delta0,
                                    int target_level) {
    for (;;) {
        leaf_classification cls = classify_leaves(mesh, interface, delta0);
        std::vector<long> targets = cls.non_transversal;
        for (auto& [id, topo] : cls.topo)
            if (mesh.level(id) < target_level) targets.push_back(id);
        if (targets.empty()) return cls;
        for (long id : targets)
            if (mesh.is_leaf(id)) mesh.refine(id);
    }
}

// Rule 1 support: every leaf in S(K)_2 of an interface leaf gets the
// interface level.
void refine_band(cartesian_mesh& mesh, const interface_set& interface, double delta0, int target_level) {
    for (;;) {
        leaf_classification cls = classify_leaves(mesh, interface, delta0);
        std::vector<long> targets;
        for (auto& [id, topo] : cls.topo)
            for (long nb : mesh.neighborhood(id, 2))
                if (mesh.level(nb) < target_level) targets.push_back(nb);
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        if (targets.empty()) return;
        for (long id : targets)
            if (mesh.is_leaf(id)) mesh.refine(id);
    }
}

} // namespace

induced_mesh generate_mesh(const std::vector<rect>& domain, const interface_set& interface,
                           const pipeline_config& cfg) {
    if (cfg.p < 1) throw std::invalid_argument("generate_mesh: p >= 1");
    if (!(cfg.delta0 > 0 && cfg.delta0 <= 0.2 + 1e-12))
        throw std::invalid_argument("generate_mesh: delta0 in (0, 1/5]");

    int level = 0;
    std::string last_reason;
    for (int round = 0; round < cfg.max_rounds; ++round) {
        auto mesh = std::make_shared<cartesian_mesh>(domain, cfg.h0);
        try {
            leaf_classification cls = refine_to_level(*mesh, interface, cfg.delta0, level);
            refine_band(*mesh, interface, cfg.delta0, level);
            mesh->enforce_kmesh();
            cls = classify_leaves(*mesh, interface, cfg.delta0);
            if (!cls.non_transversal.empty()) {
                last_reason = "balance refinement exposed non-transversal cells";
                ++level;
                continue;
            }

            std::vector<chain> chains = extract_chains(*mesh, interface, cls);
            bool admissible = true;
            for (const chain& ch : chains) {
                auto viol = check_admissible(*mesh, interface, ch, cls);
                if (!viol.empty()) {
                    admissible = false;
                    last_reason = "rule " + std::to_string(viol.front().rule) + " violation (" +
                                  viol.front().detail + ")";
                    break;
                }
                if (!ch.closed && ch.length() >= 2 &&
                    (ch.types.front() == cell_type::T1 || ch.types.back() == cell_type::T1)) {
                    admissible = false;
                    last_reason = "open chain with corner-cut endpoint";
                    break;
                }
            }
            if (!admissible) {
                ++level;
                continue;
            }

            merge_state state;
            for (const chain& ch : chains) merge_chain(*mesh, *interface.components[ch.component], cls, ch,
                                                       cfg.delta0, state);

            induced_mesh im = build_induced_mesh(mesh, interface, cls, state, cfg.delta0, cfg.p);

            for (const auto& e : im.elements)
                if (e.cut && !is_large_element(e.bounds, *interface.components[e.component], cfg.delta0))
                    throw pattern_mismatch("induced element fails the large-element test");

            if (cfg.enforce_eta && im.max_eta > eta_target(cfg.p)) {
                // release all merged elements and refine the interface once more
                last_reason = "deviation target not met (max eta = " + std::to_string(im.max_eta) + ")";
                ++level;
                continue;
            }
            im.rounds_used = round + 1;
            if (cfg.verbosity > 0)
                std::cerr << "generate_mesh: done after " << round + 1 << " rounds, " << im.size()
                          << " elements (" << im.n_interface() << " interface), max eta " << im.max_eta
                          << "\n";
            return im;
        } catch (const geometry_error& err) {
            last_reason = err.what();
            ++level;
            continue;
        }
    }
    throw iteration_limit("generate_mesh: round cap exceeded; last obstacle: " + last_reason);
}

} // namespace cutfem
