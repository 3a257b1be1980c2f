#pragma once

#include "cutfem/merge.hpp"

namespace cutfem {

struct pipeline_config {
    double h0 = 0.25;     // initial uniform mesh size
    int p = 1;            // polynomial degree (drives the deviation target)
    double delta0 = 0.2;  // large-element fraction, in (0, 1/5]
    int max_rounds = 25;
    bool enforce_eta = true; // require max eta <= 0.1/(p (p+1))
    int verbosity = 0;
};

// Mesh generation loop: refine near the interface until the interface cells
// form admissible chains, enforce the K-mesh (2:1) property on the rest,
// merge, and repeat with one more level of interface refinement until every
// induced interface element satisfies the deviation target.
induced_mesh generate_mesh(const std::vector<rect>& domain, const interface_set& interface,
                           const pipeline_config& cfg);

double eta_target(int p); // 0.1 / (p (p+1))

} // namespace cutfem
