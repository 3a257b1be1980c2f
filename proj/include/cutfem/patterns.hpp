#pragma once

#include "cutfem/chain.hpp"

namespace cutfem {

// Result of one pattern application. `absorbed` lists every background leaf
// covered by the macro rectangle (inputs, the diagonal cell, extensions).
struct pattern_result {
    bool identity = false; // all inputs already large, nothing merged
    int branch = 0;        // 0 identity, 1..4 = guard branch that fired
    rect macro;
    std::vector<long> absorbed;
};

// Patterns, canonical guard ladders applied in an orientation-generic way:
//   1: corner element between two pass elements     (delta0 <= 1/3)
//   2: corner element between two corner elements   (delta0 <= 1/3)
//   3: pair of corner elements                      (delta0 <= 1/4)
//   4: pass element between two corner elements     (delta0 <= 1/5)
//   5: single pass element                          (delta0 <= 1/3)
// `cells` are chain-ordered leaf ids matching the pattern signature.
// Throws pattern_mismatch when the local configuration does not realize the
// pattern (the caller refines), delta_out_of_range for invalid delta0.
pattern_result apply_pattern(int kind, const std::vector<long>& cells, const cartesian_mesh& mesh,
                             const interface_curve& curve, const leaf_classification& cls, double delta0);

} // namespace cutfem
