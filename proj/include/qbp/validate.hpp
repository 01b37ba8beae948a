#pragma once

#include "qbp/graph.hpp"

namespace qbp {

enum class ViolationKind { WellFormed, Unidirectional };

struct Violation {
    ViolationKind kind = ViolationKind::WellFormed;
    // Well-formedness: nodes u,v (dense indices) and bit pair whose rows have
    // inner product `value` off target. Unidirectionality: u,v are two
    // predecessors of node `at` carrying different variable labels.
    int u = -1;
    int v = -1;
    int bit_u = 0;
    int bit_v = 0;
    int at = -1;
    double value = 0.0;
};

struct ValidationReport {
    bool well_formed = false;
    bool unidirectional = false;
    double tol = 0.0;
    std::vector<Violation> violations;

    bool ok() const { return well_formed && unidirectional; }
};

// Checks the two Def.-1 constraints. Well-formedness: for every pair of
// non-sink nodes u,v and every bit pair consistent with their labels (equal
// bits forced when the labels agree, unlabeled nodes share one dummy label),
// |sum_w conj(d(u,w,b_u)) d(v,w,b_v) - [u=v]| <= tol. Unidirectionality: all
// predecessors of a node carry the same variable label.
ValidationReport validate(const CompiledGraph& cg, double tol = 1e-9);

}  // namespace qbp
