#include "qbp/validate.hpp"

#include <cmath>
#include <cstdint>
#include <map>

namespace qbp {

namespace {

// Rows are indexed (node, bit). Unlabeled nodes have one bit-independent row,
// canonically stored under bit 0.
inline int row_count(const CompiledGraph& cg, int idx) { return cg.is_unlabeled(idx) ? 1 : 2; }

// Does the bit pair (bu,bv) occur under some assignment, given the labels?
bool pair_applies(const CompiledGraph& cg, int u, int v, int bu, int bv) {
    const Node& nu = cg.node(u);
    const Node& nv = cg.node(v);
    bool u_unl = nu.kind == NodeKind::Unlabeled;
    bool v_unl = nv.kind == NodeKind::Unlabeled;
    if (u_unl && v_unl) return bu == bv;  // shared dummy variable
    if (u_unl || v_unl) return true;
    if (nu.var == nv.var) return bu == bv;
    return true;
}

}  // namespace

ValidationReport validate(const CompiledGraph& cg, double tol) {
    ValidationReport rep;
    rep.tol = tol;

    const int n = cg.num_nodes();

    // Sparse Gram accumulation: group edges by target, then every pair of
    // rows with a common target contributes. Rows without common targets have
    // inner product exactly zero and need no check.
    std::map<std::tuple<int, int, int, int>, cplx> gram;  // (u,bu,v,bv) with (u,bu) <= (v,bv)
    for (int w = 0; w < n; ++w) {
        const auto& preds = cg.in(w);
        for (size_t a = 0; a < preds.size(); ++a) {
            auto [ua, ba,ampa] = preds[a];
            int bits_a[2];
            int na = 0;
            if (ba == -1) bits_a[na++] = 0;  // canonical unlabeled row
            else bits_a[na++] = ba;
            for (size_t b = a; b < preds.size(); ++b) {
                auto [ub, bb, ampb] = preds[b];
                int bits_b[2];
                int nb = 0;
                if (bb == -1) bits_b[nb++] = 0;
                else bits_b[nb++] = bb;
                for (int i = 0; i < na; ++i) {
                    for (int j = 0; j < nb; ++j) {
                        int x = ua, bx = bits_a[i], y = ub, by = bits_b[j];
                        cplx contrib = std::conj(ampa) * ampb;
                        if (std::make_pair(x, bx) > std::make_pair(y, by)) {
                            std::swap(x, y);
                            std::swap(bx, by);
                            contrib = std::conj(contrib);
                        }
                        gram[{x, bx, y, by}] += contrib;
                    }
                }
            }
        }
    }

    rep.well_formed = true;
    // Diagonal: every non-sink row must have unit norm, including rows that
    // never appeared above (no outgoing edges at all -> norm 0).
    for (int u = 0; u < n; ++u) {
        if (cg.is_sink(u)) continue;
        for (int b = 0; b < row_count(cg, u); ++b) {
            double norm2 = 0.0;
            auto it = gram.find({u, b, u, b});
            if (it != gram.end()) norm2 = it->second.real();
            if (std::abs(norm2 - 1.0) > tol) {
                rep.well_formed = false;
                rep.violations.push_back({ViolationKind::WellFormed, u, u, b, b, -1, norm2});
            }
        }
    }
    // Off-diagonal accumulated entries.
    for (const auto& [key, val] : gram) {
        auto [u, bu, v, bv] = key;
        if (u == v && bu == bv) continue;
        if (u == v) {
            // Same node, different bits: no assignment produces two distinct
            // bits for one variable, so no constraint applies.
            continue;
        }
        if (!pair_applies(cg, u, v, bu, bv)) continue;
        if (std::abs(val) > tol) {
            rep.well_formed = false;
            rep.violations.push_back({ViolationKind::WellFormed, u, v, bu, bv, -1, std::abs(val)});
        }
    }

    // Unidirectionality. Unlabeled predecessors carry the dummy label 0;
    // mixing dummy and real labels is a violation.
    rep.unidirectional = true;
    for (int w = 0; w < n; ++w) {
        const auto& preds = cg.in(w);
        int label = -2;
        int first = -1;
        for (const auto& [u, bit, amp] : preds) {
            if (std::abs(amp) == 0.0) continue;
            int lu = cg.is_unlabeled(u) ? 0 : cg.node(u).var;
            if (label == -2) {
                label = lu;
                first = u;
            } else if (lu != label) {
                rep.unidirectional = false;
                rep.violations.push_back({ViolationKind::Unidirectional, first, u, 0, 0, w, 0.0});
                break;
            }
        }
    }

    return rep;
}

}  // namespace qbp
