#include "qbp/transform.hpp"

#include <unordered_map>
#include <unordered_set>

namespace qbp {

QbpGraph expand_unlabeled(const QbpGraph& g) {
    check_structure(g);
    bool any = false;
    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::Unlabeled) any = true;
    if (!any) return g;

    QbpGraph out = g;
    out.num_vars = g.num_vars + 1;
    const int dummy = out.num_vars;
    std::unordered_set<int> unlabeled;
    for (auto& n : out.nodes) {
        if (n.kind == NodeKind::Unlabeled) {
            unlabeled.insert(n.id);
            n.kind = NodeKind::Var;
            n.var = dummy;
        }
    }
    std::vector<Edge> edges;
    edges.reserve(out.edges.size() * 2);
    for (const auto& e : out.edges) {
        if (unlabeled.count(e.from)) {
            edges.push_back({e.from, e.to, 0, e.amp});
            edges.push_back({e.from, e.to, 1, e.amp});
        } else {
            edges.push_back(e);
        }
    }
    out.edges = std::move(edges);
    return out;
}

QbpGraph restrict_vars(const QbpGraph& g, const std::map<int, int>& assignment) {
    check_structure(g);
    for (const auto& [var, bit] : assignment) {
        if (var < 1 || var > g.num_vars)
            throw std::invalid_argument("restrict: unknown variable " + std::to_string(var));
        if (bit != 0 && bit != 1)
            throw std::invalid_argument("restrict: bit for variable " + std::to_string(var) +
                                        " must be 0 or 1");
    }
    QbpGraph out = g;
    std::unordered_map<int, int> fixed_bit;  // node id -> assigned bit
    for (auto& n : out.nodes) {
        if (n.kind != NodeKind::Var) continue;
        auto it = assignment.find(n.var);
        if (it == assignment.end()) continue;
        fixed_bit[n.id] = it->second;
        n.kind = NodeKind::Unlabeled;
        n.var = 0;
    }
    std::vector<Edge> edges;
    edges.reserve(out.edges.size());
    for (const auto& e : out.edges) {
        auto it = fixed_bit.find(e.from);
        if (it == fixed_bit.end()) {
            edges.push_back(e);
            continue;
        }
        if (e.bit != it->second) continue;
        edges.push_back({e.from, e.to, -1, e.amp});
    }
    out.edges = std::move(edges);
    return out;
}

}  // namespace qbp
