#include "qbp/graph.hpp"

#include <cmath>
#include <set>

namespace qbp {

void check_structure(const QbpGraph& g) {
    if (g.num_vars < 0) throw structural_error("num_vars must be nonnegative");
    std::unordered_map<int, const Node*> by_id;
    for (const auto& n : g.nodes) {
        if (!by_id.emplace(n.id, &n).second)
            throw structural_error("duplicate node id " + std::to_string(n.id));
        switch (n.kind) {
            case NodeKind::Var:
                if (n.var < 1 || n.var > g.num_vars)
                    throw structural_error("node " + std::to_string(n.id) +
                                           ": variable index " + std::to_string(n.var) +
                                           " out of range 1.." + std::to_string(g.num_vars));
                break;
            case NodeKind::Sink:
                if (n.label != 0 && n.label != 1)
                    throw structural_error("node " + std::to_string(n.id) + ": sink label must be 0 or 1");
                break;
            case NodeKind::Unlabeled:
                break;
        }
    }
    if (!by_id.count(g.start)) throw structural_error("start node id " + std::to_string(g.start) + " does not exist");

    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : g.edges) {
        auto from_it = by_id.find(e.from);
        if (from_it == by_id.end())
            throw structural_error("edge references unknown node " + std::to_string(e.from));
        if (!by_id.count(e.to))
            throw structural_error("edge references unknown node " + std::to_string(e.to));
        const Node& from = *from_it->second;
        if (from.kind == NodeKind::Sink)
            throw structural_error("edge leaves sink node " + std::to_string(e.from));
        if (from.kind == NodeKind::Unlabeled && e.bit != -1)
            throw structural_error("edge from unlabeled node " + std::to_string(e.from) +
                                   " must not carry a boolean label");
        if (from.kind == NodeKind::Var && e.bit != 0 && e.bit != 1)
            throw structural_error("edge from variable node " + std::to_string(e.from) +
                                   " must carry boolean label 0 or 1");
        if (!std::isfinite(e.amp.real()) || !std::isfinite(e.amp.imag()))
            throw structural_error("non-finite amplitude on edge " + std::to_string(e.from) + "->" +
                                   std::to_string(e.to));
        if (!seen.insert({e.from, e.to, e.bit}).second)
            throw structural_error("duplicate edge (" + std::to_string(e.from) + "," +
                                   std::to_string(e.to) + ",bit=" + std::to_string(e.bit) + ")");
    }
}

CompiledGraph::CompiledGraph(const QbpGraph& g) : g_(g) {
    check_structure(g_);
    id_to_index_.reserve(g_.nodes.size());
    for (int i = 0; i < static_cast<int>(g_.nodes.size()); ++i) id_to_index_[g_.nodes[i].id] = i;
    start_index_ = id_to_index_.at(g_.start);
    out_.resize(g_.nodes.size());
    in_.resize(g_.nodes.size());
    for (const auto& e : g_.edges) {
        int f = id_to_index_.at(e.from);
        int t = id_to_index_.at(e.to);
        if (e.bit == -1) {
            out_[f][0].emplace_back(t, e.amp);
            out_[f][1].emplace_back(t, e.amp);
        } else {
            out_[f][e.bit].emplace_back(t, e.amp);
        }
        in_[t].emplace_back(f, e.bit, e.amp);
    }
}

}  // namespace qbp
