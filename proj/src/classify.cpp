#include "qbp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace qbp {

namespace {

// Topological order over nodes reachable from the start; empty optional if a
// reachable cycle exists.
std::optional<std::vector<int>> topo_reachable(const CompiledGraph& cg, std::vector<char>& reach) {
    const int n = cg.num_nodes();
    reach.assign(n, 0);
    std::deque<int> bfs{cg.start_index()};
    reach[cg.start_index()] = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop_front();
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b))
                if (!reach[w]) {
                    reach[w] = 1;
                    bfs.push_back(w);
                }
    }
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!reach[v]) continue;
        for (const auto& [u, bit, amp] : cg.in(v))
            if (reach[u]) indeg[v] += (bit == -1 ? 1 : 1);
    }
    // in() lists unlabeled edges once (bit -1) but out() duplicates them per
    // bit; count edges as recorded in in().
    std::vector<int> order;
    std::queue<int> q;
    for (int v = 0; v < n; ++v)
        if (reach[v] && indeg[v] == 0) q.push(v);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        // successors, each in-edge counted once
        std::vector<int> succ;
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b)) succ.push_back(w);
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (int w : succ) {
            int cnt = 0;
            for (const auto& [u, bit, amp] : cg.in(w))
                if (u == v) ++cnt;
            indeg[w] -= cnt;
            if (indeg[w] == 0) q.push(w);
        }
    }
    int reach_count = 0;
    for (int v = 0; v < n; ++v) reach_count += reach[v];
    if (static_cast<int>(order.size()) != reach_count) return std::nullopt;
    return order;
}

}  // namespace

ClassInfo classify(const CompiledGraph& cg) {
    ClassInfo info;
    const int n = cg.num_nodes();
    std::vector<char> reach;
    auto topo_opt = topo_reachable(cg, reach);
    if (!topo_opt) {
        info.acyclic = false;
        return info;
    }
    const auto& topo = *topo_opt;

    // Leveled: distance from the start is unique per reachable node.
    std::vector<int> dmin(n, -1), dmax(n, -1);
    dmin[cg.start_index()] = dmax[cg.start_index()] = 0;
    bool leveled = true;
    for (int v : topo) {
        if (dmin[v] < 0) continue;  // reachable only through... cannot happen in topo of reachables
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b)) {
                if (dmin[w] < 0) {
                    dmin[w] = dmin[v] + 1;
                    dmax[w] = dmax[v] + 1;
                } else {
                    dmin[w] = std::min(dmin[w], dmin[v] + 1);
                    dmax[w] = std::max(dmax[w], dmax[v] + 1);
                }
            }
    }
    for (int v : topo)
        if (dmin[v] != dmax[v]) leveled = false;
    info.leveled = leveled;
    if (leveled) {
        std::vector<int> level_size;
        for (int v : topo) {
            if (static_cast<int>(level_size.size()) <= dmin[v]) level_size.resize(dmin[v] + 1, 0);
            ++level_size[dmin[v]];
        }
        info.width = *std::max_element(level_size.begin(), level_size.end());
    }

    const int nv = cg.graph().num_vars;

    // read_once: no path reads the same variable twice. Per-variable forward
    // sweep from the successors of that variable's nodes.
    info.read_once = true;
    std::vector<std::vector<int>> nodes_of_var(nv + 1);
    for (int v : topo)
        if (cg.node(v).kind == NodeKind::Var) nodes_of_var[cg.node(v).var].push_back(v);
    // Which labeled vars are reachable strictly below each var's nodes; also
    // feeds the OBDD precedence relation.
    std::vector<std::vector<char>> var_reaches(nv + 1, std::vector<char>(nv + 1, 0));
    for (int x = 1; x <= nv; ++x) {
        if (nodes_of_var[x].empty()) continue;
        std::vector<char> seen(n, 0);
        std::deque<int> q;
        for (int v : nodes_of_var[x])
            for (int b = 0; b < 2; ++b)
                for (const auto& [w, amp] : cg.out(v, b))
                    if (reach[w] && !seen[w]) {
                        seen[w] = 1;
                        q.push_back(w);
                    }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (cg.node(v).kind == NodeKind::Var) var_reaches[x][cg.node(v).var] = 1;
            for (int b = 0; b < 2; ++b)
                for (const auto& [w, amp] : cg.out(v, b))
                    if (reach[w] && !seen[w]) {
                        seen[w] = 1;
                        q.push_back(w);
                    }
        }
        if (var_reaches[x][x]) info.read_once = false;
    }

    // regular: every start-to-sink path carries exactly num_vars labeled nodes.
    bool regular = info.read_once;
    if (regular) {
        std::vector<int> fmin(n, -1), fmax(n, -1);
        auto lab = [&](int v) { return cg.node(v).kind == NodeKind::Var ? 1 : 0; };
        fmin[cg.start_index()] = fmax[cg.start_index()] = lab(cg.start_index());
        for (int v : topo) {
            for (int b = 0; b < 2; ++b)
                for (const auto& [w, amp] : cg.out(v, b)) {
                    int cand_min = fmin[v] + lab(w);
                    int cand_max = fmax[v] + lab(w);
                    if (fmin[w] < 0) {
                        fmin[w] = cand_min;
                        fmax[w] = cand_max;
                    } else {
                        fmin[w] = std::min(fmin[w], cand_min);
                        fmax[w] = std::max(fmax[w], cand_max);
                    }
                }
        }
        bool any_sink = false;
        for (int v : topo)
            if (cg.is_sink(v)) {
                any_sink = true;
                if (fmin[v] != nv || fmax[v] != nv) regular = false;
            }
        if (!any_sink) regular = false;
    }
    info.regular_read_once = regular;

    // OBDD order: precedence digraph var a -> var b when some path reads a
    // before b; consistent global order exists iff acyclic. Kahn with a
    // min-heap gives the lexicographically smallest witness order.
    if (info.read_once) {
        std::vector<int> present;
        for (int x = 1; x <= nv; ++x)
            if (!nodes_of_var[x].empty()) present.push_back(x);
        std::vector<int> indeg(nv + 1, 0);
        for (int a : present)
            for (int b : present)
                if (a != b && var_reaches[a][b]) ++indeg[b];
        std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
        for (int x : present)
            if (indeg[x] == 0) heap.push(x);
        std::vector<int> order;
        while (!heap.empty()) {
            int a = heap.top();
            heap.pop();
            order.push_back(a);
            for (int b : present)
                if (a != b && var_reaches[a][b] && --indeg[b] == 0) heap.push(b);
        }
        if (order.size() == present.size()) info.obdd_order = order;
    }

    // Reversible classical BP: {0,1} amplitudes, deterministic rows, and each
    // node entered by at most one 0-edge and one 1-edge whose sources share a
    // variable label.
    bool rev = true;
    for (int v : topo) {
        if (cg.is_sink(v)) continue;
        for (int b = 0; b < (cg.is_unlabeled(v) ? 1 : 2); ++b) {
            int nonzero = 0;
            for (const auto& [w, amp] : cg.out(v, b)) {
                if (std::abs(amp) == 0.0) continue;
                ++nonzero;
                if (std::abs(amp - cplx(1.0, 0.0)) > 1e-12) rev = false;
            }
            if (nonzero != 1) rev = false;
        }
    }
    for (int w : topo) {
        int cnt[2] = {0, 0};
        int label = -2;
        for (const auto& [u, bit, amp] : cg.in(w)) {
            if (!reach[u] || std::abs(amp) == 0.0) continue;
            if (bit == -1) {
                ++cnt[0];
                ++cnt[1];
            } else {
                ++cnt[bit];
            }
            int lu = cg.is_unlabeled(u) ? 0 : cg.node(u).var;
            if (label == -2) label = lu;
            else if (label != lu) rev = false;
        }
        if (cnt[0] > 1 || cnt[1] > 1) rev = false;
    }
    info.reversible_classical = rev;

    return info;
}

}  // namespace qbp
