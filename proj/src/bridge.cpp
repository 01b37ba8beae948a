#include "qbp/bridge.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "qbp/sim.hpp"

namespace qbp::bridge {

namespace {

std::vector<int> levels_of(const CompiledGraph& cg, int& depth) {
    auto d = uniform_depth(cg);
    if (!d)
        throw std::invalid_argument(
            "bridge: graph must be leveled with all sinks on the last level");
    depth = *d;
    std::vector<int> level(cg.num_nodes(), -1);
    level[cg.start_index()] = 0;
    std::deque<int> q{cg.start_index()};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b))
                if (level[w] < 0) {
                    level[w] = level[v] + 1;
                    q.push_back(w);
                }
    }
    return level;
}

// forward closure from a seed set, optionally not expanding past `stop`
std::vector<char> closure(const CompiledGraph& cg, const std::vector<int>& seeds,
                          const std::set<int>& stop, bool include_seeds = true) {
    std::vector<char> in(cg.num_nodes(), 0);
    std::deque<int> q;
    for (int v : seeds) {
        in[v] = 1;
        if (!stop.count(v)) q.push_back(v);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b))
                if (!in[w]) {
                    in[w] = 1;
                    if (!stop.count(w)) q.push_back(w);
                }
    }
    if (!include_seeds)
        for (int v : seeds) in[v] = 0;
    return in;
}

}  // namespace

PartDecomposition decompose(const CompiledGraph& cg, int x_var, int y_var) {
    PartDecomposition dec;
    dec.x_var = x_var;
    dec.y_var = y_var;
    dec.level = levels_of(cg, dec.depth);

    const int n = cg.num_nodes();
    for (int v = 0; v < n; ++v) {
        if (dec.level[v] < 0) continue;
        if (cg.node(v).kind == NodeKind::Var && cg.node(v).var != x_var &&
            cg.node(v).var != y_var)
            throw std::invalid_argument(
                "decompose: graph has labeled nodes outside the unfixed pair");
    }

    // labeled-node count strictly before each node, along every path
    std::vector<int> lmin(n, -1), lmax(n, -1);
    std::vector<std::vector<int>> by_level(dec.depth + 1);
    for (int v = 0; v < n; ++v)
        if (dec.level[v] >= 0) by_level[dec.level[v]].push_back(v);
    lmin[cg.start_index()] = lmax[cg.start_index()] = 0;
    for (int l = 0; l < dec.depth; ++l)
        for (int v : by_level[l]) {
            int inc = cg.node(v).kind == NodeKind::Var ? 1 : 0;
            for (int b = 0; b < 2; ++b)
                for (const auto& [w, amp] : cg.out(v, b)) {
                    if (lmin[w] < 0) {
                        lmin[w] = lmin[v] + inc;
                        lmax[w] = lmax[v] + inc;
                    } else {
                        lmin[w] = std::min(lmin[w], lmin[v] + inc);
                        lmax[w] = std::max(lmax[w], lmax[v] + inc);
                    }
                }
        }

    std::set<int> t_set;
    for (int v = 0; v < n; ++v) {
        if (dec.level[v] < 0) continue;
        const Node& nd = cg.node(v);
        if (nd.kind == NodeKind::Var) {
            if (lmin[v] != lmax[v])
                throw std::invalid_argument("decompose: pair variable read order is path dependent");
            if (lmin[v] == 0) {
                (nd.var == x_var ? dec.s_x : dec.s_y).push_back(v);
            } else if (lmin[v] == 1) {
                for (int b = 0; b < 2; ++b)
                    for (const auto& [w, amp] : cg.out(v, b)) {
                        if (!t_set.count(w)) {
                            t_set.insert(w);
                            (nd.var == x_var ? dec.t_y : dec.t_x).push_back(w);
                        }
                    }
            } else {
                throw std::invalid_argument("decompose: a path reads a pair variable twice");
            }
        } else if (nd.kind == NodeKind::Sink) {
            if (lmin[v] != 2 || lmax[v] != 2)
                throw std::invalid_argument(
                    "decompose: some path does not read both pair variables exactly once");
        }
    }
    // successors of second-read x nodes belong to the S_y-side middle (t_x);
    // check the two T sides are disjoint
    {
        std::set<int> tx(dec.t_x.begin(), dec.t_x.end());
        for (int v : dec.t_y)
            if (tx.count(v)) throw std::invalid_argument("decompose: T sides intersect");
    }
    dec.degenerate = dec.s_x.empty() || dec.s_y.empty();

    std::vector<int> s_all = dec.s_x;
    s_all.insert(s_all.end(), dec.s_y.begin(), dec.s_y.end());
    std::set<int> s_stop(s_all.begin(), s_all.end());
    std::set<int> t_stop(t_set.begin(), t_set.end());

    // top: before the S cut
    auto top_in = closure(cg, {cg.start_index()}, s_stop);
    for (int v = 0; v < n; ++v)
        if (top_in[v] && !s_stop.count(v)) dec.top.push_back(v);
    for (int v : dec.top)
        if (cg.node(v).kind == NodeKind::Var)
            throw std::invalid_argument("decompose: labeled node above the S cut");

    // middle parts: S_side to T (inclusive)
    auto mid_x_in = closure(cg, dec.s_x, t_stop);
    auto mid_y_in = closure(cg, dec.s_y, t_stop);
    for (int v = 0; v < n; ++v) {
        if (mid_x_in[v] && mid_y_in[v])
            throw std::invalid_argument("decompose: middle parts are not node disjoint");
        if (mid_x_in[v]) dec.middle_x.push_back(v);
        if (mid_y_in[v]) dec.middle_y.push_back(v);
    }
    // paths from S_x must end in T_y
    {
        std::set<int> ty(dec.t_y.begin(), dec.t_y.end());
        std::set<int> tx(dec.t_x.begin(), dec.t_x.end());
        for (int v : dec.middle_x)
            if (t_stop.count(v) && !ty.count(v))
                throw std::invalid_argument("decompose: S_x path reaches T_x");
        for (int v : dec.middle_y)
            if (t_stop.count(v) && !tx.count(v))
                throw std::invalid_argument("decompose: S_y path reaches T_y");
    }

    auto bottom_in = closure(cg, std::vector<int>(t_set.begin(), t_set.end()), {}, true);
    for (int v = 0; v < n; ++v)
        if (bottom_in[v] && !t_set.count(v)) dec.bottom.push_back(v);
    for (int v : dec.bottom)
        if (cg.node(v).kind == NodeKind::Var)
            throw std::invalid_argument("decompose: labeled node below the T cut");

    // entry amplitudes: path sums over the unlabeled top
    {
        std::vector<cplx> amp(n, cplx(0.0, 0.0));
        amp[cg.start_index()] = 1.0;
        for (int l = 0; l < dec.depth; ++l)
            for (int v : by_level[l]) {
                if (!(top_in[v] && !s_stop.count(v))) continue;
                for (const auto& [w, a] : cg.out_any(v)) amp[w] += amp[v] * a;
            }
        // start node may itself be in S (degenerate start-labeled case)
        for (int v : s_all) dec.entry_amplitudes[cg.node(v).id] = amp[v];
    }

    // exit amplitudes: backward path sums over the unlabeled bottom
    {
        // beta[v] maps sink id -> amplitude
        std::vector<std::map<int, cplx>> beta(n);
        for (int l = dec.depth; l >= 0; --l)
            for (int v : by_level[l]) {
                if (cg.node(v).kind == NodeKind::Sink) {
                    beta[v][cg.node(v).id] = 1.0;
                    continue;
                }
                if (!bottom_in[v]) continue;
                for (const auto& [w, a] : cg.out_any(v))
                    for (const auto& [sid, bamp] : beta[w]) beta[v][sid] += a * bamp;
            }
        for (int v : t_set)
            for (const auto& [sid, bamp] : beta[v])
                dec.exit_amplitudes[{cg.node(v).id, sid}] = bamp;
    }

    return dec;
}

DummyChained insert_dummy_chains(const CompiledGraph& cg, const PartDecomposition& dec) {
    const QbpGraph& g = cg.graph();
    DummyChained out;
    out.x_var = dec.x_var;
    out.y_var = dec.y_var;
    out.depth = dec.depth + 1;
    out.degenerate = dec.degenerate;

    int next_id = 0;
    for (const auto& nd : g.nodes) next_id = std::max(next_id, nd.id + 1);

    QbpGraph& grf = out.graph;
    grf.num_vars = g.num_vars;

    std::set<int> t_set;
    for (int v : dec.t_x) t_set.insert(v);
    for (int v : dec.t_y) t_set.insert(v);
    std::set<int> middle;
    for (int v : dec.middle_x) middle.insert(v);
    for (int v : dec.middle_y) middle.insert(v);

    // middle nodes minus T keep their identity; sinks are kept
    std::set<int> keep;  // dense indices
    for (int v : middle)
        if (!t_set.count(v)) keep.insert(v);
    for (int v = 0; v < cg.num_nodes(); ++v)
        if (dec.level[v] >= 0 && cg.is_sink(v)) keep.insert(v);
    for (int v : keep) grf.nodes.push_back(cg.node(v));

    for (int v : dec.s_x) out.s_x_ids.push_back(cg.node(v).id);
    for (int v : dec.s_y) out.s_y_ids.push_back(cg.node(v).id);

    // new source + entry chains
    std::vector<int> s_all = dec.s_x;
    s_all.insert(s_all.end(), dec.s_y.begin(), dec.s_y.end());
    bool start_in_s = false;
    for (int v : s_all)
        if (v == cg.start_index()) start_in_s = true;
    if (start_in_s) {
        if (s_all.size() != 1)
            throw std::invalid_argument("insert_dummy_chains: labeled start with multiple entries");
        grf.start = g.start;
    } else {
        int src = next_id++;
        grf.nodes.push_back({src, NodeKind::Unlabeled, 0, 0});
        grf.start = src;
        for (int v : s_all) {
            cplx alpha = dec.entry_amplitudes.at(cg.node(v).id);
            int len = dec.level[v] - 1;
            int prev = src;
            cplx carry = alpha;
            for (int k = 0; k < len; ++k) {
                int c = next_id++;
                grf.nodes.push_back({c, NodeKind::Unlabeled, 0, 0});
                grf.edges.push_back({prev, c, -1, carry});
                carry = 1.0;
                prev = c;
            }
            grf.edges.push_back({prev, cg.node(v).id, -1, carry});
        }
    }

    // copy middle edges; redirect edges into T to the new chains
    std::map<int, int> chain_head;  // T dense index -> head node id
    for (int v : t_set) {
        int d = dec.depth - dec.level[v];
        int prev = -1;
        int head = -1;
        for (int k = 0; k < d + 1; ++k) {
            int c = next_id++;
            grf.nodes.push_back({c, NodeKind::Unlabeled, 0, 0});
            if (k == 0) head = c;
            else grf.edges.push_back({prev, c, -1, cplx(1.0, 0.0)});
            prev = c;
        }
        chain_head[v] = head;
        for (const auto& [key, beta] : dec.exit_amplitudes) {
            if (key.first != cg.node(v).id) continue;
            grf.edges.push_back({prev, key.second, -1, beta});
        }
    }

    for (const auto& e : g.edges) {
        int from = cg.index_of(e.from);
        if (!keep.count(from)) continue;
        int to = cg.index_of(e.to);
        if (t_set.count(to)) {
            grf.edges.push_back({e.from, chain_head.at(to), e.bit, e.amp});
        } else if (keep.count(to) && middle.count(to)) {
            grf.edges.push_back(e);
        }
        // edges into the old bottom (beyond T) cannot exist; edges from kept
        // sinks do not exist
    }

    return out;
}

namespace {

// Completes a partial isometry on C^W (first `filled` columns orthonormal)
// to a unitary, deterministically, by Gram-Schmidt over the identity basis.
MatrixXcd complete_unitary(MatrixXcd m, int filled) {
    const int w = static_cast<int>(m.rows());
    int col = filled;
    for (int cand = 0; cand < w && col < w; ++cand) {
        VectorXcd v = VectorXcd::Zero(w);
        v[cand] = 1.0;
        for (int j = 0; j < col; ++j) v -= m.col(j).dot(v) * m.col(j);
        // one re-orthogonalization pass for numerical safety
        for (int j = 0; j < col; ++j) v -= m.col(j).dot(v) * m.col(j);
        double nrm = v.norm();
        if (nrm > 1e-7) {
            m.col(col) = v / nrm;
            ++col;
        }
    }
    if (col != w) throw std::logic_error("complete_unitary: completion failed");
    return m;
}

struct BlockBuild {
    int ell_s = 0;
    int m_level = 0;
    std::vector<std::vector<int>> slices;  // dense node indices per level ell_s..depth
    int width = 0;
};

BlockBuild analyze_block(const CompiledGraph& cg, const std::vector<int>& levels, int depth,
                         const std::vector<int>& s_nodes, int own_var, int opp_var) {
    BlockBuild b;
    b.ell_s = levels[s_nodes[0]];
    for (int v : s_nodes)
        if (levels[v] != b.ell_s)
            throw std::invalid_argument("extract_protocol: entry nodes on multiple levels");
    std::vector<char> reach = closure(cg, s_nodes, {});
    b.slices.assign(depth - b.ell_s + 1, {});
    b.m_level = -1;
    for (int v = 0; v < cg.num_nodes(); ++v) {
        if (!reach[v] || levels[v] < 0) continue;
        if (levels[v] < b.ell_s) throw std::logic_error("block reaches above its entry level");
        b.slices[levels[v] - b.ell_s].push_back(v);
        if (cg.node(v).kind == NodeKind::Var) {
            if (cg.node(v).var == opp_var) {
                // message cut: the first level where the opposite variable
                // can be read (several levels may read it in the degenerate
                // one-sided case)
                if (b.m_level == -1 || levels[v] < b.m_level) b.m_level = levels[v];
            } else if (cg.node(v).var == own_var && levels[v] != b.ell_s) {
                throw std::invalid_argument("extract_protocol: own variable re-read below entry");
            }
        }
    }
    if (b.m_level == -1)
        throw std::invalid_argument("extract_protocol: block never reads the opposite variable");
    for (auto& s : b.slices) {
        std::sort(s.begin(), s.end());
        b.width = std::max(b.width, static_cast<int>(s.size()));
    }
    return b;
}

// Register transition from slice `l` to `l+1` under a fixed bit choice for
// the variable nodes of the slice (unlabeled nodes ignore it).
MatrixXcd slice_unitary(const CompiledGraph& cg, const BlockBuild& b, int rel_level, int bit,
                        int width) {
    const auto& cur = b.slices[rel_level];
    const auto& nxt = b.slices[rel_level + 1];
    std::map<int, int> pos;
    for (size_t i = 0; i < nxt.size(); ++i) pos[nxt[i]] = static_cast<int>(i);
    MatrixXcd m = MatrixXcd::Zero(width, width);
    for (size_t s = 0; s < cur.size(); ++s) {
        int v = cur[s];
        const auto& edges =
            cg.node(v).kind == NodeKind::Unlabeled ? cg.out_any(v) : cg.out(v, bit);
        for (const auto& [w, amp] : edges) m(pos.at(w), static_cast<int>(s)) += amp;
    }
    return complete_unitary(std::move(m), static_cast<int>(cur.size()));
}

}  // namespace

ExtractedProtocol extract_protocol(const DummyChained& dc) {
    CompiledGraph cg(dc.graph);
    ExtractedProtocol ep;
    ep.x_var = dc.x_var;
    ep.y_var = dc.y_var;
    ep.degenerate = dc.degenerate;
    ep.node_dim = cg.num_nodes();

    int depth = 0;
    std::vector<int> levels = levels_of(cg, depth);
    if (depth != dc.depth) throw std::logic_error("extract_protocol: depth mismatch");

    struct Side {
        std::vector<int> s_dense;
        int own_var, opp_var;
        double q = 0.0;
    };
    std::vector<Side> sides;
    auto to_dense = [&](const std::vector<int>& ids) {
        std::vector<int> out;
        for (int id : ids) out.push_back(cg.index_of(id));
        return out;
    };
    if (!dc.s_x_ids.empty()) sides.push_back({to_dense(dc.s_x_ids), dc.x_var, dc.y_var, 0.0});
    if (!dc.s_y_ids.empty()) sides.push_back({to_dense(dc.s_y_ids), dc.y_var, dc.x_var, 0.0});
    if (sides.empty()) throw std::invalid_argument("extract_protocol: no entry nodes");

    // entry amplitudes are the weights of the source edges reaching each
    // chain; recover them by simulating the unlabeled top of the chained
    // graph down to each entry level
    std::map<int, cplx> alpha;  // dense node -> amplitude
    {
        std::map<int, cplx> state{{cg.start_index(), cplx(1.0, 0.0)}};
        std::set<int> s_dense_all;
        for (const auto& sd : sides)
            for (int v : sd.s_dense) s_dense_all.insert(v);
        for (int l = 0; l < depth && !state.empty(); ++l) {
            std::map<int, cplx> next;
            for (const auto& [v, a] : state) {
                if (s_dense_all.count(v)) {
                    alpha[v] += a;
                    continue;
                }
                if (cg.node(v).kind != NodeKind::Unlabeled) continue;
                for (const auto& [w, amp] : cg.out_any(v)) next[w] += a * amp;
            }
            state.swap(next);
        }
    }

    for (auto& sd : sides) {
        for (int v : sd.s_dense) sd.q += std::norm(alpha.count(v) ? alpha[v] : cplx(0.0, 0.0));
    }
    double qtot = 0.0;
    for (const auto& sd : sides) qtot += sd.q;
    if (std::abs(qtot - 1.0) > 1e-9)
        throw std::invalid_argument("extract_protocol: entry weights do not sum to 1");

    for (const auto& sd : sides) {
        BlockBuild b = analyze_block(cg, levels, depth, sd.s_dense, sd.own_var, sd.opp_var);
        proto::Subprotocol sub;
        sub.partition.alice_vars = {sd.own_var};
        sub.partition.bob_vars = {sd.opp_var};
        sub.work_dim = b.width;
        sub.work_init = VectorXcd::Zero(b.width);
        const auto& entry_slice = b.slices[0];
        for (size_t i = 0; i < entry_slice.size(); ++i) {
            cplx a = alpha.count(entry_slice[i]) ? alpha[entry_slice[i]] : cplx(0.0, 0.0);
            sub.work_init[static_cast<int>(i)] = a / std::sqrt(sd.q);
        }
        const int m_rel = b.m_level - b.ell_s;
        const int last_rel = depth - b.ell_s;
        for (int bit = 0; bit < 2; ++bit) {
            MatrixXcd acc = MatrixXcd::Identity(b.width, b.width);
            for (int l = 0; l < m_rel; ++l) acc = slice_unitary(cg, b, l, bit, b.width) * acc;
            sub.alice_ops.push_back({acc});
        }
        for (int bit = 0; bit < 2; ++bit) {
            MatrixXcd acc = MatrixXcd::Identity(b.width, b.width);
            for (int l = m_rel; l < last_rel; ++l)
                acc = slice_unitary(cg, b, l, bit, b.width) * acc;
            sub.bob_ops.push_back({acc});
        }
        ep.protocol.subs.push_back(std::move(sub));
        ep.protocol.initial_amplitudes.push_back(std::sqrt(sd.q));

        MatrixXcd embed = MatrixXcd::Zero(cg.num_nodes(), b.width);
        const auto& final_slice = b.slices[last_rel];
        for (size_t i = 0; i < final_slice.size(); ++i) embed(final_slice[i], static_cast<int>(i)) = 1.0;
        ep.embeddings.push_back(std::move(embed));
        if (sd.own_var == dc.x_var) ep.q_x = sd.q;
        else ep.q_y = sd.q;
    }

    // per-block sink-label POVM
    const int dim = ep.protocol.total_dim();
    MatrixXcd m0 = MatrixXcd::Zero(dim, dim), m1 = MatrixXcd::Zero(dim, dim);
    int off = 0;
    for (size_t s = 0; s < sides.size(); ++s) {
        BlockBuild b = analyze_block(cg, levels, depth, sides[s].s_dense, sides[s].own_var,
                                     sides[s].opp_var);
        const auto& final_slice = b.slices[depth - b.ell_s];
        for (int i = 0; i < ep.protocol.subs[s].work_dim; ++i) {
            int label = 0;
            if (i < static_cast<int>(final_slice.size())) {
                const Node& nd = cg.node(final_slice[i]);
                label = nd.kind == NodeKind::Sink ? nd.label : 0;
            }
            (label ? m1 : m0)(off + i, off + i) = 1.0;
        }
        off += ep.protocol.subs[s].work_dim;
    }
    ep.protocol.m0 = m0;
    ep.protocol.m1 = m1;
    return ep;
}

VectorXcd result_state_nodes(const ExtractedProtocol& ep, int c, int d) {
    VectorXcd out = VectorXcd::Zero(ep.node_dim);
    for (size_t s = 0; s < ep.protocol.subs.size(); ++s) {
        const auto& sub = ep.protocol.subs[s];
        int a_val = sub.partition.alice_vars[0] == ep.x_var ? c : d;
        int b_val = sub.partition.bob_vars[0] == ep.x_var ? c : d;
        VectorXcd w = sub.bob_ops[b_val][0] * (sub.alice_ops[a_val][0] * sub.work_init);
        out += ep.protocol.initial_amplitudes[s] * (ep.embeddings[s] * w);
    }
    return out;
}

std::pair<double, double> output_distribution_nodes(const ExtractedProtocol& ep,
                                                    const CompiledGraph& chained_cg, int c,
                                                    int d) {
    VectorXcd psi = result_state_nodes(ep, c, d);
    double p0 = 0.0, p1 = 0.0;
    for (int v = 0; v < chained_cg.num_nodes(); ++v) {
        if (!chained_cg.is_sink(v)) continue;
        double mass = std::norm(psi[v]);
        (chained_cg.node(v).label ? p1 : p0) += mass;
    }
    return {p0, p1};
}

OrthReport subspace_orthogonality_check(const DummyChained& dc, double tol) {
    CompiledGraph cg(dc.graph);
    int depth = 0;
    std::vector<int> levels = levels_of(cg, depth);

    auto evolve_levels = [&](int start_node, int c, int d) {
        // states at every level from the node's own level through the sinks
        std::vector<std::map<int, cplx>> states;
        std::map<int, cplx> cur{{start_node, cplx(1.0, 0.0)}};
        states.push_back(cur);
        for (int l = levels[start_node]; l < depth; ++l) {
            std::map<int, cplx> next;
            for (const auto& [v, a] : cur) {
                const Node& nd = cg.node(v);
                int bit = 0;
                if (nd.kind == NodeKind::Var) bit = nd.var == dc.x_var ? c : d;
                const auto& edges =
                    nd.kind == NodeKind::Unlabeled ? cg.out_any(v) : cg.out(v, bit);
                for (const auto& [w, amp] : edges) next[w] += a * amp;
            }
            states.push_back(next);
            cur = states.back();
        }
        return states;
    };

    OrthReport rep;
    rep.pass = true;
    for (int v1_id : dc.s_x_ids)
        for (int v2_id : dc.s_y_ids) {
            int v1 = cg.index_of(v1_id), v2 = cg.index_of(v2_id);
            for (int z1 = 0; z1 < 4; ++z1)
                for (int z2 = 0; z2 < 4; ++z2) {
                    auto st1 = evolve_levels(v1, z1 & 1, (z1 >> 1) & 1);
                    auto st2 = evolve_levels(v2, z2 & 1, (z2 >> 1) & 1);
                    int l1 = levels[v1], l2 = levels[v2];
                    for (int l = std::max(l1, l2); l <= depth; ++l) {
                        const auto& a = st1[l - l1];
                        const auto& b = st2[l - l2];
                        cplx inner(0.0, 0.0);
                        for (const auto& [node, amp] : a) {
                            auto it = b.find(node);
                            if (it != b.end()) inner += std::conj(amp) * it->second;
                        }
                        rep.max_abs_inner = std::max(rep.max_abs_inner, std::abs(inner));
                    }
                }
        }
    rep.pass = rep.max_abs_inner <= tol;
    return rep;
}

}  // namespace qbp::bridge
