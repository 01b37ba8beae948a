#include "qbp/builders.hpp"

#include <Eigen/Dense>
#include <map>
#include <random>

namespace qbp {

int smallest_prime_after(int n) {
    if (n < 1 || n > 1000000) throw std::invalid_argument("smallest_prime_after: n out of range");
    auto is_prime = [](int m) {
        if (m < 2) return false;
        for (int d = 2; static_cast<long long>(d) * d <= m; ++d)
            if (m % d == 0) return false;
        return true;
    };
    int p = n + 1;
    while (!is_prime(p)) ++p;
    return p;
}

int weighted_sum(const std::vector<uint8_t>& x, int q) {
    if (q < 2) throw std::invalid_argument("weighted_sum: modulus must be >= 2");
    long long s = 0;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i]) s += static_cast<long long>(i) + 1;
    return static_cast<int>(s % q);
}

int weighted_sum_subset(const std::vector<uint8_t>& x, const std::vector<int>& indices, int q) {
    if (q < 2) throw std::invalid_argument("weighted_sum_subset: modulus must be >= 2");
    long long s = 0;
    for (int i : indices) {
        if (i < 1 || i > static_cast<int>(x.size()))
            throw std::invalid_argument("weighted_sum_subset: index out of range");
        if (x[i - 1]) s += i;
    }
    return static_cast<int>(s % q);
}

int ws_eval(const std::vector<uint8_t>& x) {
    int n = static_cast<int>(x.size());
    int s = weighted_sum(x, smallest_prime_after(n));
    if (s >= 1 && s <= n) return x[s - 1];
    return 0;
}

int mws_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("mws_eval: arity mismatch");
    int n = static_cast<int>(x.size());
    int p = smallest_prime_after(n);
    int sx = weighted_sum(x, p);
    int sy = weighted_sum(y, p);
    if (sx == sy && sx >= 1 && sx <= n) return x[sx - 1] ^ y[sx - 1];
    return 0;
}

int disj_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("disj_eval: arity mismatch");
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] && y[i]) return 0;
    return 1;
}

int nd_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y) {
    return 1 - disj_eval(x, y);
}

int ind_eval(const std::vector<uint8_t>& u, int v) {
    if (v < 1 || v > static_cast<int>(u.size()))
        throw std::invalid_argument("ind_eval: index out of range");
    return u[v - 1];
}

namespace {

std::pair<std::vector<uint8_t>, std::vector<uint8_t>> split_flat(const Assignment& a) {
    if (a.size() % 2 != 0) throw std::invalid_argument("flat assignment must have even length");
    size_t n = a.size() / 2;
    return {std::vector<uint8_t>(a.begin(), a.begin() + n),
            std::vector<uint8_t>(a.begin() + n, a.end())};
}

}  // namespace

int mws_eval_flat(const Assignment& a) {
    auto [x, y] = split_flat(a);
    return mws_eval(x, y);
}
int disj_eval_flat(const Assignment& a) {
    auto [x, y] = split_flat(a);
    return disj_eval(x, y);
}
int nd_eval_flat(const Assignment& a) {
    auto [x, y] = split_flat(a);
    return nd_eval(x, y);
}

// ---------------------------------------------------------------------------
// MWS construction.
//
// Two reversible deterministic branches track the pair of weighted sums
// (i, j) = (s_n(x), s_n(y)) in their column index and fold the answer bit
// into a flip register b. Branch 0 reads x first and flips b by y_k at the
// y_k read when k equals the already complete x sum. Branch 1 reads the y
// block before its x block so that j is complete when the x_k flips fire.
// The four (branch, b) start amplitudes (-1)^b/2 set up a Deutsch-Jozsa
// phase pair, and an unlabeled readout level realizes the Hadamard-basis
// measurement: node (a,b,i) of the diagonal column group is wired to the
// four sinks S(r,c,i) with amplitudes (1/2)(-1)^{ar+bc}. Off-diagonal
// columns (i != j) get a one-node pad chain into a 0-sink so that every
// sink sits on the last level.
// ---------------------------------------------------------------------------

namespace {

struct MwsBuilder {
    int n, p;
    bool strict;
    QbpGraph g;
    int next_id = 0;
    // state key: (branch, pos, b, s1, s2) -> node id.
    // pos = 1..2n+1 position in the branch order (2n+1 = endpoint row).
    // Branch state meaning depends on pos; see step functions.
    std::map<std::array<int, 5>, int> ids;

    int var_x(int k) const { return k; }
    int var_y(int k) const { return n + k; }

    int node_for(std::array<int, 5> key, int var_label) {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        int id = next_id++;
        ids.emplace(key, id);
        Node nd;
        nd.id = id;
        if (var_label > 0) {
            nd.kind = NodeKind::Var;
            nd.var = var_label;
        } else {
            nd.kind = NodeKind::Unlabeled;
        }
        g.nodes.push_back(nd);
        return id;
    }

    // Variable read at a given branch position (1-based).
    int order_var(int branch, int pos) const {
        if (!strict) {
            if (branch == 0) return pos <= n ? var_x(pos) : var_y(pos - n);
            return pos <= n ? var_y(pos) : var_x(pos - n);
        }
        // strict: branch 0 = x1..xn,y1..yn; branch 1 = x1,y1..y_{n-1},yn,x2..xn
        if (branch == 0) return pos <= n ? var_x(pos) : var_y(pos - n);
        if (pos == 1) return var_x(1);
        if (pos <= n + 1) return var_y(pos - 1);
        return var_x(pos - n);
    }

    // Transition of branch state under reading bit `bit` at position pos.
    // Returns the state at pos+1.
    std::array<int, 3> step_state(int branch, int pos, std::array<int, 3> st, int bit) const {
        auto [b, s1, s2] = st;
        if (!strict) {
            if (branch == 0) {
                // pos<=n reading x_pos: s1=i_par; pos>n reading y_k: s1=i, s2=j_par
                if (pos <= n) return {b, static_cast<int>((s1 + static_cast<long long>(pos) * bit) % p), 0};
                int k = pos - n;
                int nb = b ^ (bit && k == s1 ? 1 : 0);
                return {nb, s1, static_cast<int>((s2 + static_cast<long long>(k) * bit) % p)};
            }
            // branch 1: pos<=n reading y_pos: s1=j_par; pos>n reading x_k: s1=j, s2=i_par
            if (pos <= n) return {b, static_cast<int>((s1 + static_cast<long long>(pos) * bit) % p), 0};
            int k = pos - n;
            int nb = b ^ (bit && k == s1 ? 1 : 0);
            return {nb, s1, static_cast<int>((s2 + static_cast<long long>(k) * bit) % p)};
        }
        if (branch == 0) {
            if (pos <= n) return {b, static_cast<int>((s1 + static_cast<long long>(pos) * bit) % p), 0};
            int k = pos - n;
            int nb = b ^ (bit && k == s1 ? 1 : 0);
            return {nb, s1, static_cast<int>((s2 + static_cast<long long>(k) * bit) % p)};
        }
        // strict branch 1. State layouts:
        //   pos in 1..n:    (b, m, t_par)  m = x1, t_par = partial sum of y1..y_{pos-1}
        //   pos = n+1:      (b, m, t)      about to read yn
        //   pos in n+2..2n: (b, i_par, j)  about to read x_{pos-n}
        if (pos == 1) return {b, bit, 0};
        if (pos <= n) {
            int k = pos - 1;  // reading y_k, k <= n-1
            return {b, s1, static_cast<int>((s2 + static_cast<long long>(k) * bit) % p)};
        }
        if (pos == n + 1) {
            // reading yn: j completes; apply the x1 flip if j == 1
            int j = static_cast<int>((s2 + static_cast<long long>(n) * bit) % p);
            int nb = b ^ (j == 1 ? s1 : 0);
            return {nb, s1, j};  // s1 = m doubles as i_par = x1
        }
        int k = pos - n;  // reading x_k, k >= 2
        int nb = b ^ (bit && k == s2 ? 1 : 0);
        return {nb, static_cast<int>((s1 + static_cast<long long>(k) * bit) % p), s2};
    }

    // Endpoint column of a pos = 2n+1 state: (b, i, j).
    std::array<int, 3> endpoint(int branch, std::array<int, 3> st) const {
        auto [b, s1, s2] = st;
        if (!strict) {
            if (branch == 0) return {b, s1, s2};  // (b, i, j_par=j)
            return {b, s2, s1};                   // branch 1 stores (j, i_par)
        }
        if (branch == 0) return {b, s1, s2};
        return {b, s1, s2};  // strict branch 1: (b, i_par, j)
    }

    QbpGraph build() {
        g.num_vars = 2 * n;

        // Readout nodes R(a,b,i) for diagonal columns, sinks S(r,c,i),
        // pads and 0-sinks for off-diagonal columns; created on demand.
        std::map<std::array<int, 3>, int> readout;   // (a,b,i)
        std::map<std::array<int, 3>, int> diag_sink; // (r,c,i)
        std::map<std::array<int, 4>, int> pad;       // (a,b,i,j)

        auto sink_node = [&](int label) {
            int id = next_id++;
            Node nd;
            nd.id = id;
            nd.kind = NodeKind::Sink;
            nd.label = label;
            g.nodes.push_back(nd);
            return id;
        };

        auto get_diag_sink = [&](int r, int c, int i) {
            auto it = diag_sink.find({r, c, i});
            if (it != diag_sink.end()) return it->second;
            int id = sink_node(r);
            diag_sink.emplace(std::array<int, 3>{r, c, i}, id);
            return id;
        };

        auto get_readout = [&](int a, int b, int i) {
            auto it = readout.find({a, b, i});
            if (it != readout.end()) return it->second;
            int id = node_for({9, a, b, i, 0}, 0);
            readout.emplace(std::array<int, 3>{a, b, i}, id);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    double amp = 0.5 * ((a * r + b * c) % 2 == 0 ? 1.0 : -1.0);
                    g.edges.push_back({id, get_diag_sink(r, c, i), -1, cplx(amp, 0.0)});
                }
            return id;
        };

        auto get_pad = [&](int a, int b, int i, int j) {
            auto it = pad.find({a, b, i, j});
            if (it != pad.end()) return it->second;
            int id = node_for({8, a, b, i, j}, 0);
            pad.emplace(std::array<int, 4>{a, b, i, j}, id);
            g.edges.push_back({id, sink_node(0), -1, cplx(1.0, 0.0)});
            return id;
        };

        auto endpoint_node = [&](int branch, std::array<int, 3> st) {
            auto [b, i, j] = endpoint(branch, st);
            if (i == j) return get_readout(branch, b, i);
            return get_pad(branch, b, i, j);
        };

        if (!strict) {
            // Unlabeled source into the four row-1 states.
            int src = node_for({7, 0, 0, 0, 0}, 0);
            g.start = g.nodes[0].id;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    int t = node_for({a, 1, b, 0, 0}, order_var(a, 1));
                    double amp = 0.5 * (b == 0 ? 1.0 : -1.0);
                    g.edges.push_back({src, t, -1, cplx(amp, 0.0)});
                }
            expand_branches(endpoint_node, 1);
        } else {
            // Labeled x1 source feeding both branches at position 2.
            int src = node_for({7, 0, 0, 0, 0}, var_x(1));
            g.start = g.nodes[0].id;
            for (int bit = 0; bit < 2; ++bit)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        std::array<int, 3> st = step_state(a, 1, {b, 0, 0}, bit);
                        int t = node_for({a, 2, st[0], st[1], st[2]}, order_var(a, 2));
                        double amp = 0.5 * (b == 0 ? 1.0 : -1.0);
                        g.edges.push_back({src, t, bit, cplx(amp, 0.0)});
                    }
            expand_branches(endpoint_node, 2);
        }
        return g;
    }

    template <typename EndpointFn>
    void expand_branches(EndpointFn endpoint_node, int first_pos) {
        const int last_pos = 2 * n;
        for (int pos = first_pos; pos <= last_pos; ++pos) {
            // Snapshot of states at this position (map iteration is sorted,
            // node creation order deterministic).
            std::vector<std::pair<std::array<int, 5>, int>> level;
            for (const auto& [key, id] : ids)
                if (key[0] < 2 && key[1] == pos) level.emplace_back(key, id);
            for (const auto& [key, id] : level) {
                int branch = key[0];
                std::array<int, 3> st{key[2], key[3], key[4]};
                for (int bit = 0; bit < 2; ++bit) {
                    std::array<int, 3> ns = step_state(branch, pos, st, bit);
                    int t;
                    if (pos == last_pos) t = endpoint_node(branch, ns);
                    else t = node_for({branch, pos + 1, ns[0], ns[1], ns[2]}, order_var(branch, pos + 1));
                    g.edges.push_back({id, t, bit, cplx(1.0, 0.0)});
                }
            }
        }
    }
};

}  // namespace

QbpGraph build_mws_qbp(int n, bool strict) {
    if (n < 2 || n > 32) throw std::invalid_argument("build_mws_qbp: n must be in 2..32");
    MwsBuilder b;
    b.n = n;
    b.p = smallest_prime_after(n);
    b.strict = strict;
    return b.build();
}

QbpGraph build_disj_obdd(int n) {
    if (n < 1) throw std::invalid_argument("build_disj_obdd: n must be >= 1");
    QbpGraph g;
    g.num_vars = 2 * n;
    // ids: x_k -> k-1, y_k -> n+k-1, sink1 -> 2n, sink0 -> 2n+1
    for (int k = 1; k <= n; ++k) g.nodes.push_back({k - 1, NodeKind::Var, k, 0});
    for (int k = 1; k <= n; ++k) g.nodes.push_back({n + k - 1, NodeKind::Var, n + k, 0});
    g.nodes.push_back({2 * n, NodeKind::Sink, 0, 1});
    g.nodes.push_back({2 * n + 1, NodeKind::Sink, 0, 0});
    g.start = 0;
    const cplx one(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
        int x = k - 1, y = n + k - 1;
        int next = k < n ? k : 2 * n;  // x_{k+1} or the 1-sink
        g.edges.push_back({x, next, 0, one});
        g.edges.push_back({x, y, 1, one});
        g.edges.push_back({y, next, 0, one});
        g.edges.push_back({y, 2 * n + 1, 1, one});
    }
    return g;
}

QbpGraph flip_sink_labels(const QbpGraph& g) {
    QbpGraph out = g;
    for (auto& n : out.nodes)
        if (n.kind == NodeKind::Sink) n.label = 1 - n.label;
    return out;
}

QbpGraph build_ws_flip_obdd(int n) {
    if (n < 1) throw std::invalid_argument("build_ws_flip_obdd: n must be >= 1");
    const int p = smallest_prime_after(n);
    QbpGraph g;
    g.num_vars = 2 * n;
    std::map<std::array<int, 4>, int> ids;  // (pos, b, s1, s2)
    int next_id = 0;
    auto node_for = [&](std::array<int, 4> key, int var) {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        int id = next_id++;
        ids.emplace(key, id);
        g.nodes.push_back({id, NodeKind::Var, var, 0});
        return id;
    };
    int sink0 = -1, sink1 = -1;
    auto sink = [&](int label) -> int {
        int& s = label ? sink1 : sink0;
        if (s < 0) {
            s = 100000000 + label;
            g.nodes.push_back({s, NodeKind::Sink, 0, label});
        }
        return s;
    };
    g.start = node_for({1, 0, 0, 0}, 1);
    const cplx one(1.0, 0.0);
    for (int pos = 1; pos <= 2 * n; ++pos) {
        std::vector<std::pair<std::array<int, 4>, int>> level;
        for (const auto& [key, id] : ids)
            if (key[0] == pos) level.emplace_back(key, id);
        for (const auto& [key, id] : level) {
            int b = key[1], s1 = key[2], s2 = key[3];
            for (int bit = 0; bit < 2; ++bit) {
                int nb = b, t1 = s1, t2 = s2;
                if (pos <= n) {
                    t1 = static_cast<int>((s1 + static_cast<long long>(pos) * bit) % p);
                } else {
                    int k = pos - n;
                    nb = b ^ (bit && k == s1 ? 1 : 0);
                    t2 = static_cast<int>((s2 + static_cast<long long>(k) * bit) % p);
                }
                if (pos == 2 * n) {
                    g.edges.push_back({id, sink(nb), bit, one});
                } else {
                    int var = pos + 1 <= n ? pos + 1 : n + (pos + 1 - n);
                    g.edges.push_back({id, node_for({pos + 1, nb, t1, t2}, var), bit, one});
                }
            }
        }
    }
    return g;
}

QbpGraph random_regular_qrobp(int n, int width, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_regular_qrobp: n must be >= 1");
    if (width < 2) throw std::invalid_argument("random_regular_qrobp: width must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_orthogonal = [&](int w) {
        Eigen::MatrixXd m(w, w);
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < w; ++j) m(i, j) = gauss(rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        Eigen::MatrixXd q = qr.householderQ();
        Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < w; ++j)
            if (r(j, j) < 0) q.col(j) *= -1.0;
        return q;
    };

    QbpGraph g;
    g.num_vars = n;
    const int w = width;
    // ids: level l node k -> l*w + k (level 0 has the single start node).
    auto id_of = [&](int level, int k) { return level == 0 ? 0 : (level - 1) * w + k + 1; };
    g.nodes.push_back({0, NodeKind::Var, 1, 0});
    for (int l = 1; l < n; ++l)
        for (int k = 0; k < w; ++k) g.nodes.push_back({id_of(l, k), NodeKind::Var, l + 1, 0});
    std::vector<int> sink_ids(w);
    for (int k = 0; k < w; ++k) {
        sink_ids[k] = id_of(n, k);
        g.nodes.push_back({sink_ids[k], NodeKind::Sink, 0, static_cast<int>(rng() & 1u)});
    }
    g.start = 0;

    // start rows: one random unit vector per bit
    for (int bit = 0; bit < 2; ++bit) {
        Eigen::VectorXd v(w);
        for (int k = 0; k < w; ++k) v(k) = gauss(rng);
        v.normalize();
        for (int k = 0; k < w; ++k)
            if (v(k) != 0.0) g.edges.push_back({0, id_of(1, k), bit, cplx(v(k), 0.0)});
    }
    for (int l = 1; l < n; ++l) {
        for (int bit = 0; bit < 2; ++bit) {
            Eigen::MatrixXd q = random_orthogonal(w);
            for (int k = 0; k < w; ++k)
                for (int m = 0; m < w; ++m)
                    if (q(k, m) != 0.0)
                        g.edges.push_back({id_of(l, k), id_of(l + 1, m), bit, cplx(q(k, m), 0.0)});
        }
    }
    return g;
}

}  // namespace qbp
