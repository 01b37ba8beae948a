#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace qbp {

using cplx = std::complex<double>;

enum class NodeKind { Var, Sink, Unlabeled };

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::Var;
    int var = 0;    // 1-based variable index, Var nodes only
    int label = 0;  // 0/1, Sink nodes only
};

// bit == -1 means "no boolean label" (edges leaving unlabeled nodes).
struct Edge {
    int from = 0;
    int to = 0;
    int bit = -1;
    cplx amp{0.0, 0.0};
};

// Thrown when node/edge references do not resolve or basic shape rules are
// broken. Distinct from a validation failure, which is a math property and
// is reported, not thrown.
struct structural_error : std::runtime_error {
    explicit structural_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct QbpGraph {
    int num_vars = 0;
    int start = 0;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
};

// Adjacency index over an immutable graph. All simulator and analysis
// operations work off a CompiledGraph; sharing one across threads is safe.
class CompiledGraph {
  public:
    explicit CompiledGraph(const QbpGraph& g);

    const QbpGraph& graph() const { return g_; }
    int num_nodes() const { return static_cast<int>(g_.nodes.size()); }
    const Node& node(int idx) const { return g_.nodes[idx]; }
    int index_of(int id) const { return id_to_index_.at(id); }
    int start_index() const { return start_index_; }

    // Outgoing edges of node (by dense index) for a bit value. Unlabeled
    // nodes keep their edges under bit slot 0 and ignore the input.
    const std::vector<std::pair<int, cplx>>& out(int idx, int bit) const {
        return out_[idx][bit];
    }
    const std::vector<std::pair<int, cplx>>& out_any(int idx) const {
        return out_[idx][0];
    }
    // Incoming (source index, bit, amp) triples.
    const std::vector<std::tuple<int, int, cplx>>& in(int idx) const { return in_[idx]; }

    bool is_sink(int idx) const { return g_.nodes[idx].kind == NodeKind::Sink; }
    bool is_unlabeled(int idx) const { return g_.nodes[idx].kind == NodeKind::Unlabeled; }

  private:
    QbpGraph g_;
    std::unordered_map<int, int> id_to_index_;
    int start_index_ = 0;
    std::vector<std::array<std::vector<std::pair<int, cplx>>, 2>> out_;
    std::vector<std::vector<std::tuple<int, int, cplx>>> in_;
};

// Structural soundness: ids unique and resolvable, start exists, sinks have
// no outgoing edges, var indices in range, bit labels consistent with the
// source node kind, at most one edge per (from,to,bit). Throws
// structural_error on the first violation.
void check_structure(const QbpGraph& g);

}  // namespace qbp
