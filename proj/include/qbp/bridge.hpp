#pragma once

#include <Eigen/Dense>
#include <map>

#include "qbp/graph.hpp"
#include "qbp/protocols.hpp"

namespace qbp::bridge {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Four-part decomposition of a restricted graph in which only one variable
// pair (x_var, y_var) is unfixed: S holds the first-read nodes, T the
// successors of the second-read nodes, and every source-to-sink path crosses
// each of S and T exactly once.
struct PartDecomposition {
    int x_var = 0, y_var = 0;
    std::vector<int> s_x, s_y, t_x, t_y;  // dense node indices
    std::vector<int> top, middle_x, middle_y, bottom;
    std::map<int, cplx> entry_amplitudes;                 // alpha_v for v in S (node id)
    std::map<std::pair<int, int>, cplx> exit_amplitudes;  // beta_{v,w} (node ids)
    std::vector<int> level;                               // per dense index, -1 unreachable
    int depth = 0;
    bool degenerate = false;  // all paths read one side first
};

PartDecomposition decompose(const CompiledGraph& cg, int x_var, int y_var);

// Result of the top/bottom dummy-chain surgery: the top part becomes a
// source fanning into per-entry chains carrying alpha_v, the bottom part
// becomes per-T chains ending in beta-weighted sink edges (one level longer
// than before).
struct DummyChained {
    QbpGraph graph;
    std::vector<int> s_x_ids, s_y_ids;  // node ids, unchanged from the input
    int x_var = 0, y_var = 0;
    int depth = 0;  // original depth + 1
    bool degenerate = false;
};

DummyChained insert_dummy_chains(const CompiledGraph& cg, const PartDecomposition& dec);

// 2-partition protocol simulating the chained graph: Alice runs the levels
// from her entry superposition to the first opposite-variable level, Bob
// finishes to the sinks. Blocks are kept as registers over the level slices
// reachable from S_x and S_y; `embeddings` maps each block's final register
// back to graph nodes. The protocol's own POVM reads sink labels per block;
// the interference-aware output of the simulated graph is recovered through
// result_state_nodes, whose label masses define output_distribution_nodes.
struct ExtractedProtocol {
    proto::MultiPartitionProtocol protocol;
    bool degenerate = false;
    double q_x = 0.0, q_y = 0.0;
    std::vector<MatrixXcd> embeddings;  // per block: node_dim x work_dim
    int x_var = 0, y_var = 0;
    int node_dim = 0;
};

ExtractedProtocol extract_protocol(const DummyChained& dc);

// Coherent node-space result state for pair input (c,d); agrees with
// final_state of the chained graph.
VectorXcd result_state_nodes(const ExtractedProtocol& ep, int c, int d);

std::pair<double, double> output_distribution_nodes(const ExtractedProtocol& ep,
                                                    const CompiledGraph& chained_cg, int c,
                                                    int d);

struct OrthReport {
    double max_abs_inner = 0.0;
    bool pass = false;
};

// For all v1 in S_x, v2 in S_y and all pair inputs z1, z2, the states
// propagated from v1 and v2 stay orthogonal on every common level through
// the sinks.
OrthReport subspace_orthogonality_check(const DummyChained& dc, double tol = 1e-9);

}  // namespace qbp::bridge
