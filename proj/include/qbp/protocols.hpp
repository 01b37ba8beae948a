#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>

#include "qbp/graph.hpp"

namespace qbp::proto {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

struct PartitionSpec {
    std::vector<int> alice_vars;
    std::vector<int> bob_vars;

    bool operator==(const PartitionSpec& o) const {
        return alice_vars == o.alice_vars && bob_vars == o.bob_vars;
    }
};

// One-way subprotocol in semantic form: unitaries on the work space per
// player input value (and public coin value). Inputs enter only through this
// conditioning, which realizes the safe-protocol convention structurally.
struct Subprotocol {
    PartitionSpec partition;
    int work_dim = 0;
    VectorXcd work_init;
    // ops[input value][coin value]
    std::vector<std::vector<MatrixXcd>> alice_ops;
    std::vector<std::vector<MatrixXcd>> bob_ops;
};

// Weighted direct sum of subprotocols over orthogonal blocks, with a global
// two-outcome POV measurement (m0, m1) on the direct-sum space. Block
// diagonal measurements recover the per-subprotocol form; cross-block
// measurements are needed for interference readouts.
struct MultiPartitionProtocol {
    std::vector<Subprotocol> subs;
    std::vector<cplx> initial_amplitudes;
    std::vector<double> coin_probs = {1.0};  // size 1 = coin-free
    MatrixXcd m0, m1;

    int total_dim() const {
        int d = 0;
        for (const auto& s : subs) d += s.work_dim;
        return d;
    }
    bool coin_free() const { return coin_probs.size() == 1; }
};

// Union variable set (sorted) shared by every partition.
std::vector<int> protocol_vars(const MultiPartitionProtocol& p);

// Throws std::invalid_argument when invariants fail: unit total weight,
// unitary ops within 1e-9, POVM completeness within 1e-9, consistent
// partitions.
void check_protocol(const MultiPartitionProtocol& p);

using Input = std::vector<uint8_t>;  // values of protocol_vars in sorted order

// Coherent global final work state for a fixed input and coin value (pure).
VectorXcd result_vector(const MultiPartitionProtocol& p, const Input& z, int coin = 0);

// Result state after the trace-out conventions: block-diagonal density over
// the direct sum, mixing over coins.
MatrixXcd result_state(const MultiPartitionProtocol& p, const Input& z);

// Per-block normalized result density (mixing over coins).
MatrixXcd block_result_state(const MultiPartitionProtocol& p, int block, const Input& z);

std::pair<double, double> output_distribution(const MultiPartitionProtocol& p, const Input& z);

double error_probability(const MultiPartitionProtocol& p,
                         const std::function<int(const Input&)>& f);

// Conditioned input distribution: Pr(D=d) and Pr(Z=z | D=d) with z indexed
// little-endian over the protocol variable order.
struct InputDistribution {
    std::vector<double> d_probs;
    std::vector<std::vector<double>> cond;
};

InputDistribution and_input_distribution();
InputDistribution xor_input_distribution();

// IC(P; Z | D) = I(P(Z) : Z | D) over the block-diagonal result states.
double information_cost(const MultiPartitionProtocol& p, const InputDistribution& dist);
// Information cost of subprotocol `block` alone.
double block_information_cost(const MultiPartitionProtocol& p, int block,
                              const InputDistribution& dist);
// IC(P) - sum_i q_i IC(P_i); always >= 0 (concavity).
double decomposition_gap(const MultiPartitionProtocol& p, const InputDistribution& dist);

// Error-free 2-partition XOR protocol with zero per-subprotocol information
// cost: block i starts |i-1>|-> and Bob flips the oracle qubit on input 1.
MultiPartitionProtocol build_xor_protocol();

// 1-partition AND protocol: Alice copies her bit into the work register,
// Bob copies his and writes the conjunction into an output qubit.
MultiPartitionProtocol build_and_copy_protocol();

// Noisy-copy interpolation: theta = 0 is the exact copy protocol, larger
// theta degrades Alice's copy.
MultiPartitionProtocol build_damped_and_protocol(double theta);

// Seeded random 2-partition protocol on two variables (work dim <= 4 per
// block, block-diagonal parity measurement).
MultiPartitionProtocol random_two_partition_protocol(uint64_t seed, int work_dim = 4);

// Groups subprotocols by partition (at most two distinct) into a
// 2-partition protocol with the same result state per input.
MultiPartitionProtocol merge_to_two_partitions(const MultiPartitionProtocol& p);

// Realification: amplitudes made real-positive by pushing phases into the
// initial states, then all vectors and matrices replaced entrywise by their
// real 2x2-block counterparts.
MultiPartitionProtocol realify_protocol(const MultiPartitionProtocol& p);

}  // namespace qbp::proto
