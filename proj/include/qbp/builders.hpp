#pragma once

#include <cstdint>

#include "qbp/graph.hpp"
#include "qbp/sim.hpp"

namespace qbp {

// Smallest prime strictly larger than n (trial division; n capped at 1e6).
int smallest_prime_after(int n);

// (sum_i i * x_i) mod q over 1-based weights.
int weighted_sum(const std::vector<uint8_t>& x, int q);
// Partial weighted sum over a subset of 1-based indices of x.
int weighted_sum_subset(const std::vector<uint8_t>& x, const std::vector<int>& indices, int q);

// Reference evaluators. Vectors x,y each hold n bits.
int ws_eval(const std::vector<uint8_t>& x);
int mws_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y);
int disj_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y);
int nd_eval(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y);
int ind_eval(const std::vector<uint8_t>& u, int v);  // v in 1..n

// Evaluators over a flat assignment with variables x_1..x_n = 1..n and
// y_1..y_n = n+1..2n.
int mws_eval_flat(const Assignment& a);
int disj_eval_flat(const Assignment& a);
int nd_eval_flat(const Assignment& a);

// Error-free quantum read-once BP for MWS_n built from two reversible
// weighted-sum branches interfering in a Hadamard-basis readout.
// strict=false keeps the unlabeled source of the grid construction with the
// branches in their natural orders; strict=true merges the source into an
// x1 read shared by both branches, which forces the second branch into the
// order x1, y1..y_{n-1}, yn, x2..xn. Both variants keep one unlabeled
// readout level above the sinks.
QbpGraph build_mws_qbp(int n, bool strict);

// Deterministic OBDD chain for DISJ_n, order x1,y1,...,xn,yn, 2n+2 nodes.
QbpGraph build_disj_obdd(int n);

// Sink labels complemented (turns the DISJ chain into an ND_n graph).
QbpGraph flip_sink_labels(const QbpGraph& g);

// Deterministic reversible read-once OBDD (order x1..xn,y1..yn) computing
// y_{s_n(x)} (0 when the weighted sum is outside 1..n). This is one branch
// of the grid construction with labeled sinks; used as a classical test
// subject.
QbpGraph build_ws_flip_obdd(int n);

// Leveled regular read-once QBP with the fixed order x1..xn: one start node,
// then width-w levels connected by seeded random orthogonal blocks (one per
// level and bit), ending in w sinks with seeded labels.
QbpGraph random_regular_qrobp(int n, int width, uint64_t seed);

}  // namespace qbp
