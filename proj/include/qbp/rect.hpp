#pragma once

#include <cstdint>

#include "qbp/graph.hpp"
#include "qbp/sim.hpp"

namespace qbp::rect {

double binary_entropy(double x);
// Exact number of points within Hamming distance r of a fixed center.
uint64_t hamming_ball_size(int n, int r);

struct WsDistribution {
    int q = 0;
    int n = 0;
    bool exact = false;               // counts valid (n <= 62)
    std::vector<uint64_t> counts;     // per residue, counts over 2^n inputs
    std::vector<double> probs;        // counts / 2^n
    double max_deviation = 0.0;       // max |prob - 1/q|
};

// Exact distribution of a1 x1 + ... + an xn mod q over uniform x, by dynamic
// programming over (prefix, residue). Lemma hypotheses are enforced: q prime,
// coefficients nonzero and pairwise distinct mod q, n <= 1e4.
WsDistribution weighted_sum_distribution(int q, const std::vector<int>& coeffs);

struct DifficultDistribution {
    int n = 0;
    int p = 0;
    std::vector<uint64_t> residue_counts;  // |{x : s_n(x) = k}|
    uint64_t support_size = 0;             // |D| = sum counts^2
    double u_of_d = 0.0;                   // |D| / 4^n
};

DifficultDistribution difficult_distribution(int n);

struct IndRectangle {
    uint64_t max_a = 0;
    std::vector<uint8_t> witness_row;  // the center r
    double entropy_bound = 0.0;        // 2^{H(eps) n}
};

// Largest A such that some row vector r lies within Hamming distance
// floor(eps*n) of every member (the g-uniform structure of the index-function
// rectangle bound); A is the Hamming ball around the best center.
IndRectangle best_ind_rectangle(int n, double eps);

struct Rectangle {
    std::vector<int> pi1_vars;                   // sorted variable indices
    int cut_node = 0;                            // node id
    std::vector<std::vector<uint8_t>> members;   // assignments to pi1_vars
};

// Borodin-Razborov-Smolensky style partition of the input cube of a
// deterministic read-once BP over X = vars 1..n, Y = vars n+1..2n: each input
// is traced to the first node where ell variables of one side have been read
// (padding with unread X variables when a sink arrives first). Rectangles are
// keyed by (cut node, variable set read).
std::vector<Rectangle> brs_partition(const CompiledGraph& cg, int ell);

// Deterministic single-path evaluation (amplitudes in {0,1}); errors on
// non-deterministic graphs.
int deterministic_eval(const CompiledGraph& cg, const Assignment& a);

}  // namespace qbp::rect
