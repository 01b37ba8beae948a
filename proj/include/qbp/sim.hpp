#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "qbp/graph.hpp"

namespace qbp {

// Unnormalized sparse state over node indices, kept sorted by index so that
// accumulation order (and thus floating point results) is deterministic.
struct StateVector {
    std::vector<std::pair<int, cplx>> amps;

    double squared_norm() const {
        double s = 0.0;
        for (const auto& [idx, a] : amps) s += std::norm(a);
        return s;
    }
};

struct OutputDistribution {
    double p0 = 0.0;
    double p1 = 0.0;
    double residual = 0.0;

    double clamped_p0() const { return std::min(1.0, std::max(0.0, p0)); }
    double clamped_p1() const { return std::min(1.0, std::max(0.0, p1)); }
};

struct VerificationReport {
    bool exact_mode = true;
    double epsilon = 0.0;
    std::vector<uint8_t> worst_input;
    double worst_error = 0.0;
    bool pass = false;
};

using Assignment = std::vector<uint8_t>;  // index i holds variable i+1

// One computation step: measure sink mass per output label (removing it from
// the state), then apply the transition to the surviving components. Working
// with the unnormalized residual state is equivalent to Def.-1's
// renormalize-then-evolve because the non-sink transition is an isometry for
// well-formed graphs.
void step(const CompiledGraph& cg, const Assignment& input, StateVector& state,
          double halted_mass[2]);

// max_steps transition applications with measurements interleaved, plus a
// final measurement; residual is the mass still on non-sink nodes.
OutputDistribution run(const CompiledGraph& cg, const Assignment& input, int max_steps);

// Default budget: num_vars + 2 covers read-once graphs including one
// unlabeled source and one unlabeled pre-sink level.
OutputDistribution run(const CompiledGraph& cg, const Assignment& input);

// Depth of a leveled graph whose sinks all sit on the last level; nullopt
// when the graph does not have that shape.
std::optional<int> uniform_depth(const CompiledGraph& cg);

// Full evolution with no measurement: the pure state over nodes after
// `depth` transition steps, before the sink measurement. Requires a leveled
// graph with all sinks on the last level.
Eigen::VectorXcd final_state(const CompiledGraph& cg, const Assignment& input);

using BoolFn = std::function<int(const Assignment&)>;

// Exhaustive sweep over all 2^num_vars inputs; worst_error is
// max_a (1 - p_{f(a)}), so unreturned (residual) mass counts as error.
VerificationReport verify_function(const CompiledGraph& cg, const BoolFn& reference,
                                   double epsilon = 0.0, int max_steps = -1);
// Serial reference implementation for the parallel sweep above.
VerificationReport verify_function_serial(const CompiledGraph& cg, const BoolFn& reference,
                                          double epsilon = 0.0, int max_steps = -1);

Assignment assignment_from_index(uint64_t index, int num_vars);

// I(G(Z):Z) over final states for a finite input distribution: the entropy
// of the weighted final-state mixture (final states are pure, so the mutual
// information equals S(G(Z))). Always at most log2(node count).
double final_state_info(const CompiledGraph& cg,
                        const std::vector<std::pair<double, Assignment>>& dist);

}  // namespace qbp
