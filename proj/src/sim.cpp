#include "qbp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qbp/classify.hpp"
#include "qbp/qinfo.hpp"

namespace qbp {

void step(const CompiledGraph& cg, const Assignment& input, StateVector& state,
          double halted_mass[2]) {
    if (static_cast<int>(input.size()) != cg.graph().num_vars)
        throw std::invalid_argument("input length does not match num_vars");
    std::map<int, cplx> next;
    for (const auto& [idx, amp] : state.amps) {
        const Node& nd = cg.node(idx);
        if (nd.kind == NodeKind::Sink) {
            halted_mass[nd.label] += std::norm(amp);
            continue;
        }
        const auto& edges =
            nd.kind == NodeKind::Unlabeled ? cg.out_any(idx) : cg.out(idx, input[nd.var - 1]);
        for (const auto& [to, w] : edges) next[to] += amp * w;
    }
    state.amps.assign(next.begin(), next.end());
}

OutputDistribution run(const CompiledGraph& cg, const Assignment& input, int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    StateVector state;
    state.amps = {{cg.start_index(), cplx(1.0, 0.0)}};
    double halted[2] = {0.0, 0.0};
    for (int t = 0; t < max_steps && !state.amps.empty(); ++t) step(cg, input, state, halted);
    // final measurement without a further transition
    StateVector rest;
    for (const auto& [idx, amp] : state.amps) {
        if (cg.is_sink(idx)) halted[cg.node(idx).label] += std::norm(amp);
        else rest.amps.emplace_back(idx, amp);
    }
    OutputDistribution d;
    d.p0 = halted[0];
    d.p1 = halted[1];
    d.residual = rest.squared_norm();
    return d;
}

OutputDistribution run(const CompiledGraph& cg, const Assignment& input) {
    return run(cg, input, cg.graph().num_vars + 2);
}

std::optional<int> uniform_depth(const CompiledGraph& cg) {
    ClassInfo info = classify(cg);
    if (!info.acyclic || !info.leveled) return std::nullopt;
    // levels are unique; verify all sinks (and only sinks) occupy the last one
    const int n = cg.num_nodes();
    std::vector<int> dist(n, -1);
    dist[cg.start_index()] = 0;
    int maxd = 0;
    // BFS works since distances are unique on leveled graphs
    std::vector<int> q{cg.start_index()};
    for (size_t h = 0; h < q.size(); ++h) {
        int v = q[h];
        maxd = std::max(maxd, dist[v]);
        for (int b = 0; b < 2; ++b)
            for (const auto& [w, amp] : cg.out(v, b))
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
    }
    for (int v : q) {
        if (cg.is_sink(v) != (dist[v] == maxd)) return std::nullopt;
    }
    return maxd;
}

Eigen::VectorXcd final_state(const CompiledGraph& cg, const Assignment& input) {
    auto depth = uniform_depth(cg);
    if (!depth)
        throw std::invalid_argument(
            "final_state requires a leveled graph with all sinks on the last level");
    if (static_cast<int>(input.size()) != cg.graph().num_vars)
        throw std::invalid_argument("input length does not match num_vars");
    StateVector state;
    state.amps = {{cg.start_index(), cplx(1.0, 0.0)}};
    for (int t = 0; t < *depth; ++t) {
        std::map<int, cplx> next;
        for (const auto& [idx, amp] : state.amps) {
            const Node& nd = cg.node(idx);
            if (nd.kind == NodeKind::Sink) continue;  // cannot happen before the last level
            const auto& edges =
                nd.kind == NodeKind::Unlabeled ? cg.out_any(idx) : cg.out(idx, input[nd.var - 1]);
            for (const auto& [to, w] : edges) next[to] += amp * w;
        }
        state.amps.assign(next.begin(), next.end());
    }
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(cg.num_nodes());
    for (const auto& [idx, amp] : state.amps) vec[idx] = amp;
    return vec;
}

Assignment assignment_from_index(uint64_t index, int num_vars) {
    Assignment a(num_vars);
    for (int i = 0; i < num_vars; ++i) a[i] = (index >> i) & 1u;
    return a;
}

namespace {

struct Worst {
    double err = -1.0;
    uint64_t idx = 0;
};

inline Worst combine(const Worst& a, const Worst& b) {
    if (b.err > a.err || (b.err == a.err && b.idx < a.idx)) return b;
    return a;
}

VerificationReport make_report(const CompiledGraph& cg, const Worst& w, double epsilon,
                               double tol) {
    VerificationReport rep;
    rep.exact_mode = epsilon == 0.0;
    rep.epsilon = epsilon;
    rep.worst_error = std::max(0.0, w.err);
    rep.worst_input = assignment_from_index(w.idx, cg.graph().num_vars);
    rep.pass = rep.worst_error <= epsilon + tol;
    return rep;
}

}  // namespace

VerificationReport verify_function_serial(const CompiledGraph& cg, const BoolFn& reference,
                                          double epsilon, int max_steps) {
    const int nv = cg.graph().num_vars;
    if (max_steps < 1) max_steps = nv + 2;
    const uint64_t total = 1ull << nv;
    Worst worst;
    for (uint64_t i = 0; i < total; ++i) {
        Assignment a = assignment_from_index(i, nv);
        OutputDistribution d = run(cg, a, max_steps);
        int f = reference(a);
        double err = 1.0 - (f == 0 ? d.p0 : d.p1);
        worst = combine(worst, Worst{err, i});
    }
    return make_report(cg, worst, epsilon, 1e-9);
}

double final_state_info(const CompiledGraph& cg,
                        const std::vector<std::pair<double, Assignment>>& dist) {
    double total = 0.0;
    for (const auto& [p, a] : dist) total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("final_state_info: probabilities must sum to 1");
    const int d = cg.num_nodes();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [p, a] : dist) {
        if (p == 0.0) continue;
        Eigen::VectorXcd psi = final_state(cg, a);
        rho += p * (psi * psi.adjoint());
    }
    double info = qinfo::entropy(rho);
    if (info > std::log2(static_cast<double>(d)) + 1e-8)
        throw std::logic_error("final_state_info: entropy exceeds log of node count");
    return info;
}

VerificationReport verify_function(const CompiledGraph& cg, const BoolFn& reference,
                                   double epsilon, int max_steps) {
    const int nv = cg.graph().num_vars;
    if (max_steps < 1) max_steps = nv + 2;
    const uint64_t total = 1ull << nv;
    Worst worst;
#pragma omp parallel
    {
        Worst local;
#pragma omp for schedule(static) nowait
        for (int64_t i = 0; i < static_cast<int64_t>(total); ++i) {
            Assignment a = assignment_from_index(static_cast<uint64_t>(i), nv);
            OutputDistribution d = run(cg, a, max_steps);
            int f = reference(a);
            double err = 1.0 - (f == 0 ? d.p0 : d.p1);
            local = combine(local, Worst{err, static_cast<uint64_t>(i)});
        }
#pragma omp critical
        worst = combine(worst, local);
    }
    return make_report(cg, worst, epsilon, 1e-9);
}

}  // namespace qbp
