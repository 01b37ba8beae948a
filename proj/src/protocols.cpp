#include "qbp/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qbp/qinfo.hpp"

namespace qbp::proto {

namespace {

int value_of(const Input& z, const std::vector<int>& all_vars, const std::vector<int>& vars) {
    int val = 0;
    for (size_t k = 0; k < vars.size(); ++k) {
        auto it = std::lower_bound(all_vars.begin(), all_vars.end(), vars[k]);
        size_t pos = static_cast<size_t>(it - all_vars.begin());
        if (z[pos]) val |= 1 << k;
    }
    return val;
}

bool is_unitary(const MatrixXcd& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

std::vector<int> protocol_vars(const MultiPartitionProtocol& p) {
    if (p.subs.empty()) throw std::invalid_argument("protocol has no subprotocols");
    std::set<int> vars;
    for (int v : p.subs[0].partition.alice_vars) vars.insert(v);
    for (int v : p.subs[0].partition.bob_vars) vars.insert(v);
    return std::vector<int>(vars.begin(), vars.end());
}

void check_protocol(const MultiPartitionProtocol& p) {
    if (p.subs.empty()) throw std::invalid_argument("protocol has no subprotocols");
    if (p.subs.size() != p.initial_amplitudes.size())
        throw std::invalid_argument("amplitude count does not match subprotocol count");
    double w = 0.0;
    for (const auto& a : p.initial_amplitudes) w += std::norm(a);
    if (std::abs(w - 1.0) > 1e-10)
        throw std::invalid_argument("initial amplitudes must have unit total weight");
    double cw = 0.0;
    for (double c : p.coin_probs) cw += c;
    if (p.coin_probs.empty() || std::abs(cw - 1.0) > 1e-10)
        throw std::invalid_argument("coin probabilities must sum to 1");

    auto vars = protocol_vars(p);
    const size_t coins = p.coin_probs.size();
    for (const auto& s : p.subs) {
        if (s.partition.alice_vars.empty() || s.partition.bob_vars.empty())
            throw std::invalid_argument("partition must be nontrivial");
        std::set<int> u;
        for (int v : s.partition.alice_vars) u.insert(v);
        for (int v : s.partition.bob_vars) u.insert(v);
        if (u.size() != s.partition.alice_vars.size() + s.partition.bob_vars.size())
            throw std::invalid_argument("partition sides must be disjoint");
        if (std::vector<int>(u.begin(), u.end()) != vars)
            throw std::invalid_argument("all partitions must cover the same variable set");
        if (s.work_init.size() != s.work_dim)
            throw std::invalid_argument("work_init dimension mismatch");
        if (std::abs(s.work_init.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("work_init must be a unit vector");
        size_t na = 1ull << s.partition.alice_vars.size();
        size_t nb = 1ull << s.partition.bob_vars.size();
        if (s.alice_ops.size() != na || s.bob_ops.size() != nb)
            throw std::invalid_argument("operator table sizes do not match input ranges");
        for (const auto& per_input : {std::cref(s.alice_ops), std::cref(s.bob_ops)})
            for (const auto& per_coin : per_input.get()) {
                if (per_coin.size() != coins)
                    throw std::invalid_argument("operator table does not cover all coin values");
                for (const auto& op : per_coin)
                    if (op.rows() != s.work_dim || !is_unitary(op, 1e-9))
                        throw std::invalid_argument("subprotocol operator is not unitary");
            }
    }
    const int dim = p.total_dim();
    if (p.m0.rows() != dim || p.m1.rows() != dim)
        throw std::invalid_argument("measurement dimension mismatch");
    MatrixXcd s = p.m0.adjoint() * p.m0 + p.m1.adjoint() * p.m1;
    if ((s - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("output measurement is not complete");
}

VectorXcd result_vector(const MultiPartitionProtocol& p, const Input& z, int coin) {
    auto vars = protocol_vars(p);
    if (z.size() != vars.size()) throw std::invalid_argument("input arity mismatch");
    VectorXcd out = VectorXcd::Zero(p.total_dim());
    int off = 0;
    for (size_t i = 0; i < p.subs.size(); ++i) {
        const auto& s = p.subs[i];
        int a = value_of(z, vars, s.partition.alice_vars);
        int b = value_of(z, vars, s.partition.bob_vars);
        VectorXcd w = s.bob_ops[b][coin] * (s.alice_ops[a][coin] * s.work_init);
        out.segment(off, s.work_dim) = p.initial_amplitudes[i] * w;
        off += s.work_dim;
    }
    return out;
}

MatrixXcd block_result_state(const MultiPartitionProtocol& p, int block, const Input& z) {
    auto vars = protocol_vars(p);
    if (z.size() != vars.size()) throw std::invalid_argument("input arity mismatch");
    const auto& s = p.subs[block];
    MatrixXcd rho = MatrixXcd::Zero(s.work_dim, s.work_dim);
    int a = value_of(z, vars, s.partition.alice_vars);
    int b = value_of(z, vars, s.partition.bob_vars);
    for (size_t r = 0; r < p.coin_probs.size(); ++r) {
        VectorXcd w = s.bob_ops[b][r] * (s.alice_ops[a][r] * s.work_init);
        rho += p.coin_probs[r] * (w * w.adjoint());
    }
    return rho;
}

MatrixXcd result_state(const MultiPartitionProtocol& p, const Input& z) {
    MatrixXcd rho = MatrixXcd::Zero(p.total_dim(), p.total_dim());
    int off = 0;
    for (size_t i = 0; i < p.subs.size(); ++i) {
        double q = std::norm(p.initial_amplitudes[i]);
        rho.block(off, off, p.subs[i].work_dim, p.subs[i].work_dim) =
            q * block_result_state(p, static_cast<int>(i), z);
        off += p.subs[i].work_dim;
    }
    return rho;
}

std::pair<double, double> output_distribution(const MultiPartitionProtocol& p, const Input& z) {
    double p0 = 0.0, p1 = 0.0;
    for (size_t r = 0; r < p.coin_probs.size(); ++r) {
        VectorXcd psi = result_vector(p, z, static_cast<int>(r));
        p0 += p.coin_probs[r] * (p.m0 * psi).squaredNorm();
        p1 += p.coin_probs[r] * (p.m1 * psi).squaredNorm();
    }
    return {p0, p1};
}

double error_probability(const MultiPartitionProtocol& p,
                         const std::function<int(const Input&)>& f) {
    auto vars = protocol_vars(p);
    double worst = 0.0;
    for (uint64_t idx = 0; idx < (1ull << vars.size()); ++idx) {
        Input z(vars.size());
        for (size_t k = 0; k < vars.size(); ++k) z[k] = (idx >> k) & 1u;
        auto [p0, p1] = output_distribution(p, z);
        worst = std::max(worst, 1.0 - (f(z) == 0 ? p0 : p1));
    }
    return worst;
}

InputDistribution and_input_distribution() {
    InputDistribution d;
    d.d_probs = {0.5, 0.5};
    d.cond.resize(2, std::vector<double>(4, 0.0));
    // z index = z1 + 2 z2. D=1: Z1 uniform, Z2 = 0. D=2: Z2 uniform, Z1 = 0.
    d.cond[0][0] = 0.5;
    d.cond[0][1] = 0.5;
    d.cond[1][0] = 0.5;
    d.cond[1][2] = 0.5;
    return d;
}

InputDistribution xor_input_distribution() { return and_input_distribution(); }

double information_cost(const MultiPartitionProtocol& p, const InputDistribution& dist) {
    auto vars = protocol_vars(p);
    std::vector<qinfo::CqCondItem> items;
    for (size_t d = 0; d < dist.d_probs.size(); ++d) {
        for (size_t idx = 0; idx < dist.cond[d].size(); ++idx) {
            double pr = dist.d_probs[d] * dist.cond[d][idx];
            if (pr == 0.0) continue;
            Input z(vars.size());
            for (size_t k = 0; k < vars.size(); ++k) z[k] = (idx >> k) & 1u;
            items.push_back({pr, static_cast<int>(d), result_state(p, z)});
        }
    }
    return qinfo::cq_mutual_info_conditional(items);
}

double block_information_cost(const MultiPartitionProtocol& p, int block,
                              const InputDistribution& dist) {
    auto vars = protocol_vars(p);
    std::vector<qinfo::CqCondItem> items;
    for (size_t d = 0; d < dist.d_probs.size(); ++d) {
        for (size_t idx = 0; idx < dist.cond[d].size(); ++idx) {
            double pr = dist.d_probs[d] * dist.cond[d][idx];
            if (pr == 0.0) continue;
            Input z(vars.size());
            for (size_t k = 0; k < vars.size(); ++k) z[k] = (idx >> k) & 1u;
            items.push_back({pr, static_cast<int>(d), block_result_state(p, block, z)});
        }
    }
    return qinfo::cq_mutual_info_conditional(items);
}

double decomposition_gap(const MultiPartitionProtocol& p, const InputDistribution& dist) {
    double sum = 0.0;
    for (size_t i = 0; i < p.subs.size(); ++i) {
        double q = std::norm(p.initial_amplitudes[i]);
        if (q == 0.0) continue;
        sum += q * block_information_cost(p, static_cast<int>(i), dist);
    }
    return information_cost(p, dist) - sum;
}

namespace {

MatrixXcd embed_op_x(const MatrixXcd& single, int qubit, int nq) {
    // single-qubit op on `qubit` (0 = least significant) of an nq-qubit space
    int dim = 1 << nq;
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int rbit = 0; rbit < 2; ++rbit) {
            int cbit = (c >> qubit) & 1;
            int r = (c & ~(1 << qubit)) | (rbit << qubit);
            out(r, c) += single(rbit, cbit);
        }
    return out;
}

}  // namespace

MultiPartitionProtocol build_xor_protocol() {
    MultiPartitionProtocol p;
    const double s2 = 1.0 / std::sqrt(2.0);
    MatrixXcd id4 = MatrixXcd::Identity(4, 4);
    MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    MatrixXcd flip_oracle = embed_op_x(x, 0, 2);  // X on the oracle qubit

    for (int block = 0; block < 2; ++block) {
        Subprotocol s;
        // block i: Bob holds z_{i+1}, Alice the other bit.
        s.partition.alice_vars = {block == 0 ? 2 : 1};
        s.partition.bob_vars = {block == 0 ? 1 : 2};
        s.work_dim = 4;  // |q,o> with index 2q+o
        s.work_init = VectorXcd::Zero(4);
        s.work_init[2 * block + 0] = s2;   // |block>|0>
        s.work_init[2 * block + 1] = -s2;  // minus |block>|1>: oracle qubit in |->
        s.alice_ops = {{id4}, {id4}};
        s.bob_ops = {{id4}, {flip_oracle}};
        p.subs.push_back(std::move(s));
    }
    p.initial_amplitudes = {s2, s2};

    // Hadamard-basis readout of the block qubit: outcome r projects onto
    // (|q=0,o>_[block0] + (-1)^r |q=1,o>_[block1])/sqrt(2). The four
    // unreachable basis states go to outcome 0.
    const int dim = 8;
    MatrixXcd m0 = MatrixXcd::Zero(dim, dim), m1 = MatrixXcd::Zero(dim, dim);
    for (int o = 0; o < 2; ++o) {
        VectorXcd u = VectorXcd::Zero(dim), v = VectorXcd::Zero(dim);
        u[o] = 1.0;          // block 0, |0,o>
        v[4 + 2 + o] = 1.0;  // block 1, |1,o>
        VectorXcd plus = (u + v) / std::sqrt(2.0);
        VectorXcd minus = (u - v) / std::sqrt(2.0);
        m0 += plus * plus.adjoint();
        m1 += minus * minus.adjoint();
    }
    for (int idx : {2, 3, 4, 5}) m0(idx, idx) += 1.0;  // junk dims
    p.m0 = m0;
    p.m1 = m1;
    return p;
}

MultiPartitionProtocol build_and_copy_protocol() {
    MultiPartitionProtocol p;
    Subprotocol s;
    s.partition.alice_vars = {1};
    s.partition.bob_vars = {2};
    s.work_dim = 8;  // |a,b,out> with index 4a+2b+out
    s.work_init = VectorXcd::Zero(8);
    s.work_init[0] = 1.0;
    MatrixXcd id = MatrixXcd::Identity(8, 8);
    // Alice: copy her bit into qubit a.
    MatrixXcd copy_a = MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) copy_a(i ^ 4, i) = 1.0;
    // Bob with input v: copy v into qubit b, then write a AND b into out.
    auto bob_op = [](int v) {
        MatrixXcd m = MatrixXcd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) {
            int j = v ? (i ^ 2) : i;
            int a = (j >> 2) & 1, b = (j >> 1) & 1;
            m(j ^ (a & b), i) = 1.0;
        }
        return m;
    };
    s.alice_ops = {{id}, {copy_a}};
    s.bob_ops = {{bob_op(0)}, {bob_op(1)}};
    p.subs.push_back(std::move(s));
    p.initial_amplitudes = {1.0};
    MatrixXcd m0 = MatrixXcd::Zero(8, 8), m1 = MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) (i & 1 ? m1 : m0)(i, i) = 1.0;
    p.m0 = m0;
    p.m1 = m1;
    return p;
}

MultiPartitionProtocol build_damped_and_protocol(double theta) {
    MultiPartitionProtocol p = build_and_copy_protocol();
    // Replace Alice's perfect copy with a rotation that degrades as theta
    // grows: theta = 0 is the X copy.
    MatrixXcd rot2(2, 2);
    rot2 << std::sin(theta), std::cos(theta), std::cos(theta), -std::sin(theta);
    MatrixXcd rot = embed_op_x(rot2, 2, 3);
    p.subs[0].alice_ops[1][0] = rot;
    return p;
}

MultiPartitionProtocol random_two_partition_protocol(uint64_t seed, int work_dim) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double q1 = unif(rng);
    MultiPartitionProtocol p;
    for (int block = 0; block < 2; ++block) {
        Subprotocol s;
        s.partition.alice_vars = {block == 0 ? 1 : 2};
        s.partition.bob_vars = {block == 0 ? 2 : 1};
        s.work_dim = work_dim;
        s.work_init = qinfo::random_pure(work_dim, rng);
        s.alice_ops = {{qinfo::random_unitary(work_dim, rng)},
                       {qinfo::random_unitary(work_dim, rng)}};
        s.bob_ops = {{qinfo::random_unitary(work_dim, rng)},
                     {qinfo::random_unitary(work_dim, rng)}};
        p.subs.push_back(std::move(s));
    }
    p.initial_amplitudes = {std::sqrt(q1), std::sqrt(1.0 - q1)};
    const int dim = 2 * work_dim;
    MatrixXcd m0 = MatrixXcd::Zero(dim, dim), m1 = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) (i & 1 ? m1 : m0)(i, i) = 1.0;
    p.m0 = m0;
    p.m1 = m1;
    return p;
}

MultiPartitionProtocol merge_to_two_partitions(const MultiPartitionProtocol& p) {
    std::vector<PartitionSpec> parts;
    for (const auto& s : p.subs) {
        bool found = false;
        for (const auto& q : parts)
            if (q == s.partition) found = true;
        if (!found) parts.push_back(s.partition);
    }
    if (parts.size() > 2)
        throw std::invalid_argument("merge: more than two distinct partitions");

    MultiPartitionProtocol out;
    out.coin_probs = p.coin_probs;
    const size_t coins = p.coin_probs.size();
    std::vector<int> new_offset_of_sub(p.subs.size(), 0);

    for (const auto& part : parts) {
        Subprotocol merged;
        merged.partition = part;
        std::vector<size_t> members;
        double q = 0.0;
        for (size_t i = 0; i < p.subs.size(); ++i)
            if (p.subs[i].partition == part) {
                members.push_back(i);
                q += std::norm(p.initial_amplitudes[i]);
            }
        int dim = 0;
        for (size_t i : members) dim += p.subs[i].work_dim;
        merged.work_dim = dim;
        merged.work_init = VectorXcd::Zero(dim);
        size_t na = 1ull << part.alice_vars.size();
        size_t nb = 1ull << part.bob_vars.size();
        merged.alice_ops.assign(na, std::vector<MatrixXcd>(coins, MatrixXcd::Zero(dim, dim)));
        merged.bob_ops.assign(nb, std::vector<MatrixXcd>(coins, MatrixXcd::Zero(dim, dim)));
        int off = 0;
        for (size_t i : members) {
            const auto& s = p.subs[i];
            if (q > 0)
                merged.work_init.segment(off, s.work_dim) =
                    (p.initial_amplitudes[i] / std::sqrt(q)) * s.work_init;
            for (size_t a = 0; a < na; ++a)
                for (size_t r = 0; r < coins; ++r)
                    merged.alice_ops[a][r].block(off, off, s.work_dim, s.work_dim) =
                        s.alice_ops[a][r];
            for (size_t b = 0; b < nb; ++b)
                for (size_t r = 0; r < coins; ++r)
                    merged.bob_ops[b][r].block(off, off, s.work_dim, s.work_dim) = s.bob_ops[b][r];
            off += s.work_dim;
        }
        if (q == 0.0) {
            // empty block: any pure state; keep the first member's init
            if (!members.empty()) {
                off = 0;
                merged.work_init.segment(0, p.subs[members[0]].work_dim) =
                    p.subs[members[0]].work_init;
            }
        }
        out.subs.push_back(std::move(merged));
        out.initial_amplitudes.push_back(std::sqrt(q));
    }

    // Permutation from the old direct-sum layout to the merged layout, to
    // carry the measurement over.
    const int dim = p.total_dim();
    std::vector<int> old_offset(p.subs.size(), 0);
    {
        int off = 0;
        for (size_t i = 0; i < p.subs.size(); ++i) {
            old_offset[i] = off;
            off += p.subs[i].work_dim;
        }
    }
    {
        int off = 0;
        for (const auto& part : parts) {
            for (size_t i = 0; i < p.subs.size(); ++i)
                if (p.subs[i].partition == part) {
                    new_offset_of_sub[i] = off;
                    off += p.subs[i].work_dim;
                }
        }
    }
    MatrixXcd perm = MatrixXcd::Zero(dim, dim);
    for (size_t i = 0; i < p.subs.size(); ++i)
        for (int k = 0; k < p.subs[i].work_dim; ++k)
            perm(new_offset_of_sub[i] + k, old_offset[i] + k) = 1.0;
    out.m0 = perm * p.m0 * perm.adjoint();
    out.m1 = perm * p.m1 * perm.adjoint();
    return out;
}

MultiPartitionProtocol realify_protocol(const MultiPartitionProtocol& p) {
    MultiPartitionProtocol out;
    out.coin_probs = p.coin_probs;
    auto realify_as_cplx = [](const MatrixXcd& m) {
        return qinfo::realify_matrix(m).cast<cplx>().eval();
    };
    for (size_t i = 0; i < p.subs.size(); ++i) {
        const auto& s = p.subs[i];
        Subprotocol r;
        r.partition = s.partition;
        r.work_dim = 2 * s.work_dim;
        // push the initial amplitude's phase into the block state
        cplx a = p.initial_amplitudes[i];
        cplx phase = std::abs(a) > 0 ? a / std::abs(a) : cplx(1.0, 0.0);
        VectorXcd init = phase * s.work_init;
        r.work_init = qinfo::realify_vector(init).cast<cplx>();
        for (const auto& per_input : s.alice_ops) {
            std::vector<MatrixXcd> ops;
            for (const auto& op : per_input) ops.push_back(realify_as_cplx(op));
            r.alice_ops.push_back(std::move(ops));
        }
        for (const auto& per_input : s.bob_ops) {
            std::vector<MatrixXcd> ops;
            for (const auto& op : per_input) ops.push_back(realify_as_cplx(op));
            r.bob_ops.push_back(std::move(ops));
        }
        out.subs.push_back(std::move(r));
        out.initial_amplitudes.push_back(std::abs(a));
    }
    out.m0 = realify_as_cplx(p.m0);
    out.m1 = realify_as_cplx(p.m1);
    return out;
}

}  // namespace qbp::proto
