#include "qbp/rect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qbp/builders.hpp"

namespace qbp::rect {

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x must be in [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

uint64_t hamming_ball_size(int n, int r) {
    if (n < 0 || r < 0 || r > n) throw std::invalid_argument("hamming_ball_size: bad arguments");
    if (n > 62) throw std::invalid_argument("hamming_ball_size: n too large for exact count");
    uint64_t total = 0;
    uint64_t binom = 1;  // C(n, 0)
    for (int k = 0; k <= r; ++k) {
        total += binom;
        binom = binom * static_cast<uint64_t>(n - k) / static_cast<uint64_t>(k + 1);
    }
    return total;
}

WsDistribution weighted_sum_distribution(int q, const std::vector<int>& coeffs) {
    if (q < 2) throw std::invalid_argument("weighted_sum_distribution: q must be >= 2");
    for (int d = 2; static_cast<long long>(d) * d <= q; ++d)
        if (q % d == 0) throw std::invalid_argument("weighted_sum_distribution: q must be prime");
    const int n = static_cast<int>(coeffs.size());
    if (n < 1 || n > 10000)
        throw std::invalid_argument("weighted_sum_distribution: need 1 <= n <= 1e4");
    std::set<int> seen;
    for (int a : coeffs) {
        int r = ((a % q) + q) % q;
        if (r == 0)
            throw std::invalid_argument("weighted_sum_distribution: coefficients must be nonzero mod q");
        if (!seen.insert(r).second)
            throw std::invalid_argument(
                "weighted_sum_distribution: coefficients must be pairwise distinct mod q");
    }

    WsDistribution out;
    out.q = q;
    out.n = n;
    out.exact = n <= 62;
    if (out.exact) {
        std::vector<uint64_t> cnt(q, 0);
        cnt[0] = 1;
        for (int a : coeffs) {
            int r = ((a % q) + q) % q;
            std::vector<uint64_t> next(q, 0);
            for (int s = 0; s < q; ++s) {
                next[s] += cnt[s];
                next[(s + r) % q] += cnt[s];
            }
            cnt.swap(next);
        }
        out.counts = cnt;
        out.probs.resize(q);
        const double denom = std::ldexp(1.0, n);
        for (int s = 0; s < q; ++s) out.probs[s] = static_cast<double>(cnt[s]) / denom;
    } else {
        std::vector<double> pr(q, 0.0);
        pr[0] = 1.0;
        for (int a : coeffs) {
            int r = ((a % q) + q) % q;
            std::vector<double> next(q, 0.0);
            for (int s = 0; s < q; ++s) {
                next[s] += 0.5 * pr[s];
                next[(s + r) % q] += 0.5 * pr[s];
            }
            pr.swap(next);
        }
        out.probs = pr;
    }
    double dev = 0.0;
    for (double p : out.probs) dev = std::max(dev, std::abs(p - 1.0 / q));
    out.max_deviation = dev;
    return out;
}

DifficultDistribution difficult_distribution(int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("difficult_distribution: n out of range");
    DifficultDistribution d;
    d.n = n;
    d.p = smallest_prime_after(n);
    std::vector<uint64_t> cnt(d.p, 0);
    cnt[0] = 1;
    for (int i = 1; i <= n; ++i) {
        std::vector<uint64_t> next(d.p, 0);
        for (int s = 0; s < d.p; ++s) {
            next[s] += cnt[s];
            next[(s + i) % d.p] += cnt[s];
        }
        cnt.swap(next);
    }
    d.residue_counts = cnt;
    for (uint64_t c : cnt) d.support_size += c * c;
    d.u_of_d = static_cast<double>(d.support_size) / std::ldexp(1.0, 2 * n);
    return d;
}

IndRectangle best_ind_rectangle(int n, double eps) {
    if (n < 1 || n > 20) throw std::invalid_argument("best_ind_rectangle: n out of range");
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("best_ind_rectangle: eps out of range");
    const int radius = static_cast<int>(std::floor(eps * n));
    IndRectangle out;
    // The ball size is center independent; keep the all-zeros witness but
    // compute by enumeration to stay independent of the closed form.
    uint64_t best = 0;
    std::vector<uint8_t> witness(n, 0);
    for (uint64_t r = 0; r < (1ull << n); ++r) {
        uint64_t cnt = 0;
        for (uint64_t a = 0; a < (1ull << n); ++a)
            if (__builtin_popcountll(a ^ r) <= radius) ++cnt;
        if (cnt > best) {
            best = cnt;
            for (int i = 0; i < n; ++i) witness[i] = (r >> i) & 1u;
        }
    }
    out.max_a = best;
    out.witness_row = witness;
    out.entropy_bound = std::pow(2.0, binary_entropy(eps) * n);
    return out;
}

int deterministic_eval(const CompiledGraph& cg, const Assignment& a) {
    int v = cg.start_index();
    const int limit = cg.num_nodes() + 1;
    for (int steps = 0; steps < limit; ++steps) {
        const Node& nd = cg.node(v);
        if (nd.kind == NodeKind::Sink) return nd.label;
        const auto& edges =
            nd.kind == NodeKind::Unlabeled ? cg.out_any(v) : cg.out(v, a[nd.var - 1]);
        int next = -1;
        for (const auto& [to, amp] : edges) {
            if (std::abs(amp) == 0.0) continue;
            if (std::abs(amp - cplx(1.0, 0.0)) > 1e-12 || next != -1)
                throw std::invalid_argument("deterministic_eval: graph is not deterministic");
            next = to;
        }
        if (next == -1) throw std::invalid_argument("deterministic_eval: dead end");
        v = next;
    }
    throw std::invalid_argument("deterministic_eval: path too long (cycle?)");
}

std::vector<Rectangle> brs_partition(const CompiledGraph& cg, int ell) {
    const int nv = cg.graph().num_vars;
    if (nv % 2 != 0) throw std::invalid_argument("brs_partition: need variables split X/Y");
    const int n = nv / 2;
    if (ell < 1 || ell > n - 1) throw std::invalid_argument("brs_partition: need 1 <= ell <= n-1");
    if (nv > 24) throw std::invalid_argument("brs_partition: input cube too large");

    // key: (cut node id, sorted pi1 vars) -> member assignments
    std::map<std::pair<int, std::vector<int>>, std::set<std::vector<uint8_t>>> rects;

    for (uint64_t idx = 0; idx < (1ull << nv); ++idx) {
        Assignment a = assignment_from_index(idx, nv);
        int v = cg.start_index();
        std::vector<int> read_vars;
        int xcnt = 0, ycnt = 0;
        int cut = -1;
        const int limit = cg.num_nodes() + 1;
        for (int steps = 0; steps < limit && cut == -1; ++steps) {
            const Node& nd = cg.node(v);
            if (nd.kind == NodeKind::Sink) {
                // pad with smallest unread X variables up to ell
                std::set<int> have(read_vars.begin(), read_vars.end());
                for (int x = 1; x <= n && xcnt < ell; ++x)
                    if (!have.count(x)) {
                        read_vars.push_back(x);
                        ++xcnt;
                    }
                cut = v;
                break;
            }
            int var = 0;
            if (nd.kind == NodeKind::Var) {
                var = nd.var;
                read_vars.push_back(var);
                if (var <= n) ++xcnt;
                else ++ycnt;
            }
            const auto& edges =
                nd.kind == NodeKind::Unlabeled ? cg.out_any(v) : cg.out(v, a[nd.var - 1]);
            int next = -1;
            for (const auto& [to, amp] : edges) {
                if (std::abs(amp) == 0.0) continue;
                if (std::abs(amp - cplx(1.0, 0.0)) > 1e-12 || next != -1)
                    throw std::invalid_argument("brs_partition: graph is not deterministic");
                next = to;
            }
            if (next == -1) throw std::invalid_argument("brs_partition: dead end");
            v = next;
            if (xcnt == ell || ycnt == ell) cut = v;
        }
        if (cut == -1) throw std::invalid_argument("brs_partition: path did not terminate");
        std::vector<int> pi1 = read_vars;
        std::sort(pi1.begin(), pi1.end());
        std::vector<uint8_t> bits(pi1.size());
        for (size_t k = 0; k < pi1.size(); ++k) bits[k] = a[pi1[k] - 1];
        rects[{cg.node(cut).id, pi1}].insert(std::move(bits));
    }

    std::vector<Rectangle> out;
    for (auto& [key, members] : rects) {
        Rectangle r;
        r.cut_node = key.first;
        r.pi1_vars = key.second;
        r.members.assign(members.begin(), members.end());
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qbp::rect
