#include "qbp/qinfo.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace qbp::qinfo {

using cplx = std::complex<double>;

namespace {

double xlog2x(double x) { return x > kEigenvalueFloor ? x * std::log2(x) : 0.0; }

Eigen::VectorXd hermitian_eigenvalues(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace

void check_density(const MatrixXcd& rho, double tol) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) throw std::invalid_argument("density matrix not Hermitian within tolerance");
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > tol * 10 + 1e-10)
        throw std::invalid_argument("density matrix trace differs from 1");
    Eigen::VectorXd ev = hermitian_eigenvalues((rho + rho.adjoint()) / 2.0);
    if (ev.minCoeff() < -1e-9) throw std::invalid_argument("density matrix not PSD");
}

double entropy(const MatrixXcd& rho) {
    check_density(rho);
    Eigen::VectorXd ev = hermitian_eigenvalues((rho + rho.adjoint()) / 2.0);
    double s = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        double lam = std::min(1.0, std::max(0.0, ev[i]));
        s -= xlog2x(lam);
    }
    return s;
}

double cq_mutual_info(const CqEnsemble& ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const int d = static_cast<int>(ensemble[0].state.rows());
    double ptot = 0.0;
    for (const auto& it : ensemble) {
        if (it.state.rows() != d || it.state.cols() != d)
            throw std::invalid_argument("ensemble dimension mismatch");
        ptot += it.prob;
    }
    if (std::abs(ptot - 1.0) > 1e-9) throw std::invalid_argument("ensemble probabilities must sum to 1");
    // Joint c-q state: sum_x p_x rho(x) (x) |x><x|. Its block structure gives
    // I = S(avg) - sum_x p_x S(rho(x)); computed that way after building the
    // pieces, which is exactly the joint-state evaluation.
    MatrixXcd avg = MatrixXcd::Zero(d, d);
    double cond = 0.0;
    for (const auto& it : ensemble) {
        if (it.prob == 0.0) continue;
        avg += it.prob * it.state;
        cond += it.prob * entropy(it.state);
    }
    return entropy(avg) - cond;
}

double cq_mutual_info_conditional(const std::vector<CqCondItem>& ensemble) {
    std::map<int, CqEnsemble> groups;
    std::map<int, double> py;
    for (const auto& it : ensemble) {
        groups[it.y].push_back({it.prob, it.state});
        py[it.y] += it.prob;
    }
    double total = 0.0;
    for (auto& [y, p] : py) total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("conditional ensemble probabilities must sum to 1");
    double info = 0.0;
    for (auto& [y, group] : groups) {
        double p = py[y];
        if (p == 0.0) continue;
        for (auto& it : group) it.prob /= p;
        info += p * cq_mutual_info(group);
    }
    return info;
}

double fidelity(const MatrixXcd& rho, const MatrixXcd& sigma) {
    check_density(rho);
    check_density(sigma);
    if (rho.rows() != sigma.rows()) throw std::invalid_argument("fidelity: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    MatrixXcd sqrt_rho =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    MatrixXcd m = sqrt_rho * sigma * sqrt_rho;
    Eigen::VectorXd mv = hermitian_eigenvalues((m + m.adjoint()) / 2.0).cwiseMax(0.0);
    double f = 0.0;
    for (int i = 0; i < mv.size(); ++i) f += std::sqrt(mv[i]);
    return std::min(1.0, f);
}

double trace_distance(const MatrixXcd& rho, const MatrixXcd& sigma) {
    check_density(rho);
    check_density(sigma);
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::VectorXd ev = hermitian_eigenvalues(rho - sigma);
    return ev.cwiseAbs().sum();
}

VectorXcd purify(const MatrixXcd& rho) {
    check_density(rho);
    const int d = static_cast<int>(rho.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    VectorXcd psi = VectorXcd::Zero(d * d);
    for (int k = 0; k < d; ++k) {
        double lam = std::max(0.0, es.eigenvalues()[k]);
        if (lam <= kEigenvalueFloor) continue;
        double s = std::sqrt(lam);
        for (int i = 0; i < d; ++i) psi[i * d + k] += s * es.eigenvectors()(i, k);
    }
    return psi;
}

MatrixXcd partial_trace_second(const VectorXcd& psi, int d1, int d2) {
    if (psi.size() != static_cast<long>(d1) * d2)
        throw std::invalid_argument("partial_trace_second: dimension mismatch");
    MatrixXcd rho = MatrixXcd::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
            for (int k = 0; k < d2; ++k) rho(i, j) += psi[i * d2 + k] * std::conj(psi[j * d2 + k]);
    return rho;
}

MatrixXcd partial_trace_first(const VectorXcd& psi, int d1, int d2) {
    if (psi.size() != static_cast<long>(d1) * d2)
        throw std::invalid_argument("partial_trace_first: dimension mismatch");
    MatrixXcd rho = MatrixXcd::Zero(d2, d2);
    for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l)
            for (int i = 0; i < d1; ++i) rho(k, l) += psi[i * d2 + k] * std::conj(psi[i * d2 + l]);
    return rho;
}

LocalTransition local_transition(const MatrixXcd& rho0, const MatrixXcd& rho1,
                                 const VectorXcd& psi0, const VectorXcd& psi1) {
    const int d = static_cast<int>(rho0.rows());
    if (rho1.rows() != d) throw std::invalid_argument("local_transition: dimension mismatch");
    if (psi0.size() != psi1.size() || psi0.size() % d != 0)
        throw std::invalid_argument("local_transition: purification dimensions inconsistent");
    const int dk = static_cast<int>(psi0.size()) / d;
    if (dk < d) throw std::invalid_argument("local_transition: dim K must be >= dim H");
    if ((partial_trace_second(psi0, d, dk) - rho0).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("local_transition: psi0 does not purify rho0");
    if ((partial_trace_second(psi1, d, dk) - rho1).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("local_transition: psi1 does not purify rho1");

    // <psi1|(I (x) U)|psi0> = tr(U M) with M[l,k] = sum_i conj(psi1[i,k]) psi0[i,l].
    MatrixXcd m(dk, dk);
    for (int l = 0; l < dk; ++l)
        for (int k = 0; k < dk; ++k) {
            cplx s(0.0, 0.0);
            for (int i = 0; i < d; ++i) s += std::conj(psi1[i * dk + k]) * psi0[i * dk + l];
            m(l, k) = s;
        }
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // tr(UM): U = V W^dag maximizes it at sum of singular values.
    MatrixXcd u = svd.matrixV() * svd.matrixU().adjoint();

    LocalTransition out;
    out.correction = u;
    VectorXcd moved(psi0.size());
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < dk; ++k) {
            cplx s(0.0, 0.0);
            for (int l = 0; l < dk; ++l) s += u(k, l) * psi0[i * dk + l];
            moved[i * dk + k] = s;
        }
    out.achieved = std::abs(psi1.dot(moved));  // Eigen dot conjugates the left arg
    double f2 = std::min(1.0, out.achieved * out.achieved);
    out.trace_distance = 2.0 * std::sqrt(std::max(0.0, 1.0 - f2));
    return out;
}

Eigen::VectorXd realify_vector(const VectorXcd& v) {
    Eigen::VectorXd r(2 * v.size());
    for (int i = 0; i < v.size(); ++i) {
        r[2 * i] = v[i].real();
        r[2 * i + 1] = v[i].imag();
    }
    return r;
}

Eigen::MatrixXd realify_matrix(const MatrixXcd& m) {
    Eigen::MatrixXd r(2 * m.rows(), 2 * m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            double re = m(i, j).real(), im = m(i, j).imag();
            r(2 * i, 2 * j) = re;
            r(2 * i, 2 * j + 1) = -im;
            r(2 * i + 1, 2 * j) = im;
            r(2 * i + 1, 2 * j + 1) = re;
        }
    return r;
}

MatrixXcd realify_state(const MatrixXcd& rho) {
    check_density(rho);
    const int d = static_cast<int>(rho.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    MatrixXcd out = MatrixXcd::Zero(2 * d, 2 * d);
    for (int k = 0; k < d; ++k) {
        double lam = std::max(0.0, es.eigenvalues()[k]);
        if (lam <= kEigenvalueFloor) continue;
        Eigen::VectorXd rv = realify_vector(es.eigenvectors().col(k));
        out += lam * (rv * rv.transpose()).cast<cplx>();
    }
    return out;
}

double weak_triangle_gap(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w) {
    auto unit = [](const Eigen::VectorXd& x) { return std::abs(x.norm() - 1.0) < 1e-9; };
    if (!unit(u) || !unit(v) || !unit(w))
        throw std::invalid_argument("weak_triangle_gap: inputs must be unit vectors");
    if (u.size() != v.size() || v.size() != w.size())
        throw std::invalid_argument("weak_triangle_gap: dimension mismatch");
    double uw = u.dot(w), uv = u.dot(v), vw = v.dot(w);
    return uw - (2.0 * (uv + vw) - 3.0);
}

VectorXcd random_pure(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
    v.normalize();
    return v;
}

MatrixXcd random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<MatrixXcd> qr(g);
    MatrixXcd q = qr.householderQ();
    MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        cplx d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

}  // namespace qbp::qinfo
