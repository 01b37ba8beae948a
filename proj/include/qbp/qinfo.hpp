#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace qbp::qinfo {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr double kEigenvalueFloor = 1e-12;

// Hermitian/PSD/trace-1 within 1e-10 is enforced by operations that consume
// density matrices; violations throw std::invalid_argument.
void check_density(const MatrixXcd& rho, double tol = 1e-10);

// Von Neumann entropy in bits; eigenvalues below 1e-12 count as zero.
double entropy(const MatrixXcd& rho);

// Classical-quantum ensemble: classical label with probability and state.
struct CqItem {
    double prob = 0.0;
    MatrixXcd state;
};
using CqEnsemble = std::vector<CqItem>;

// I(rho(X):X) on the joint state sum_x p_x rho(x) (x) |x><x|. Equals
// S(avg) - sum p_x S(rho(x)) for c-q states.
double cq_mutual_info(const CqEnsemble& ensemble);

// Conditional variant over a second classical label: the ensemble is grouped
// by y and the per-y mutual informations are averaged.
struct CqCondItem {
    double prob = 0.0;  // joint Pr(x,y)
    int y = 0;
    MatrixXcd state;
};
double cq_mutual_info_conditional(const std::vector<CqCondItem>& ensemble);

double fidelity(const MatrixXcd& rho, const MatrixXcd& sigma);
double trace_distance(const MatrixXcd& rho, const MatrixXcd& sigma);

// Canonical purification over H (x) K with dim K = dim H, built from the
// eigen-decomposition; partial_trace_second recovers the input.
VectorXcd purify(const MatrixXcd& rho);
MatrixXcd partial_trace_second(const VectorXcd& psi, int dim_first, int dim_second);
MatrixXcd partial_trace_first(const VectorXcd& psi, int dim_first, int dim_second);

struct LocalTransition {
    MatrixXcd correction;   // unitary U on K
    double achieved;        // |<psi1|(I (x) U)|psi0>| = F(rho0, rho1)
    double trace_distance;  // || (I(x)U)psi0 - psi1 ||_t as pure states
};

// Uhlmann optimum: U is the polar factor of the cross-overlap operator, so
// the achieved overlap equals the fidelity of the reduced states.
LocalTransition local_transition(const MatrixXcd& rho0, const MatrixXcd& rho1,
                                 const VectorXcd& psi0, const VectorXcd& psi1);

// Realification: complex entry a becomes (Re a, Im a) in vectors and the
// 2x2 block [[Re,-Im],[Im,Re]] in matrices; density matrices keep their
// entropy with eigenvalues halved in pairs... (state realification per the
// eigen decomposition: same spectrum plus zeros).
Eigen::VectorXd realify_vector(const VectorXcd& v);
Eigen::MatrixXd realify_matrix(const MatrixXcd& m);
MatrixXcd realify_state(const MatrixXcd& rho);

// <u|w> - (2(<u|v> + <v|w>) - 3) for real unit vectors; always >= 0.
double weak_triangle_gap(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w);

// Seeded random states for the property suites.
VectorXcd random_pure(int dim, std::mt19937_64& rng);
MatrixXcd random_density(int dim, std::mt19937_64& rng);
MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

}  // namespace qbp::qinfo
