#ifndef OSKIT_SDP_HPP
#define OSKIT_SDP_HPP

#include <optional>
#include <string>

#include "oskit/complex_matrix.hpp"

namespace oskit::sdp {

// Dense semidefinite programming over complex Hermitian block variables:
//
//   maximize   sum_b Re tr(C_b X_b)
//   subject to sum_b Re tr(A_{k,b} X_b) = b_k   (k = 1..m)
//              X_b >= 0
//
// Complex Hermitian blocks are embedded as real symmetric blocks of doubled
// dimension before solving:
//
//   embed(M) = [[Re M, -Im M], [Im M, Re M]],
//
// which is symmetric for Hermitian M, PSD iff M is, and satisfies
// tr(embed(A) embed(X)) = 2 Re tr(A X).  Right-hand sides and objective
// values double under the embedding; reported values are halved back, and
// the returned primal is the J-symmetrized complex restriction (exactly
// feasible for the complex data whenever the real iterate is feasible).
//
// The solver is an infeasible-start primal-dual interior point method with
// Nesterov-Todd scaling, a Mehrotra-style adaptive centering parameter and a
// dense Cholesky of the Schur complement.  Equality constraints are
// orthonormalized in a presolve pass; exactly inconsistent linear systems
// are reported infeasible with the offending combination as certificate.

enum class Status { optimal, infeasible, unbounded, numerical_failure };

std::string to_string(Status s);

// Hermitian coefficient acting on one PSD block.
struct BlockMatrix {
    int block = 0;
    ComplexMatrix matrix;
};

struct Constraint {
    std::vector<BlockMatrix> coeffs;
    double rhs = 0.0;
};

struct SdpProblem {
    std::vector<int> block_dims;
    std::vector<BlockMatrix> objective;
    std::vector<Constraint> constraints;

    int total_dim() const;
    // Hermiticity within 1e-12, valid block indices, constraint count bound.
    void validate() const;
};

// Farkas-type ray: sum_k y_k A_k <= -eps I blockwise with <y,b> > 0.
struct Certificate {
    std::vector<double> y;
    double eps = 0.0;      // -lambda_max(sum_k y_k A_k), may be 0 for exact linear inconsistency
    double b_dot_y = 0.0;
    bool verified = false;
};

struct SdpResult {
    Status status = Status::numerical_failure;
    std::vector<ComplexMatrix> primal;  // per block; PSD within tolerance when optimal
    std::vector<double> dual;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;              // |primal - dual objective|
    double primal_residual = 0.0;  // max_k |<A_k,X> - b_k|
    double dual_residual = 0.0;    // max entry of |sum y A - C - Z|
    double min_primal_eig = 0.0;
    int iterations = 0;
    std::optional<Certificate> certificate;
    std::string message;
};

// tol must lie in [1e-10, 1e-4].
SdpResult solve(const SdpProblem& p, double tol = 1e-7);

// Phase-I feasibility: maximize t subject to the constraints with X - t I >= 0
// and t <= 1.  The original system is feasible iff the optimal t >= -tol.
struct FeasibilityResult {
    bool definitive = false;  // false when the solver failed (inconclusive)
    bool feasible = false;
    double slack = 0.0;  // optimal t
    std::vector<ComplexMatrix> witness;  // X = Y + t I when feasible
    std::optional<Certificate> certificate;
    SdpResult phase1;
};

FeasibilityResult feasibility(const SdpProblem& p, double tol = 1e-7);

// Re-checks a candidate Farkas ray through the public eigensolver, independent
// of solver internals.
Certificate verify_certificate(const SdpProblem& p, const std::vector<double>& y);

namespace detail {
ComplexMatrix embed_real(const ComplexMatrix& M);
ComplexMatrix restrict_complex(const ComplexMatrix& R);
}  // namespace detail

}  // namespace oskit::sdp

#endif
