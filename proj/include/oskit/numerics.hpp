#ifndef OSKIT_NUMERICS_HPP
#define OSKIT_NUMERICS_HPP

#include <random>

#include "oskit/complex_matrix.hpp"

namespace oskit {

// Library-wide numeric knobs.
struct NumericsConfig {
    double nullspace_rel_cutoff = 1e-8;  // singular values below cutoff*sigma_max count as zero
    int dim_cap = 8192;                  // guard for kron / dense materialization
};
NumericsConfig& numerics_config();

struct EigenResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // unitary; column j pairs with values[j]
};

// Hermitian eigendecomposition via Householder tridiagonalization and
// implicit-shift QL.  Throws std::invalid_argument when the input fails the
// Hermiticity tolerance, std::runtime_error on QL non-convergence.
EigenResult hermitian_eigen(const ComplexMatrix& M, double herm_tol = 1e-10);

// Eigenvalues only (vector accumulation skipped).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& M, double herm_tol = 1e-10);

// Largest singular value, computed as the top eigenvalue of [[0,M],[M*,0]].
double operator_norm(const ComplexMatrix& M);

// Largest eigenvalue of a Hermitian matrix.
double lambda_max(const ComplexMatrix& M);
double lambda_min(const ComplexMatrix& M);

// Kronecker product; (A x B)[(i,j),(k,l)] = A[i][k] B[j][l].
// Throws std::length_error when dim(A)*dim(B) exceeds the configured cap.
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

// Dimension of {X : X t_i = t_i X and X t_i* = t_i* X for all i}, computed as
// the nullspace dimension of the stacked Sylvester operators
// t_i (x) I - I (x) t_i^T acting on vec(X).  One-sided Jacobi keeps the small
// singular values clean (no Gram squaring).
int commutant_dimension(const std::vector<ComplexMatrix>& tuple);

// Singular values of an arbitrary rows x cols complex matrix (descending),
// one-sided Jacobi orthogonalization.  Used by commutant_dimension and tests.
std::vector<double> singular_values(const std::vector<Cx>& mat, int rows, int cols);

// Seeded test/search helpers.
ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng);
ComplexMatrix random_unitary(int dim, std::mt19937_64& rng);
std::vector<Cx> random_unit_vector(int dim, std::mt19937_64& rng);

}  // namespace oskit

#endif
