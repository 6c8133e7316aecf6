#ifndef OSKIT_TUPLES_HPP
#define OSKIT_TUPLES_HPP

#include <cstdint>
#include <optional>

#include "oskit/complex_matrix.hpp"

namespace oskit::tuples {

// Reduced fraction k/n representing the angle theta = k/n and the unimodular
// q = exp(2 pi i k/n).  Inputs are normalized (k mod n, then gcd-reduced) so
// that 0 <= k < n always holds.
struct RationalAngle {
    long long k = 0;
    long long n = 1;

    RationalAngle() = default;
    RationalAngle(long long kk, long long nn);

    double theta() const { return static_cast<double>(k) / static_cast<double>(n); }
    Cx q() const { return root(k); }
    // exp(2 pi i (k*j mod n) / n), exponent reduced before evaluation
    Cx power(long long j) const { return root((k % n) * (j % n)); }
    RationalAngle conjugated() const { return RationalAngle(n - k, n); }
    RationalAngle minus(const RationalAngle& other) const;
    bool operator==(const RationalAngle& o) const { return k == o.k && n == o.n; }

private:
    Cx root(long long numerator) const;  // exp(2 pi i (numerator mod n)/n)
};

// Self-adjoint matrix of rational angles: lambda_ij = conj(lambda_ji),
// lambda_ii = 1.
struct LambdaMatrix {
    int d = 0;
    std::vector<RationalAngle> angles;  // row-major d*d

    RationalAngle at(int i, int j) const { return angles[static_cast<size_t>(i) * d + j]; }
    void validate() const;
    static LambdaMatrix from_upper(int d, const std::vector<RationalAngle>& upper);
    LambdaMatrix conjugated() const;
};

// d-tuple of equal-size operators stored as a uniform block-diagonal list;
// a dense tuple is a single block.  Direct sums (universal samples, the
// diagonal disk tuple) keep their blocks so norms and transposes stay
// blockwise exact and cheap.
struct OperatorTuple {
    int block_dim = 0;
    int num_blocks = 1;
    std::vector<std::vector<ComplexMatrix>> entries;  // entries[i][b]
    std::optional<RationalAngle> q;
    std::optional<LambdaMatrix> lambda;

    int dim() const { return block_dim * num_blocks; }
    int arity() const { return static_cast<int>(entries.size()); }
    bool block_diagonal() const { return num_blocks > 1; }

    const ComplexMatrix& block(int i, int b) const { return entries[i][b]; }

    // cap-checked dense materialization of operator i
    ComplexMatrix dense(int i) const;
    std::vector<ComplexMatrix> dense_all() const;

    static OperatorTuple from_dense(std::vector<ComplexMatrix> ms,
                                    std::optional<RationalAngle> q = std::nullopt,
                                    std::optional<LambdaMatrix> lambda = std::nullopt);

    // max over i of the unitarity defect, blockwise
    double unitarity_defect() const;
    // max over declared commutation relations of ||t_i t_j - lambda_ij t_j t_i||,
    // blockwise (exact for block-diagonal tuples)
    double commutation_residual() const;
};

ComplexMatrix clock_matrix(const RationalAngle& angle);  // diag(1, q, ..., q^{n-1})
ComplexMatrix shift_matrix(int n);                       // cyclic forward shift

// U = clock, V = shift with U V = q V U exactly (entries are exact roots of
// unity evaluated from reduced angles).
OperatorTuple standard_pair(const RationalAngle& angle);

// (alpha U, beta V); phases must be unimodular within 1e-12.
OperatorTuple phase_scaled_pair(const RationalAngle& angle, Cx alpha, Cx beta);

// Pairwise clock/shift tensor construction of a Lambda-commuting d-tuple:
// one tensor factor per unordered pair {i<j} with nontrivial angle, u_i acting
// as the clock on that factor and u_j as the shift.  dim = prod of pair orders.
OperatorTuple lambda_tuple(const LambdaMatrix& lam);

// Direct sum of phase_scaled_pair over a grid x grid uniform lattice of the
// fundamental phase domain [0, 2pi/n)^2.
OperatorTuple universal_sample(const RationalAngle& angle, int grid);
std::vector<std::pair<Cx, Cx>> universal_phases(const RationalAngle& angle, int grid);

// Entrywise transpose; q-commuting input becomes conj(q)-commuting.
OperatorTuple transpose_tuple(const OperatorTuple& t);

struct ClassifyResult {
    Cx xi;      // u^n
    Cx zeta;    // v^n
    Cx lambda;  // W* u W = lambda U, lambda^n = xi
    Cx eta;     // W* v W = eta V,    eta^n = zeta
    ComplexMatrix W;
    double residual_u = 0.0;
    double residual_v = 0.0;
};

// Canonical form of an irreducible q-commuting pair on C^n.  Throws
// std::invalid_argument on dimension mismatch, std::domain_error when the
// pair is reducible, std::runtime_error when u^n or v^n fails to be scalar.
ClassifyResult classify_irreducible_pair(const OperatorTuple& t, const RationalAngle& angle);

// ||c0 I + sum_i c[i] t_i + d[i] t_i*||, blockwise exact.
double combination_norm(const OperatorTuple& t, Cx c0, const std::vector<Cx>& c,
                        const std::vector<Cx>& d);

// Exact commutant dimension of lambda_tuple(lam) by enumerating the tensor
// Weyl patterns that are fixed by every conjugation.
long long lambda_commutant_dimension(const LambdaMatrix& lam);

// Observed irreducible direct-summand dimensions of lambda_tuple(lam):
// eigenvalue multiplicities of a seeded random Hermitian element of the
// (exactly enumerated) commutant.
std::vector<int> lambda_summand_dimensions(const LambdaMatrix& lam, std::uint64_t seed);

}  // namespace oskit::tuples

#endif
