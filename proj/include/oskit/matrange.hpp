#ifndef OSKIT_MATRANGE_HPP
#define OSKIT_MATRANGE_HPP

#include <cstdint>
#include <optional>

#include "oskit/sdp.hpp"
#include "oskit/tuples.hpp"

namespace oskit::matrange {

using tuples::OperatorTuple;

enum class Verdict { yes, no, inconclusive };
std::string to_string(Verdict v);

// Semidefinite program over unital CP maps from the operator system of a
// (possibly block-diagonal) source tuple into M_out.  A UCP map on the system
// of a direct sum decomposes as a sum of per-block CP maps with jointly
// unital normalization, so the variable is one Choi block per source block.
// Value pins and objectives are expressed through tr(F Phi(A)) = <conj(A) (x) F, C>
// over Hermitian (A, F) pairs.
class ChoiProgramBuilder {
public:
    ChoiProgramBuilder(const OperatorTuple& s, int out_dim);

    // pin the top-left sub x sub compression of Phi(s_i) to targets[i]
    void pin_values(const std::vector<ComplexMatrix>& targets, int sub_dim);

    // maximize Re sum_i tr(B_i* Phi(s_i)); B_i arbitrary out x out matrices
    void set_objective(const std::vector<ComplexMatrix>& B);

    const sdp::SdpProblem& problem() const { return prob_; }

    // Phi(s_i) reconstructed from per-block Choi matrices
    std::vector<ComplexMatrix> map_values(const std::vector<ComplexMatrix>& choi_blocks) const;
    // Phi(X) for an arbitrary dense X (single-block sources only)
    ComplexMatrix map_apply(const std::vector<ComplexMatrix>& choi_blocks,
                            const ComplexMatrix& X) const;

private:
    const OperatorTuple& s_;
    int out_;
    sdp::SdpProblem prob_;
    std::vector<std::vector<ComplexMatrix>> herm_parts_;  // [i][0]=Re part blocks.., [i][1]=Im
    void add_pin(const std::vector<ComplexMatrix>& part_blocks, const ComplexMatrix& F, double rhs);
};

struct UcpReport {
    Verdict verdict = Verdict::inconclusive;
    sdp::FeasibilityResult feasibility;
    std::vector<ComplexMatrix> witness_values;  // Phi(s_i) when feasible
    double tol = 0.0;
};

// Does a UCP map on the operator system of s send s_i to targets[i]?
UcpReport ucp_exists(const OperatorTuple& s, const std::vector<ComplexMatrix>& targets,
                     double tol = 1e-7);

// A (tuple of n x n matrices) in W_n(s)?
UcpReport membership(const OperatorTuple& s, const std::vector<ComplexMatrix>& A,
                     double tol = 1e-7);

struct SupportResult {
    Verdict status = Verdict::inconclusive;
    double value = 0.0;
    sdp::SdpResult sdp;
};

// max over UCP phi: S(s) -> M_level of Re sum_i tr(B_i* phi(s_i))
SupportResult support(const OperatorTuple& s, int level, const std::vector<ComplexMatrix>& B,
                      double tol = 1e-7);

// level-1 support: lambda_max of the Hermitian combination, blockwise exact
double support_level1(const OperatorTuple& s, const std::vector<Cx>& direction);

struct BoundaryResult {
    bool self_adjoint = false;  // fan lives in R^d for self-adjoint tuples, R^{2d} otherwise
    std::vector<std::vector<double>> directions;
    std::vector<double> values;
    std::uint64_t seed = 0;
};
BoundaryResult numerical_range_boundary(const OperatorTuple& s, int directions,
                                        std::uint64_t seed = 0);

enum class EquivVerdict { equivalent, s_to_r_only, r_to_s_only, neither, inconclusive };
std::string to_string(EquivVerdict v);

struct EquivalenceReport {
    EquivVerdict verdict = EquivVerdict::inconclusive;
    bool level1_only = false;      // sampled support comparison, not an SDP certificate
    bool star_isomorphic = false;  // unitary tuples, full equivalence only
    double max_dev_r_in_s = 0.0;   // level-1: max(h_r - h_s); SDP: unused
    double max_dev_s_in_r = 0.0;
    double resolution = 0.0;
    double tol = 0.0;
    int directions = 0;
    std::uint64_t seed = 0;
    std::optional<UcpReport> cert_s_to_r;  // UCP sending s -> r
    std::optional<UcpReport> cert_r_to_s;
};

// compares level-1 support functions on a shared direction fan
EquivalenceReport one_order_equivalent(const OperatorTuple& s, const OperatorTuple& r,
                                       int directions, double tol, std::uint64_t seed = 0);

// UCP existence in both directions; unitary tuples additionally flagged
// *-isomorphic on full equivalence
EquivalenceReport completely_order_equivalent(const OperatorTuple& s, const OperatorTuple& r,
                                              double tol = 1e-7);

struct LevelLinkResult {
    double max_deviation = 0.0;
    int failures = 0;  // solver failures across the fan
};

// |h_W1(c) - h_WN(c e11)| over a level-1 direction fan; expected ~0
LevelLinkResult level_link_check(const OperatorTuple& s, int N, int directions,
                                 std::uint64_t seed = 0);

// joint-diagonal pair whose diagonal value pairs sample the closed unit disk
struct DiskTuple {
    OperatorTuple tuple;
    double resolution = 0.0;  // max mesh spacing
};
DiskTuple disk_tuple(int radial, int angular);

// unit directions in R^k: uniform circle for k = 2, else a seeded Kronecker
// low-discrepancy sequence pushed through Box-Muller
std::vector<std::vector<double>> direction_fan(int k, int count, std::uint64_t seed);

}  // namespace oskit::matrange

#endif
