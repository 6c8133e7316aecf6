#ifndef OSKIT_EXTREMAL_HPP
#define OSKIT_EXTREMAL_HPP

#include <cstdint>

#include "oskit/choi.hpp"
#include "oskit/matrange.hpp"
#include "oskit/tuples.hpp"

namespace oskit::extremal {

using tuples::OperatorTuple;
using tuples::RationalAngle;

// Irreducible q-commuting unitary pairs are exactly the restrictions of
// boundary representations at level n.
struct BoundaryCheck {
    bool verdict = false;
    double unitarity_defect = 0.0;
    double commutation_residual = 0.0;
    int commutant_dim = 0;
    bool dimension_ok = false;
};
BoundaryCheck is_boundary_restriction(const ComplexMatrix& u, const ComplexMatrix& v,
                                      const RationalAngle& angle);

// One-step dilation search: over sampled off-diagonal directions B, maximize
// Re sum_i tr(B_i* offdiag(Psi(s_i))) over unital CP Psi into M_{k+1} whose
// top-left k x k compression agrees with phi on every s_i.  The reported
// upper bound (dual value) below tol is consistent with maximality; a value
// above tol certifies a nontrivial dilation.
struct CouplingResult {
    double coupling = 0.0;        // best achieved primal value
    double upper_bound = 0.0;     // best direction's dual value
    int best_direction = -1;
    int directions = 0;
    std::uint64_t seed = 0;
    bool solver_clean = true;     // all direction solves returned optimal
    choi::ChoiMap best_dilation;  // optimizer of the best direction (tie-broken)
};
CouplingResult dilation_coupling_max(const OperatorTuple& s, const choi::ChoiMap& phi,
                                     int directions, std::uint64_t seed, double tol = 1e-6);

enum class ChainStop { maximal, max_steps, solver_failure };

struct ChainReport {
    std::vector<int> levels;  // levels visited, starting level first
    ChainStop stop = ChainStop::solver_failure;
    std::vector<double> couplings;  // coupling found at each visited level
    double tol = 0.0;
    std::uint64_t seed = 0;
    // a walk reaching the representation level is snapped to the exact
    // boundary restriction it approximates; the distance is reported
    bool snapped = false;
    double snap_distance = 0.0;
};

// Repeatedly extract a nontrivial one-step dilation while the coupling stays
// above tol.  For q_{n,k}-commuting tuples chains from pure states terminate
// at level <= n.
ChainReport extreme_chain_walk(const OperatorTuple& s, const choi::ChoiMap& start, int max_steps,
                               int directions, std::uint64_t seed, double tol = 1e-6);

}  // namespace oskit::extremal

#endif
