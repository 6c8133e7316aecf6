#ifndef OSKIT_CHOI_HPP
#define OSKIT_CHOI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "oskit/complex_matrix.hpp"

namespace oskit::choi {

// Linear map M_m -> M_m' stored through its Choi matrix
//
//   C = sum_ij E_ij (x) Phi(E_ij)            (input slot first)
//   C[(i,k),(j,l)] = Phi(E_ij)[k][l]
//
// C is Hermitian iff the map is self-adjointness preserving, PSD iff it is
// completely positive.
struct ChoiMap {
    int in_dim = 0;
    int out_dim = 0;
    ComplexMatrix choi;

    Cx at(int i, int k, int j, int l) const {
        return choi(i * out_dim + k, j * out_dim + l);
    }
    Cx& at(int i, int k, int j, int l) { return choi(i * out_dim + k, j * out_dim + l); }

    bool is_unital(double tol = 1e-10) const;
};

// Assemble from images of the full matrix-unit basis of M_m.  Each pair is
// (basis matrix, image); the basis matrices must together be exactly the m^2
// matrix units.
ChoiMap choi_of(const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& map_values);

// Assemble from images indexed as images[i*m+j] = Phi(E_ij).
ChoiMap choi_from_images(int in_dim, int out_dim, const std::vector<ComplexMatrix>& images);

// Phi(X) by partial contraction of the Choi matrix.
ComplexMatrix apply(const ChoiMap& phi, const ComplexMatrix& X);

// Choi's criterion: the map is CP iff the Choi matrix is PSD.
struct CpVerdict {
    double min_eigenvalue = 0.0;
    bool completely_positive = false;
};
CpVerdict is_cp(const ChoiMap& phi);

// A |-> n tr(A) I_N - A on M_N; n-positive but not CP for N > n.
ChoiMap tomiyama_map(int n, int N);

// Phi2 after Phi1.
ChoiMap compose(const ChoiMap& phi2, const ChoiMap& phi1);

// Pure state X = v v* as a map C -> M_dim ... convenience builders.
ChoiMap vector_state(const std::vector<Cx>& v);        // M_dim -> M_1, X |-> v* X v
ChoiMap identity_map(int dim);
ChoiMap conjugation_map(const ComplexMatrix& G);       // X |-> G* X G

// Alternating eigenvector/witness search for a level-k positivity violation:
// a PSD, trace-one X on C^k (x) C^m with lambda_min((id_k (x) Phi)(X)) < 0.
// A missing witness is not a proof of k-positivity and the report says so.
struct ViolationReport {
    bool found = false;
    int level = 0;
    int restarts = 0;
    std::uint64_t seed = 0;
    double violation = 0.0;           // most negative eigenvalue seen, certified when found
    std::optional<ComplexMatrix> witness;
    std::string note;
};
ViolationReport positivity_violation_search(const ChoiMap& phi, int level, int restarts,
                                            std::uint64_t seed);

// (id_k (x) Phi)(X) for X on C^k (x) C^m.
ComplexMatrix apply_amplified(const ChoiMap& phi, int level, const ComplexMatrix& X);

}  // namespace oskit::choi

#endif
