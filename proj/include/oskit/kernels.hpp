#ifndef OSKIT_KERNELS_HPP
#define OSKIT_KERNELS_HPP

#include "oskit/complex_matrix.hpp"

namespace oskit::kernels {

// Thread control.  0 = library default (all logical cores).  Parallel and
// serial variants perform identical per-element arithmetic, so results are
// bitwise equal regardless of the thread count.
void set_threads(int n);
int threads();

// Problem sizes below this stay on the serial path (parallel overhead
// dominates for small matrices).
constexpr int kParallelCutoff = 96;

namespace serial {
void mul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B);
// Householder reduction A = P T P* with T real symmetric tridiagonal.
// On return d holds the diagonal, e the subdiagonal (e[0] unused), and P the
// accumulated unitary when want_vectors.
void tridiagonalize(const ComplexMatrix& A, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix& P, bool want_vectors);
// Implicit-shift QL on a real symmetric tridiagonal; rotations are folded
// into the columns of P when want_vectors.  Eigenvalues land in d unsorted.
void tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P, bool want_vectors);
}  // namespace serial

namespace parallel {
void mul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B);
void tridiagonalize(const ComplexMatrix& A, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix& P, bool want_vectors);
void tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P, bool want_vectors);
}  // namespace parallel

// Size-dispatched entry points used by the rest of the library.
ComplexMatrix mul(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix mul_adjL(const ComplexMatrix& A, const ComplexMatrix& B);  // A* B
ComplexMatrix mul_adjR(const ComplexMatrix& A, const ComplexMatrix& B);  // A B*
void tridiagonalize(const ComplexMatrix& A, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix& P, bool want_vectors);
void tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P, bool want_vectors);

}  // namespace oskit::kernels

#endif
