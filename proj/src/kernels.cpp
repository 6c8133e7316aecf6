#include "oskit/kernels.hpp"

#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oskit::kernels {

namespace {
std::atomic<int> g_threads{0};

int effective_threads() {
    int t = g_threads.load();
#ifdef _OPENMP
    if (t <= 0) return omp_get_max_threads();
    return t;
#else
    (void)t;
    return 1;
#endif
}

// sqrt(a^2+b^2) without destructive overflow
double pythag(double a, double b) {
    double aa = std::fabs(a), ab = std::fabs(b);
    if (aa > ab) {
        double r = ab / aa;
        return aa * std::sqrt(1.0 + r * r);
    }
    if (ab == 0.0) return 0.0;
    double r = aa / ab;
    return ab * std::sqrt(1.0 + r * r);
}
}  // namespace

void set_threads(int n) {
    g_threads.store(n);
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

int threads() { return effective_threads(); }

// ---------------------------------------------------------------------------
// matmul
// ---------------------------------------------------------------------------

namespace {
inline void mul_row_range(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B,
                          int i0, int i1) {
    const int n = A.dim;
    for (int i = i0; i < i1; ++i) {
        Cx* crow = &C.a[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) crow[j] = Cx{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            const Cx aik = A.a[static_cast<size_t>(i) * n + k];
            if (aik == Cx{0.0, 0.0}) continue;
            const Cx* brow = &B.a[static_cast<size_t>(k) * n];
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}
}  // namespace

void serial::mul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.dim != B.dim) throw std::invalid_argument("mul: dimension mismatch");
    if (C.dim != A.dim) C = ComplexMatrix(A.dim);
    mul_row_range(C, A, B, 0, A.dim);
}

void parallel::mul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.dim != B.dim) throw std::invalid_argument("mul: dimension mismatch");
    if (C.dim != A.dim) C = ComplexMatrix(A.dim);
    const int n = A.dim;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) mul_row_range(C, A, B, i, i + 1);
}

ComplexMatrix mul(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix C(A.dim);
    if (A.dim >= kParallelCutoff && effective_threads() > 1)
        parallel::mul_into(C, A, B);
    else
        serial::mul_into(C, A, B);
    return C;
}

ComplexMatrix mul_adjL(const ComplexMatrix& A, const ComplexMatrix& B) { return mul(A.adjoint(), B); }
ComplexMatrix mul_adjR(const ComplexMatrix& A, const ComplexMatrix& B) { return mul(A, B.adjoint()); }

// ---------------------------------------------------------------------------
// Householder tridiagonalization of a Hermitian matrix.
//
// For each column k a reflector H = I - tau v v* (v[0] = 1) is chosen so that
// H* x = beta e1 with real beta, where x is the subdiagonal part of column k.
// The Hermitian rank-2 update A <- H* A H uses
//   p = tau A v,  w = p - (conj(tau) (v* p) / 2) v,  A <- A - v w* - w v*.
// Trivial reflectors (column already reduced) are skipped, which makes
// diagonal and tridiagonal inputs cost O(n^2).
// ---------------------------------------------------------------------------

namespace {

template <bool Parallel>
void tridiag_impl(const ComplexMatrix& Ain, std::vector<double>& d, std::vector<double>& e,
                  ComplexMatrix& P, bool want_vectors) {
    const int n = Ain.dim;
    ComplexMatrix A = Ain;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (want_vectors) P = ComplexMatrix::identity(n);
    if (n == 0) return;

    std::vector<Cx> v(n), p(n), w(n);
    std::vector<Cx> taus(n, Cx{0.0, 0.0});
    std::vector<std::vector<Cx>> vs;  // reflectors kept for the P accumulation
    if (want_vectors) vs.assign(n, {});

    for (int k = 0; k < n - 1; ++k) {
        Cx alpha = A(k + 1, k);
        double xnorm2 = 0.0;
        for (int i = k + 2; i < n; ++i) xnorm2 += std::norm(A(i, k));

        double beta;
        Cx tau{0.0, 0.0};
        if (xnorm2 == 0.0 && alpha.imag() == 0.0) {
            beta = alpha.real();  // column already in real tridiagonal form
        } else {
            double anorm = pythag(std::abs(alpha), std::sqrt(xnorm2));
            beta = (alpha.real() >= 0.0) ? -anorm : anorm;
            tau = (Cx{beta, 0.0} - alpha) / beta;
            Cx scale = Cx{1.0, 0.0} / (alpha - beta);
            v[k + 1] = Cx{1.0, 0.0};
            for (int i = k + 2; i < n; ++i) v[i] = scale * A(i, k);
        }
        e[k + 1] = beta;

        if (tau != Cx{0.0, 0.0}) {
            // p = tau * A[k+1:, k+1:] * v
            auto p_row = [&](int i) {
                Cx s{0.0, 0.0};
                const Cx* arow = &A.a[static_cast<size_t>(i) * n];
                for (int j = k + 1; j < n; ++j) s += arow[j] * v[j];
                p[i] = tau * s;
            };
            if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
                for (int i = k + 1; i < n; ++i) p_row(i);
            } else {
                for (int i = k + 1; i < n; ++i) p_row(i);
            }

            Cx vp{0.0, 0.0};
            for (int i = k + 1; i < n; ++i) vp += std::conj(v[i]) * p[i];
            Cx kappa = 0.5 * std::conj(tau) * vp;  // real-valued: |tau|^2 (v*Av)/2
            for (int i = k + 1; i < n; ++i) w[i] = p[i] - kappa * v[i];

            auto rank2_row = [&](int i) {
                Cx* arow = &A.a[static_cast<size_t>(i) * n];
                const Cx vi = v[i], wi = w[i];
                for (int j = k + 1; j < n; ++j)
                    arow[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
            };
            if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
                for (int i = k + 1; i < n; ++i) rank2_row(i);
            } else {
                for (int i = k + 1; i < n; ++i) rank2_row(i);
            }

            taus[k] = tau;
            if (want_vectors) vs[k].assign(v.begin() + (k + 1), v.begin() + n);
        }
    }

    for (int k = 0; k < n; ++k) d[k] = A(k, k).real();

    if (want_vectors) {
        // P = H_0 H_1 ... H_{n-2}; right-multiply in factorization order.
        for (int k = 0; k < n - 1; ++k) {
            if (taus[k] == Cx{0.0, 0.0}) continue;
            const std::vector<Cx>& vk = vs[k];
            const Cx tau = taus[k];
            auto apply_row = [&](int i) {
                Cx* prow = &P.a[static_cast<size_t>(i) * n];
                Cx s{0.0, 0.0};
                for (int j = k + 1; j < n; ++j) s += prow[j] * vk[j - k - 1];
                s *= tau;
                for (int j = k + 1; j < n; ++j) prow[j] -= s * std::conj(vk[j - k - 1]);
            };
            if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
                for (int i = 0; i < n; ++i) apply_row(i);
            } else {
                for (int i = 0; i < n; ++i) apply_row(i);
            }
        }
    }
}

template <bool Parallel>
void tql_impl(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P,
              bool want_vectors) {
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 2.3e-16 * dd + 1e-300) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("tql: no convergence in 60 iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, shift = 0.0;
                bool deflated = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= shift;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - shift;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    shift = s * r;
                    d[i + 1] = g + shift;
                    g = c * r - b;
                    if (want_vectors) {
                        auto rot_row = [&](int row) {
                            Cx* pr = &P.a[static_cast<size_t>(row) * n];
                            Cx f2 = pr[i + 1];
                            pr[i + 1] = s * pr[i] + c * f2;
                            pr[i] = c * pr[i] - s * f2;
                        };
                        if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
                            for (int row = 0; row < n; ++row) rot_row(row);
                        } else {
                            for (int row = 0; row < n; ++row) rot_row(row);
                        }
                    }
                }
                if (deflated) continue;
                d[l] -= shift;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

void serial::tridiagonalize(const ComplexMatrix& A, std::vector<double>& d, std::vector<double>& e,
                            ComplexMatrix& P, bool want_vectors) {
    tridiag_impl<false>(A, d, e, P, want_vectors);
}
void parallel::tridiagonalize(const ComplexMatrix& A, std::vector<double>& d,
                              std::vector<double>& e, ComplexMatrix& P, bool want_vectors) {
    tridiag_impl<true>(A, d, e, P, want_vectors);
}
void serial::tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P,
                 bool want_vectors) {
    tql_impl<false>(d, e, P, want_vectors);
}
void parallel::tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P,
                   bool want_vectors) {
    tql_impl<true>(d, e, P, want_vectors);
}

void tridiagonalize(const ComplexMatrix& A, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix& P, bool want_vectors) {
    if (A.dim >= kParallelCutoff && effective_threads() > 1)
        parallel::tridiagonalize(A, d, e, P, want_vectors);
    else
        serial::tridiagonalize(A, d, e, P, want_vectors);
}

void tql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& P, bool want_vectors) {
    if (static_cast<int>(d.size()) >= kParallelCutoff && effective_threads() > 1)
        parallel::tql(d, e, P, want_vectors);
    else
        serial::tql(d, e, P, want_vectors);
}

}  // namespace oskit::kernels
