#include "oskit/numerics.hpp"

#include <algorithm>
#include <numeric>

#include "oskit/kernels.hpp"

namespace oskit {

NumericsConfig& numerics_config() {
    static NumericsConfig cfg;
    return cfg;
}

namespace {
void sort_ascending(std::vector<double>& d, ComplexMatrix* Q) {
    const int n = static_cast<int>(d.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n);
    for (int j = 0; j < n; ++j) ds[j] = d[idx[j]];
    d = std::move(ds);
    if (Q) {
        ComplexMatrix Qs(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Qs(i, j) = (*Q)(i, idx[j]);
        *Q = std::move(Qs);
    }
}
}  // namespace

EigenResult hermitian_eigen(const ComplexMatrix& M, double herm_tol) {
    if (M.hermiticity_defect() >= herm_tol)
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian within tolerance");
    EigenResult r;
    std::vector<double> e;
    kernels::tridiagonalize(M, r.values, e, r.vectors, true);
    kernels::tql(r.values, e, r.vectors, true);
    sort_ascending(r.values, &r.vectors);
    return r;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& M, double herm_tol) {
    if (M.hermiticity_defect() >= herm_tol)
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian within tolerance");
    std::vector<double> d, e;
    ComplexMatrix dummy;
    kernels::tridiagonalize(M, d, e, dummy, false);
    kernels::tql(d, e, dummy, false);
    std::sort(d.begin(), d.end());
    return d;
}

double lambda_max(const ComplexMatrix& M) {
    auto d = hermitian_eigenvalues(M);
    return d.empty() ? 0.0 : d.back();
}

double lambda_min(const ComplexMatrix& M) {
    auto d = hermitian_eigenvalues(M);
    return d.empty() ? 0.0 : d.front();
}

double operator_norm(const ComplexMatrix& M) {
    const int n = M.dim;
    if (n == 0) return 0.0;
    ComplexMatrix E(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            E(i, n + j) = M(i, j);
            E(n + j, i) = std::conj(M(i, j));
        }
    auto d = hermitian_eigenvalues(E, 1e-6);  // Hermitian by construction
    return d.back();
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    const long long prod = static_cast<long long>(A.dim) * B.dim;
    if (prod > numerics_config().dim_cap)
        throw std::length_error("kron: product dimension exceeds configured cap");
    const int na = A.dim, nb = B.dim, n = static_cast<int>(prod);
    ComplexMatrix K(n);
    for (int i = 0; i < na; ++i)
        for (int k = 0; k < na; ++k) {
            const Cx aik = A(i, k);
            if (aik == Cx{0.0, 0.0}) continue;
            for (int j = 0; j < nb; ++j)
                for (int l = 0; l < nb; ++l) K(i * nb + j, k * nb + l) = aik * B(j, l);
        }
    return K;
}

std::vector<double> singular_values(const std::vector<Cx>& mat, int rows, int cols) {
    // one-sided Jacobi: rotate column pairs until mutually orthogonal
    std::vector<Cx> a = mat;
    auto col = [&](int j) { return j; };
    auto dot = [&](int i, int j) {  // c_i* c_j
        Cx s{0.0, 0.0};
        for (int r = 0; r < rows; ++r)
            s += std::conj(a[static_cast<size_t>(r) * cols + col(i)]) *
                 a[static_cast<size_t>(r) * cols + col(j)];
        return s;
    };
    std::vector<double> sq(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += std::norm(a[static_cast<size_t>(r) * cols + j]);
        sq[j] = s;
    }
    const int max_sweeps = 40;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < cols - 1; ++i) {
            for (int j = i + 1; j < cols; ++j) {
                Cx g = dot(i, j);
                double ga = std::abs(g);
                if (ga <= 1e-30) continue;
                double denom = std::sqrt(std::max(sq[i] * sq[j], 1e-300));
                off = std::max(off, ga / denom);
                if (ga <= 1e-15 * denom) continue;
                // unitary 2x2 rotation diagonalizing [[sq_i, g],[conj g, sq_j]]
                double tau = (sq[j] - sq[i]) / (2.0 * ga);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                Cx pj = std::conj(g / ga);  // phase absorbed into column j
                for (int r = 0; r < rows; ++r) {
                    Cx& ci = a[static_cast<size_t>(r) * cols + i];
                    Cx& cj = a[static_cast<size_t>(r) * cols + j];
                    Cx xi = ci, xj = pj * cj;
                    ci = c * xi - s * xj;
                    cj = s * xi + c * xj;
                }
                double si = 0.0, sj = 0.0;
                for (int r = 0; r < rows; ++r) {
                    si += std::norm(a[static_cast<size_t>(r) * cols + i]);
                    sj += std::norm(a[static_cast<size_t>(r) * cols + j]);
                }
                sq[i] = si;
                sq[j] = sj;
            }
        }
        if (off < 1e-14) break;
    }
    std::vector<double> sv(cols);
    for (int j = 0; j < cols; ++j) sv[j] = std::sqrt(sq[j]);
    std::sort(sv.rbegin(), sv.rend());
    return sv;
}

int commutant_dimension(const std::vector<ComplexMatrix>& tuple) {
    if (tuple.empty()) throw std::invalid_argument("commutant_dimension: empty tuple");
    const int m = tuple[0].dim;
    for (const auto& t : tuple)
        if (t.dim != m)
            throw std::invalid_argument("commutant_dimension: matrices of unequal dimension");
    if (m == 0) return 0;
    if (static_cast<long long>(m) * m > 4096)
        throw std::length_error("commutant_dimension: dimension too large for the dense Sylvester stack");

    // stacked operators vec(X) -> vec(T X - X T), row-major vec, for T = t_i and t_i*
    const int d = static_cast<int>(tuple.size());
    const int cols = m * m;
    const int rows = 2 * d * cols;
    std::vector<Cx> K(static_cast<size_t>(rows) * cols, Cx{0.0, 0.0});
    auto emit = [&](int block, const ComplexMatrix& T) {
        // (T X)[i][j] = sum_k T[i][k] X[k][j]; (X T)[i][j] = sum_k X[i][k] T[k][j]
        const size_t base = static_cast<size_t>(block) * cols;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const size_t r = base + static_cast<size_t>(i) * m + j;
                for (int k = 0; k < m; ++k) {
                    K[r * cols + static_cast<size_t>(k) * m + j] += T(i, k);
                    K[r * cols + static_cast<size_t>(i) * m + k] -= T(k, j);
                }
            }
    };
    for (int i = 0; i < d; ++i) {
        emit(2 * i, tuple[i]);
        emit(2 * i + 1, tuple[i].adjoint());
    }
    auto sv = singular_values(K, rows, cols);
    const double cutoff = numerics_config().nullspace_rel_cutoff * (sv.empty() ? 0.0 : sv[0]);
    int null_dim = 0;
    for (double s : sv)
        if (s <= cutoff) ++null_dim;
    if (sv[0] == 0.0) return cols;  // all t_i scalar multiples of the identity
    return null_dim;
}

ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix M(dim);
    for (int i = 0; i < dim; ++i) {
        M(i, i) = Cx{g(rng), 0.0};
        for (int j = i + 1; j < dim; ++j) {
            Cx z{g(rng) * 0.5, g(rng) * 0.5};
            M(i, j) = z;
            M(j, i) = std::conj(z);
        }
    }
    return M;
}

ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
    // modified Gram-Schmidt on a Gaussian matrix, one re-orthogonalization pass
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix A(dim);
    for (auto& z : A.a) z = Cx{g(rng), g(rng)};
    for (int j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                Cx proj{0.0, 0.0};
                for (int i = 0; i < dim; ++i) proj += std::conj(A(i, k)) * A(i, j);
                for (int i = 0; i < dim; ++i) A(i, j) -= proj * A(i, k);
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < dim; ++i) nrm += std::norm(A(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) throw std::runtime_error("random_unitary: degenerate draw");
        for (int i = 0; i < dim; ++i) A(i, j) /= nrm;
    }
    return A;
}

std::vector<Cx> random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Cx> v(dim);
    double nrm = 0.0;
    for (auto& z : v) {
        z = Cx{g(rng), g(rng)};
        nrm += std::norm(z);
    }
    nrm = std::sqrt(nrm);
    for (auto& z : v) z /= nrm;
    return v;
}

}  // namespace oskit
