#ifndef OSKIT_COMPLEX_MATRIX_HPP
#define OSKIT_COMPLEX_MATRIX_HPP

#include <complex>
#include <vector>
#include <string>
#include <stdexcept>
#include <cmath>

namespace oskit {

using Cx = std::complex<double>;

// Dense square complex matrix, row-major.  The universal carrier for
// operators, Choi matrices and Hermitian combinations.
struct ComplexMatrix {
    int dim = 0;
    std::vector<Cx> a;  // dim*dim entries, a[i*dim+j]

    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : dim(n), a(static_cast<size_t>(n) * n, Cx{0.0, 0.0}) {
        if (n < 0) throw std::invalid_argument("ComplexMatrix: negative dimension");
    }

    Cx& operator()(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
    const Cx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<Cx>& d) {
        ComplexMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim; ++i) m(i, i) = d[i];
        return m;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    ComplexMatrix conj() const {
        ComplexMatrix m(dim);
        for (size_t k = 0; k < a.size(); ++k) m.a[k] = std::conj(a[k]);
        m.dim = dim;
        return m;
    }

    Cx trace() const {
        Cx t{0.0, 0.0};
        for (int i = 0; i < dim; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Cx& z : a) s += std::norm(z);
        return std::sqrt(s);
    }

    // max_{i,j} |M[i][j] - conj(M[j][i])|
    double hermiticity_defect() const {
        double d = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                double v = std::abs((*this)(i, j) - std::conj((*this)(j, i)));
                if (v > d) d = v;
            }
        return d;
    }

    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }

    // (M + M*)/2
    ComplexMatrix hermitized() const {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same(o);
        for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same(o);
        for (size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
        return *this;
    }
    ComplexMatrix& operator*=(Cx s) {
        for (Cx& z : a) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix x, const ComplexMatrix& y) { return x += y; }
    friend ComplexMatrix operator-(ComplexMatrix x, const ComplexMatrix& y) { return x -= y; }
    friend ComplexMatrix operator*(Cx s, ComplexMatrix x) { return x *= s; }

private:
    void check_same(const ComplexMatrix& o) const {
        if (o.dim != dim) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }
};

// Re tr(A* B); real-valued Hilbert-Schmidt pairing.
inline double hs_inner_re(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.dim != B.dim) throw std::invalid_argument("hs_inner_re: dimension mismatch");
    double s = 0.0;
    for (size_t k = 0; k < A.a.size(); ++k)
        s += A.a[k].real() * B.a[k].real() + A.a[k].imag() * B.a[k].imag();
    return s;
}

inline double max_abs_diff(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.dim != B.dim) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double d = 0.0;
    for (size_t k = 0; k < A.a.size(); ++k) d = std::max(d, std::abs(A.a[k] - B.a[k]));
    return d;
}

}  // namespace oskit

#endif
