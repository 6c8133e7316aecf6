#include "oskit/choi.hpp"

#include <cmath>
#include <random>

#include "oskit/numerics.hpp"

namespace oskit::choi {

bool ChoiMap::is_unital(double tol) const {
    ComplexMatrix img = apply(*this, ComplexMatrix::identity(in_dim));
    return max_abs_diff(img, ComplexMatrix::identity(out_dim)) < tol;
}

ChoiMap choi_from_images(int in_dim, int out_dim, const std::vector<ComplexMatrix>& images) {
    if (static_cast<int>(images.size()) != in_dim * in_dim)
        throw std::invalid_argument("choi_from_images: need one image per matrix unit");
    ChoiMap phi;
    phi.in_dim = in_dim;
    phi.out_dim = out_dim;
    phi.choi = ComplexMatrix(in_dim * out_dim);
    for (int i = 0; i < in_dim; ++i)
        for (int j = 0; j < in_dim; ++j) {
            const ComplexMatrix& img = images[static_cast<size_t>(i) * in_dim + j];
            if (img.dim != out_dim)
                throw std::invalid_argument("choi_from_images: image dimension mismatch");
            for (int k = 0; k < out_dim; ++k)
                for (int l = 0; l < out_dim; ++l) phi.at(i, k, j, l) = img(k, l);
        }
    return phi;
}

ChoiMap choi_of(const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& map_values) {
    if (map_values.empty()) throw std::invalid_argument("choi_of: empty basis");
    const int m = map_values.front().first.dim;
    const int mp = map_values.front().second.dim;
    if (static_cast<int>(map_values.size()) != m * m)
        throw std::invalid_argument("choi_of: basis must consist of all matrix units");
    std::vector<ComplexMatrix> images(static_cast<size_t>(m) * m);
    std::vector<bool> seen(static_cast<size_t>(m) * m, false);
    for (const auto& [basis, image] : map_values) {
        if (basis.dim != m || image.dim != mp)
            throw std::invalid_argument("choi_of: inconsistent dimensions");
        int bi = -1, bj = -1;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const Cx z = basis(i, j);
                if (std::abs(z) < 1e-14) continue;
                if (bi >= 0 || std::abs(z - Cx{1.0, 0.0}) > 1e-12)
                    throw std::invalid_argument("choi_of: basis matrix is not a matrix unit");
                bi = i;
                bj = j;
            }
        if (bi < 0) throw std::invalid_argument("choi_of: zero basis matrix");
        const size_t idx = static_cast<size_t>(bi) * m + bj;
        if (seen[idx]) throw std::invalid_argument("choi_of: duplicated matrix unit");
        seen[idx] = true;
        images[idx] = image;
    }
    return choi_from_images(m, mp, images);
}

ComplexMatrix apply(const ChoiMap& phi, const ComplexMatrix& X) {
    if (X.dim != phi.in_dim) throw std::invalid_argument("choi::apply: dimension mismatch");
    ComplexMatrix Y(phi.out_dim);
    for (int i = 0; i < phi.in_dim; ++i)
        for (int j = 0; j < phi.in_dim; ++j) {
            const Cx x = X(i, j);
            if (x == Cx{0.0, 0.0}) continue;
            for (int k = 0; k < phi.out_dim; ++k)
                for (int l = 0; l < phi.out_dim; ++l) Y(k, l) += x * phi.at(i, k, j, l);
        }
    return Y;
}

CpVerdict is_cp(const ChoiMap& phi) {
    if (phi.choi.hermiticity_defect() >= 1e-10)
        throw std::invalid_argument("is_cp: Choi matrix is not Hermitian");
    CpVerdict v;
    v.min_eigenvalue = lambda_min(phi.choi.hermitized());
    v.completely_positive = v.min_eigenvalue >= -1e-9;
    return v;
}

ChoiMap tomiyama_map(int n, int N) {
    if (!(N > n && n >= 1))
        throw std::invalid_argument("tomiyama_map: need N > n >= 1");
    ChoiMap phi;
    phi.in_dim = N;
    phi.out_dim = N;
    phi.choi = ComplexMatrix(N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    double v = 0.0;
                    if (i == j && k == l) v += n;
                    if (i == k && j == l) v -= 1.0;
                    if (v != 0.0) phi.at(i, k, j, l) = Cx{v, 0.0};
                }
    return phi;
}

ChoiMap compose(const ChoiMap& phi2, const ChoiMap& phi1) {
    if (phi1.out_dim != phi2.in_dim) throw std::invalid_argument("compose: dimension mismatch");
    const int m = phi1.in_dim;
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            ComplexMatrix e(m);
            e(i, j) = 1.0;
            images.push_back(apply(phi2, apply(phi1, e)));
        }
    return choi_from_images(m, phi2.out_dim, images);
}

ChoiMap vector_state(const std::vector<Cx>& v) {
    const int m = static_cast<int>(v.size());
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            ComplexMatrix s(1);
            s(0, 0) = std::conj(v[i]) * v[j];
            images.push_back(s);
        }
    return choi_from_images(m, 1, images);
}

ChoiMap identity_map(int dim) {
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            ComplexMatrix e(dim);
            e(i, j) = 1.0;
            images.push_back(e);
        }
    return choi_from_images(dim, dim, images);
}

ChoiMap conjugation_map(const ComplexMatrix& G) {
    const int m = G.dim;
    ComplexMatrix Ga = G.adjoint();
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // G* E_ij G = (col i of G)* outer (row j of ... ) computed directly
            ComplexMatrix out(m);
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) out(k, l) = Ga(k, i) * G(j, l);
            images.push_back(out);
        }
    return choi_from_images(m, m, images);
}

ComplexMatrix apply_amplified(const ChoiMap& phi, int level, const ComplexMatrix& X) {
    const int m = phi.in_dim, mp = phi.out_dim;
    if (X.dim != level * m) throw std::invalid_argument("apply_amplified: dimension mismatch");
    ComplexMatrix Y(level * mp);
    for (int a = 0; a < level; ++a)
        for (int b = 0; b < level; ++b)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const Cx x = X(a * m + i, b * m + j);
                    if (x == Cx{0.0, 0.0}) continue;
                    for (int k = 0; k < mp; ++k)
                        for (int l = 0; l < mp; ++l)
                            Y(a * mp + k, b * mp + l) += x * phi.at(i, k, j, l);
                }
    return Y;
}

ViolationReport positivity_violation_search(const ChoiMap& phi, int level, int restarts,
                                            std::uint64_t seed) {
    if (level < 1) throw std::invalid_argument("positivity_violation_search: level >= 1");
    ViolationReport rep;
    rep.level = level;
    rep.restarts = restarts;
    rep.seed = seed;
    const int m = phi.in_dim, mp = phi.out_dim;
    const int din = level * m, dout = level * mp;

    double best = 0.0;
    for (int rs = 0; rs < restarts; ++rs) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(rs));
        std::vector<Cx> xi = random_unit_vector(dout, rng);
        ComplexMatrix X(din);
        double current = 0.0;
        for (int iter = 0; iter < 40; ++iter) {
            // G on the input space with tr(X G) = xi* (id (x) Phi)(X) xi
            ComplexMatrix G(din);
            for (int a = 0; a < level; ++a)
                for (int b = 0; b < level; ++b)
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j) {
                            Cx s{0.0, 0.0};
                            for (int k = 0; k < mp; ++k)
                                for (int l = 0; l < mp; ++l)
                                    s += std::conj(xi[a * mp + k]) * xi[b * mp + l] *
                                         phi.at(i, k, j, l);
                            // G = D^T so that tr(X G) matches the quadratic form
                            G(b * m + j, a * m + i) = s;
                        }
            EigenResult eg = hermitian_eigen(G.hermitized(), 1e-8);
            // X = projector onto the most negative direction
            X = ComplexMatrix(din);
            for (int r = 0; r < din; ++r)
                for (int c = 0; c < din; ++c) X(r, c) = eg.vectors(r, 0) * std::conj(eg.vectors(c, 0));
            ComplexMatrix Y = apply_amplified(phi, level, X).hermitized();
            EigenResult ey = hermitian_eigen(Y, 1e-8);
            const double vmin = ey.values.front();
            for (int r = 0; r < dout; ++r) xi[r] = ey.vectors(r, 0);
            if (std::fabs(vmin - current) < 1e-13) {
                current = vmin;
                break;
            }
            current = vmin;
        }
        if (current < best) {
            best = current;
            if (current < -1e-9) {
                rep.found = true;
                rep.witness = X;
                rep.violation = current;
            }
        }
    }
    if (!rep.found) {
        rep.violation = best;
        rep.note = "no violation found; this is a heuristic search, not a positivity proof";
    } else {
        // certify the stored witness independently
        ComplexMatrix X = *rep.witness;
        if (lambda_min(X.hermitized()) < -1e-12 || std::fabs(X.trace().real() - 1.0) > 1e-9)
            throw std::runtime_error("violation witness failed PSD/trace certification");
        rep.violation = lambda_min(apply_amplified(phi, level, X).hermitized());
        if (rep.violation >= -1e-9)
            throw std::runtime_error("violation witness failed eigenvalue certification");
    }
    return rep;
}

}  // namespace oskit::choi
