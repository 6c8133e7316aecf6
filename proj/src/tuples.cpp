#include "oskit/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"

namespace oskit::tuples {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

RationalAngle::RationalAngle(long long kk, long long nn) {
    if (nn <= 0) throw std::invalid_argument("RationalAngle: denominator must be positive");
    kk %= nn;
    if (kk < 0) kk += nn;
    const long long g = std::gcd(kk, nn);
    k = kk / g;
    n = nn / g;
}

Cx RationalAngle::root(long long numerator) const {
    long long e = numerator % n;
    if (e < 0) e += n;
    // quarter-turn angles evaluate exactly
    if ((4 * e) % n == 0) {
        switch ((4 * e) / n) {
            case 0: return Cx{1.0, 0.0};
            case 1: return Cx{0.0, 1.0};
            case 2: return Cx{-1.0, 0.0};
            default: return Cx{0.0, -1.0};
        }
    }
    const double a = kTwoPi * static_cast<double>(e) / static_cast<double>(n);
    return Cx{std::cos(a), std::sin(a)};
}

RationalAngle RationalAngle::minus(const RationalAngle& other) const {
    // k/n - k'/n' mod 1, reduced exactly
    const long long num = k * other.n - other.k * n;
    const long long den = n * other.n;
    return RationalAngle(num, den);
}

void LambdaMatrix::validate() const {
    if (d <= 0 || static_cast<int>(angles.size()) != d * d)
        throw std::invalid_argument("LambdaMatrix: wrong shape");
    for (int i = 0; i < d; ++i) {
        if (!(at(i, i) == RationalAngle(0, 1)))
            throw std::invalid_argument("LambdaMatrix: diagonal must be 1");
        for (int j = i + 1; j < d; ++j)
            if (!(at(j, i) == at(i, j).conjugated()))
                throw std::invalid_argument("LambdaMatrix: not self-adjoint");
    }
}

LambdaMatrix LambdaMatrix::from_upper(int d, const std::vector<RationalAngle>& upper) {
    if (static_cast<int>(upper.size()) != d * (d - 1) / 2)
        throw std::invalid_argument("LambdaMatrix::from_upper: wrong count");
    LambdaMatrix lm;
    lm.d = d;
    lm.angles.assign(static_cast<size_t>(d) * d, RationalAngle(0, 1));
    size_t idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            lm.angles[static_cast<size_t>(i) * d + j] = upper[idx];
            lm.angles[static_cast<size_t>(j) * d + i] = upper[idx].conjugated();
            ++idx;
        }
    return lm;
}

LambdaMatrix LambdaMatrix::conjugated() const {
    LambdaMatrix lm = *this;
    for (auto& a : lm.angles) a = a.conjugated();
    return lm;
}

ComplexMatrix OperatorTuple::dense(int i) const {
    const long long d = static_cast<long long>(block_dim) * num_blocks;
    if (d > numerics_config().dim_cap)
        throw std::length_error("OperatorTuple::dense: dimension exceeds configured cap");
    ComplexMatrix M(static_cast<int>(d));
    for (int b = 0; b < num_blocks; ++b) {
        const ComplexMatrix& blk = entries[i][b];
        const int off = b * block_dim;
        for (int r = 0; r < block_dim; ++r)
            for (int c = 0; c < block_dim; ++c) M(off + r, off + c) = blk(r, c);
    }
    return M;
}

std::vector<ComplexMatrix> OperatorTuple::dense_all() const {
    std::vector<ComplexMatrix> out;
    out.reserve(entries.size());
    for (int i = 0; i < arity(); ++i) out.push_back(dense(i));
    return out;
}

OperatorTuple OperatorTuple::from_dense(std::vector<ComplexMatrix> ms,
                                        std::optional<RationalAngle> q,
                                        std::optional<LambdaMatrix> lambda) {
    if (ms.empty()) throw std::invalid_argument("OperatorTuple: empty tuple");
    const int d = ms.front().dim;
    for (const auto& m : ms)
        if (m.dim != d) throw std::invalid_argument("OperatorTuple: unequal dimensions");
    OperatorTuple t;
    t.block_dim = d;
    t.num_blocks = 1;
    t.entries.resize(ms.size());
    for (size_t i = 0; i < ms.size(); ++i) t.entries[i] = {std::move(ms[i])};
    t.q = q;
    t.lambda = lambda;
    return t;
}

double OperatorTuple::unitarity_defect() const {
    double worst = 0.0;
    const ComplexMatrix I = ComplexMatrix::identity(block_dim);
    for (int i = 0; i < arity(); ++i)
        for (int b = 0; b < num_blocks; ++b) {
            const ComplexMatrix& m = entries[i][b];
            worst = std::max(worst, max_abs_diff(kernels::mul_adjL(m, m), I));
            worst = std::max(worst, max_abs_diff(kernels::mul_adjR(m, m), I));
        }
    return worst;
}

double OperatorTuple::commutation_residual() const {
    double worst = 0.0;
    auto pair_residual = [&](int i, int j, Cx lam) {
        for (int b = 0; b < num_blocks; ++b) {
            ComplexMatrix lhs = kernels::mul(entries[i][b], entries[j][b]);
            ComplexMatrix rhs = kernels::mul(entries[j][b], entries[i][b]);
            rhs *= lam;
            lhs -= rhs;
            worst = std::max(worst, operator_norm(lhs));
        }
    };
    if (q) {
        if (arity() != 2) throw std::invalid_argument("commutation_residual: q data needs a pair");
        pair_residual(0, 1, q->q());
    } else if (lambda) {
        if (arity() != lambda->d)
            throw std::invalid_argument("commutation_residual: lambda size mismatch");
        for (int i = 0; i < arity(); ++i)
            for (int j = i + 1; j < arity(); ++j) pair_residual(i, j, lambda->at(i, j).q());
    }
    return worst;
}

ComplexMatrix clock_matrix(const RationalAngle& angle) {
    const int n = static_cast<int>(angle.n);
    ComplexMatrix U(n);
    for (int j = 0; j < n; ++j) U(j, j) = angle.power(j);
    return U;
}

ComplexMatrix shift_matrix(int n) {
    ComplexMatrix V(n);
    V(0, n - 1) = 1.0;
    for (int i = 1; i < n; ++i) V(i, i - 1) = 1.0;
    return V;
}

OperatorTuple standard_pair(const RationalAngle& angle) {
    const int n = static_cast<int>(angle.n);
    return OperatorTuple::from_dense({clock_matrix(angle), shift_matrix(n)}, angle);
}

OperatorTuple phase_scaled_pair(const RationalAngle& angle, Cx alpha, Cx beta) {
    if (std::fabs(std::abs(alpha) - 1.0) > 1e-12 || std::fabs(std::abs(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("phase_scaled_pair: phases must be unimodular");
    OperatorTuple t = standard_pair(angle);
    for (auto& z : t.entries[0][0].a) z *= alpha;
    for (auto& z : t.entries[1][0].a) z *= beta;
    return t;
}

namespace {

struct PairFactor {
    int i, j;  // i < j
    RationalAngle angle;
};

std::vector<PairFactor> nontrivial_factors(const LambdaMatrix& lam) {
    std::vector<PairFactor> fs;
    for (int i = 0; i < lam.d; ++i)
        for (int j = i + 1; j < lam.d; ++j)
            if (lam.at(i, j).n > 1) fs.push_back({i, j, lam.at(i, j)});
    return fs;
}

}  // namespace

OperatorTuple lambda_tuple(const LambdaMatrix& lam) {
    lam.validate();
    auto fs = nontrivial_factors(lam);
    long long dim = 1;
    for (const auto& f : fs) {
        dim *= f.angle.n;
        if (dim > numerics_config().dim_cap)
            throw std::length_error("lambda_tuple: dimension exceeds configured cap");
    }
    std::vector<ComplexMatrix> ms;
    ms.reserve(lam.d);
    for (int u = 0; u < lam.d; ++u) {
        ComplexMatrix acc = ComplexMatrix::identity(1);
        for (const auto& f : fs) {
            ComplexMatrix factor = (u == f.i)   ? clock_matrix(f.angle)
                                   : (u == f.j) ? shift_matrix(static_cast<int>(f.angle.n))
                                                : ComplexMatrix::identity(static_cast<int>(f.angle.n));
            acc = kron(acc, factor);
        }
        ms.push_back(std::move(acc));
    }
    return OperatorTuple::from_dense(std::move(ms), std::nullopt, lam);
}

std::vector<std::pair<Cx, Cx>> universal_phases(const RationalAngle& angle, int grid) {
    if (grid < 1) throw std::invalid_argument("universal_sample: grid >= 1");
    const double step = kTwoPi / (static_cast<double>(angle.n) * grid);
    std::vector<std::pair<Cx, Cx>> out;
    out.reserve(static_cast<size_t>(grid) * grid);
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double ta = step * a, tb = step * b;
            out.push_back({Cx{std::cos(ta), std::sin(ta)}, Cx{std::cos(tb), std::sin(tb)}});
        }
    return out;
}

OperatorTuple universal_sample(const RationalAngle& angle, int grid) {
    const auto phases = universal_phases(angle, grid);
    const long long total = angle.n * static_cast<long long>(grid) * grid;
    if (total > numerics_config().dim_cap)
        throw std::length_error("universal_sample: dimension exceeds configured cap");
    const ComplexMatrix U = clock_matrix(angle);
    const ComplexMatrix V = shift_matrix(static_cast<int>(angle.n));
    OperatorTuple t;
    t.block_dim = static_cast<int>(angle.n);
    t.num_blocks = static_cast<int>(phases.size());
    t.q = angle;
    t.entries.resize(2);
    t.entries[0].reserve(phases.size());
    t.entries[1].reserve(phases.size());
    for (const auto& [al, be] : phases) {
        ComplexMatrix Ua = U;
        Ua *= al;
        ComplexMatrix Vb = V;
        Vb *= be;
        t.entries[0].push_back(std::move(Ua));
        t.entries[1].push_back(std::move(Vb));
    }
    return t;
}

OperatorTuple transpose_tuple(const OperatorTuple& t) {
    OperatorTuple out = t;
    for (auto& op : out.entries)
        for (auto& blk : op) blk = blk.transpose();
    if (t.q) out.q = t.q->conjugated();
    if (t.lambda) out.lambda = t.lambda->conjugated();
    return out;
}

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& M, long long e) {
    ComplexMatrix acc = ComplexMatrix::identity(M.dim);
    for (long long i = 0; i < e; ++i) acc = kernels::mul(acc, M);
    return acc;
}

// mean diagonal entry, verified to be a scalar matrix within tol
Cx scalar_part(const ComplexMatrix& M, double tol, const char* what) {
    Cx s{0.0, 0.0};
    for (int i = 0; i < M.dim; ++i) s += M(i, i);
    s /= static_cast<double>(M.dim);
    ComplexMatrix S = ComplexMatrix::identity(M.dim);
    S *= s;
    if (max_abs_diff(M, S) > tol)
        throw std::runtime_error(std::string(what) + " is not scalar: inconsistent commutation");
    return s;
}

}  // namespace

ClassifyResult classify_irreducible_pair(const OperatorTuple& t, const RationalAngle& angle) {
    const int n = static_cast<int>(angle.n);
    if (t.arity() != 2) throw std::invalid_argument("classify: need a pair");
    if (t.dim() != n || t.num_blocks != 1)
        throw std::invalid_argument("classify: dimension must equal the angle order");
    const ComplexMatrix& u = t.entries[0][0];
    const ComplexMatrix& v = t.entries[1][0];
    if (t.unitarity_defect() > 1e-10)
        throw std::invalid_argument("classify: entries are not unitary within tolerance");
    {
        ComplexMatrix lhs = kernels::mul(u, v);
        ComplexMatrix rhs = kernels::mul(v, u);
        rhs *= angle.q();
        lhs -= rhs;
        if (operator_norm(lhs) > 1e-10)
            throw std::invalid_argument("classify: pair is not q-commuting within tolerance");
    }
    if (commutant_dimension({u, v}) != 1)
        throw std::domain_error("classify: pair is reducible");

    ClassifyResult res;
    res.xi = scalar_part(matrix_power(u, n), 1e-9, "u^n");
    res.zeta = scalar_part(matrix_power(v, n), 1e-9, "v^n");

    // eigenvalue of u with principal argument in [0, 2pi/n); roundoff on xi
    // near the fold boundary snaps back so that exact cases stay at 0
    double arg = std::arg(res.xi) / n;  // in (-pi/n, pi/n]
    const double sector = kTwoPi / n;
    while (arg < 0) arg += sector;
    while (arg >= sector) arg -= sector;
    if (sector - arg < 1e-9) arg -= sector;
    const Cx mu{std::cos(arg), std::sin(arg)};
    res.lambda = mu;

    // eigenvector of u for mu through the smallest singular pair of (u - mu I)
    ComplexMatrix M = u;
    for (int i = 0; i < n; ++i) M(i, i) -= mu;
    ComplexMatrix MM = kernels::mul_adjL(M, M).hermitized();
    EigenResult em = hermitian_eigen(MM, 1e-8);
    std::vector<Cx> h(n);
    for (int i = 0; i < n; ++i) h[i] = em.vectors(i, 0);
    // canonical phase: largest-modulus component made real positive
    int pivot = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(h[i]) > std::abs(h[pivot]) + 1e-12) pivot = i;
    Cx ph = h[pivot] / std::abs(h[pivot]);
    for (auto& z : h) z /= ph;

    // basis w_i = eta_b^{i-1} v^{i-1} h with eta_b the principal n-th root of zeta^{-1}
    const Cx eta_b = std::pow(Cx{1.0, 0.0} / res.zeta, 1.0 / static_cast<double>(n));
    res.eta = Cx{1.0, 0.0} / eta_b;

    ComplexMatrix W(n);
    std::vector<Cx> w = h;
    Cx scale{1.0, 0.0};
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) W(r, c) = scale * w[r];
        // w <- v w, scale <- eta_b * scale
        std::vector<Cx> nw(n, Cx{0.0, 0.0});
        for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) nw[r] += v(r, s) * w[s];
        w = std::move(nw);
        scale *= eta_b;
    }

    // residuals against the canonical clock/shift form
    ComplexMatrix cu = kernels::mul(kernels::mul_adjL(W, u), W);
    ComplexMatrix cv = kernels::mul(kernels::mul_adjL(W, v), W);
    ComplexMatrix eu = clock_matrix(angle);
    eu *= res.lambda;
    ComplexMatrix ev = shift_matrix(n);
    ev *= res.eta;
    res.residual_u = max_abs_diff(cu, eu);
    res.residual_v = max_abs_diff(cv, ev);
    res.W = std::move(W);
    return res;
}

double combination_norm(const OperatorTuple& t, Cx c0, const std::vector<Cx>& c,
                        const std::vector<Cx>& d) {
    if (static_cast<int>(c.size()) != t.arity() || static_cast<int>(d.size()) != t.arity())
        throw std::invalid_argument("combination_norm: coefficient count mismatch");
    double worst = 0.0;
    for (int b = 0; b < t.num_blocks; ++b) {
        ComplexMatrix M = ComplexMatrix::identity(t.block_dim);
        M *= c0;
        for (int i = 0; i < t.arity(); ++i) {
            const ComplexMatrix& blk = t.entries[i][b];
            for (int r = 0; r < t.block_dim; ++r)
                for (int s = 0; s < t.block_dim; ++s) {
                    M(r, s) += c[i] * blk(r, s);
                    M(r, s) += d[i] * std::conj(blk(s, r));
                }
        }
        worst = std::max(worst, operator_norm(M));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Commutant structure of the pairwise tensor construction.  The tensor Weyl
// patterns (x)_p C_p^{a_p} S_p^{b_p} are joint eigenvectors of conjugation by
// every u_i (C (C^a S^b) C^{-1} = q^b C^a S^b and S (C^a S^b) S^{-1} =
// q^{-a} C^a S^b per factor), so the commutant is exactly the span of the
// patterns whose accumulated phase is 1 for all i.
// ---------------------------------------------------------------------------

namespace {

struct PatternScan {
    std::vector<PairFactor> fs;
    std::vector<long long> dims;
    long long total_patterns = 1;  // prod dims^2

    explicit PatternScan(const LambdaMatrix& lam) : fs(nontrivial_factors(lam)) {
        for (const auto& f : fs) {
            dims.push_back(f.angle.n);
            total_patterns *= f.angle.n * f.angle.n;
        }
    }

    // decode pattern index into (a_p, b_p) exponents
    void decode(long long idx, std::vector<long long>& a, std::vector<long long>& b) const {
        a.resize(fs.size());
        b.resize(fs.size());
        for (size_t p = 0; p < fs.size(); ++p) {
            a[p] = idx % dims[p];
            idx /= dims[p];
            b[p] = idx % dims[p];
            idx /= dims[p];
        }
    }

    // does (x) C^{a_p} S^{b_p} commute with every u_i
    bool in_commutant(const std::vector<long long>& a, const std::vector<long long>& b, int d) const {
        for (int i = 0; i < d; ++i) {
            // exact rational phase sum over the factors u_i touches
            long long num = 0, den = 1;
            for (size_t p = 0; p < fs.size(); ++p) {
                long long contrib_num = 0;
                if (fs[p].i == i)
                    contrib_num = fs[p].angle.k * b[p];  // clock role
                else if (fs[p].j == i)
                    contrib_num = -fs[p].angle.k * a[p];  // shift role
                else
                    continue;
                const long long np = fs[p].angle.n;
                num = num * np + contrib_num * den;
                den *= np;
            }
            long long r = num % den;
            if (r < 0) r += den;
            if (r != 0) return false;
        }
        return true;
    }
};

}  // namespace

long long lambda_commutant_dimension(const LambdaMatrix& lam) {
    lam.validate();
    PatternScan scan(lam);
    if (scan.total_patterns > 1LL << 26)
        throw std::length_error("lambda_commutant_dimension: pattern space too large");
    std::vector<long long> a, b;
    long long count = 0;
    for (long long idx = 0; idx < scan.total_patterns; ++idx) {
        scan.decode(idx, a, b);
        if (scan.in_commutant(a, b, lam.d)) ++count;
    }
    return count;
}

std::vector<int> lambda_summand_dimensions(const LambdaMatrix& lam, std::uint64_t seed) {
    lam.validate();
    PatternScan scan(lam);
    if (scan.total_patterns > 1LL << 26)
        throw std::length_error("lambda_summand_dimensions: pattern space too large");

    long long dim = 1;
    for (long long d : scan.dims) dim *= d;
    if (dim > numerics_config().dim_cap)
        throw std::length_error("lambda_summand_dimensions: dimension exceeds configured cap");

    // collect commutant patterns
    std::vector<std::pair<std::vector<long long>, std::vector<long long>>> patterns;
    {
        std::vector<long long> a, b;
        for (long long idx = 0; idx < scan.total_patterns; ++idx) {
            scan.decode(idx, a, b);
            if (scan.in_commutant(a, b, lam.d)) patterns.push_back({a, b});
        }
    }
    if (patterns.size() > 4096)
        throw std::length_error("lambda_summand_dimensions: commutant too large to materialize");

    if (patterns.size() == 1) return {static_cast<int>(dim)};  // irreducible

    // random Hermitian commutant element
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix X(static_cast<int>(dim));
    for (const auto& [a, b] : patterns) {
        ComplexMatrix w = ComplexMatrix::identity(1);
        for (size_t p = 0; p < scan.fs.size(); ++p) {
            ComplexMatrix cp = clock_matrix(scan.fs[p].angle);
            ComplexMatrix f = ComplexMatrix::identity(static_cast<int>(scan.dims[p]));
            for (long long e = 0; e < a[p]; ++e) f = kernels::mul(f, cp);
            ComplexMatrix sp = shift_matrix(static_cast<int>(scan.dims[p]));
            for (long long e = 0; e < b[p]; ++e) f = kernels::mul(f, sp);
            w = kron(w, f);
        }
        const Cx coef{g(rng), g(rng)};
        for (int r = 0; r < X.dim; ++r)
            for (int c = 0; c < X.dim; ++c)
                X(r, c) += coef * w(r, c) + std::conj(coef * w(c, r));
    }
    X = X.hermitized();

    // the element commutes with the tuple by construction; verify once
    {
        OperatorTuple t = lambda_tuple(lam);
        for (int i = 0; i < t.arity(); ++i) {
            ComplexMatrix lhs = kernels::mul(X, t.entries[i][0]);
            ComplexMatrix rhs = kernels::mul(t.entries[i][0], X);
            lhs -= rhs;
            if (max_abs_diff(lhs, ComplexMatrix(X.dim)) > 1e-8 * (1.0 + X.frobenius_norm()))
                throw std::runtime_error("lambda_summand_dimensions: commutant element check failed");
        }
    }

    auto eig = hermitian_eigenvalues(X);
    const double spread = std::fabs(eig.back() - eig.front()) + 1.0;
    const double gap_tol = 1e-8 * spread;
    std::vector<int> sizes;
    int run = 1;
    for (size_t i = 1; i < eig.size(); ++i) {
        if (eig[i] - eig[i - 1] <= gap_tol)
            ++run;
        else {
            sizes.push_back(run);
            run = 1;
        }
    }
    sizes.push_back(run);
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

}  // namespace oskit::tuples
