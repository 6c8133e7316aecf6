#include "oskit/extremal.hpp"

#include <cmath>
#include <random>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"

namespace oskit::extremal {

BoundaryCheck is_boundary_restriction(const ComplexMatrix& u, const ComplexMatrix& v,
                                      const RationalAngle& angle) {
    BoundaryCheck bc;
    bc.dimension_ok = (u.dim == angle.n && v.dim == angle.n && u.dim == v.dim);
    if (u.dim != v.dim) return bc;

    const ComplexMatrix I = ComplexMatrix::identity(u.dim);
    double ud = 0.0;
    ud = std::max(ud, max_abs_diff(kernels::mul_adjL(u, u), I));
    ud = std::max(ud, max_abs_diff(kernels::mul_adjR(u, u), I));
    ud = std::max(ud, max_abs_diff(kernels::mul_adjL(v, v), I));
    ud = std::max(ud, max_abs_diff(kernels::mul_adjR(v, v), I));
    bc.unitarity_defect = ud;

    ComplexMatrix lhs = kernels::mul(u, v);
    ComplexMatrix rhs = kernels::mul(v, u);
    rhs *= angle.q();
    lhs -= rhs;
    bc.commutation_residual = operator_norm(lhs);

    bc.commutant_dim = commutant_dimension({u, v});
    bc.verdict = bc.dimension_ok && bc.unitarity_defect < 1e-9 &&
                 bc.commutation_residual < 1e-9 && bc.commutant_dim == 1;
    return bc;
}

namespace {

struct DirectionSolve {
    double primal = 0.0;
    double dual = 0.0;
    bool clean = false;
    sdp::SdpResult result;
};

// one coupling SDP: maximize the chosen off-diagonal functional over unital
// CP maps into M_{k+1} whose top-left compression matches the given values
DirectionSolve solve_direction(const OperatorTuple& s,
                               const std::vector<ComplexMatrix>& values, int k,
                               const std::vector<std::vector<Cx>>& B,
                               const std::vector<ComplexMatrix>* perturbation) {
    matrange::ChoiProgramBuilder builder(s, k + 1);
    builder.pin_values(values, k);
    std::vector<ComplexMatrix> Bt;
    Bt.reserve(s.arity());
    for (int i = 0; i < s.arity(); ++i) {
        ComplexMatrix M(k + 1);
        for (int r = 0; r < k; ++r) M(r, k) = B[i][r];
        Bt.push_back(std::move(M));
    }
    builder.set_objective(Bt);

    sdp::SdpProblem prob = builder.problem();
    if (perturbation) {
        // tie-break term steering the optimizer to an extreme point of the
        // optimal face; weights are tiny relative to the coupling objective
        for (size_t b = 0; b < perturbation->size(); ++b) {
            bool found = false;
            for (auto& bm : prob.objective)
                if (bm.block == static_cast<int>(b)) {
                    bm.matrix += (*perturbation)[b];
                    found = true;
                }
            if (!found) prob.objective.push_back({static_cast<int>(b), (*perturbation)[b]});
        }
    }

    DirectionSolve ds;
    ds.result = sdp::solve(prob, 1e-8);
    ds.clean = ds.result.status == sdp::Status::optimal;
    // stalled runs with tight residuals still carry information: the dual
    // value is an upper bound (dual residual ~1e-13) and the primal value is
    // accurate to its feasibility defect
    const bool usable = ds.clean || (ds.result.status == sdp::Status::numerical_failure &&
                                     ds.result.primal_residual < 1e-6 &&
                                     ds.result.dual_residual < 1e-7);
    if (usable) {
        ds.primal = std::min(ds.result.primal_objective, ds.result.dual_objective);
        ds.dual = ds.result.dual_objective;
        ds.clean = true;
    }
    return ds;
}

std::vector<std::vector<Cx>> sample_direction(int d, int k, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<Cx>> B(d, std::vector<Cx>(k));
    double nrm = 0.0;
    for (auto& col : B)
        for (auto& z : col) {
            z = Cx{g(rng), g(rng)};
            nrm += std::norm(z);
        }
    nrm = std::sqrt(nrm);
    for (auto& col : B)
        for (auto& z : col) z /= nrm;
    return B;
}

// nearest exact boundary restriction W (lambda U) W*, W (eta V) W* of an
// approximate level-n value pair; reuses the classifier's basis construction
// with polar-polished inputs and an orthonormalized basis
struct Snap {
    std::vector<ComplexMatrix> values;
    double distance = 0.0;
};

ComplexMatrix polar_unitary(const ComplexMatrix& A) {
    ComplexMatrix AA = kernels::mul_adjL(A, A).hermitized();
    EigenResult e = hermitian_eigen(AA, 1e-8);
    const int n = A.dim;
    ComplexMatrix T(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            T(i, j) = e.vectors(i, j) / std::sqrt(std::max(e.values[j], 1e-30));
    return kernels::mul(A, kernels::mul_adjR(T, e.vectors));
}

std::optional<Snap> snap_to_boundary(const std::vector<ComplexMatrix>& values,
                                     const RationalAngle& angle, double snap_tol) {
    const int n = static_cast<int>(angle.n);
    if (values.size() != 2 || values[0].dim != n) return std::nullopt;
    ComplexMatrix Ap = polar_unitary(values[0]);
    ComplexMatrix Bp = polar_unitary(values[1]);

    ComplexMatrix An = ComplexMatrix::identity(n), Bn = ComplexMatrix::identity(n);
    for (int p = 0; p < n; ++p) {
        An = kernels::mul(An, Ap);
        Bn = kernels::mul(Bn, Bp);
    }
    Cx xi = An.trace() / static_cast<double>(n);
    Cx zeta = Bn.trace() / static_cast<double>(n);
    if (std::abs(xi) < 0.5 || std::abs(zeta) < 0.5) return std::nullopt;
    xi /= std::abs(xi);
    zeta /= std::abs(zeta);

    double arg = std::arg(xi) / n;
    const double sector = 6.283185307179586 / n;
    while (arg < 0) arg += sector;
    while (arg >= sector) arg -= sector;
    if (sector - arg < 1e-9) arg -= sector;
    const Cx mu{std::cos(arg), std::sin(arg)};

    ComplexMatrix M = Ap;
    for (int i = 0; i < n; ++i) M(i, i) -= mu;
    EigenResult em = hermitian_eigen(kernels::mul_adjL(M, M).hermitized(), 1e-8);
    std::vector<Cx> h(n), w(n);
    for (int i = 0; i < n; ++i) h[i] = em.vectors(i, 0);
    const Cx eta_b = std::pow(Cx{1.0, 0.0} / zeta, 1.0 / static_cast<double>(n));

    ComplexMatrix W(n);
    w = h;
    Cx scale{1.0, 0.0};
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) W(r, c) = scale * w[r];
        std::vector<Cx> nw(n, Cx{0.0, 0.0});
        for (int r = 0; r < n; ++r)
            for (int t = 0; t < n; ++t) nw[r] += Bp(r, t) * w[t];
        w = std::move(nw);
        scale *= eta_b;
    }
    // orthonormalize the basis so the snapped pair is exactly unitary
    for (int c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass)
            for (int p = 0; p < c; ++p) {
                Cx proj{0, 0};
                for (int r = 0; r < n; ++r) proj += std::conj(W(r, p)) * W(r, c);
                for (int r = 0; r < n; ++r) W(r, c) -= proj * W(r, p);
            }
        double nrm = 0.0;
        for (int r = 0; r < n; ++r) nrm += std::norm(W(r, c));
        if (nrm < 0.25) return std::nullopt;
        nrm = std::sqrt(nrm);
        for (int r = 0; r < n; ++r) W(r, c) /= nrm;
    }

    ComplexMatrix Ue = tuples::clock_matrix(angle);
    Ue *= mu;
    ComplexMatrix Ve = tuples::shift_matrix(n);
    Ve *= Cx{1.0, 0.0} / eta_b;
    Snap sn;
    sn.values = {kernels::mul(kernels::mul(W, Ue), W.adjoint()),
                 kernels::mul(kernels::mul(W, Ve), W.adjoint())};
    sn.distance = std::max(max_abs_diff(sn.values[0], values[0]),
                           max_abs_diff(sn.values[1], values[1]));
    if (sn.distance > snap_tol) return std::nullopt;
    BoundaryCheck bc = is_boundary_restriction(sn.values[0], sn.values[1], angle);
    if (!bc.verdict) return std::nullopt;
    return sn;
}

CouplingResult coupling_max_values(const OperatorTuple& s,
                                   const std::vector<ComplexMatrix>& values, int k,
                                   int directions, std::uint64_t seed, double tol,
                                   double early_exit = -1.0) {
    CouplingResult res;
    res.directions = directions;
    res.seed = seed;
    std::mt19937_64 rng(seed);

    // Unitary-valued maps are handled analytically: Kadison-Schwarz gives
    // Psi(s)Psi(s)* <= Psi(ss*) = I for any feasible dilation, so the
    // off-diagonal block obeys beta beta* <= I - A A* with A the pinned value.
    // Every sampled functional is then bounded by sqrt(sum_i lambda_max(I - A_i A_i*)),
    // which certifies maximality long before the degenerate-face SDP could.
    if (s.unitarity_defect() < 1e-8) {
        double defect_sum = 0.0;
        for (const auto& A : values) {
            ComplexMatrix D = ComplexMatrix::identity(k);
            D -= kernels::mul_adjR(A, A);
            defect_sum += std::max(0.0, lambda_max(D.hermitized()));
        }
        const double bound = std::sqrt(defect_sum);
        if (bound <= tol) {
            res.coupling = 0.0;
            res.upper_bound = bound;
            res.solver_clean = true;
            return res;
        }
    }

    std::vector<std::vector<std::vector<Cx>>> Bs;
    Bs.reserve(directions);
    for (int j = 0; j < directions; ++j) Bs.push_back(sample_direction(s.arity(), k, rng));

    for (int j = 0; j < directions; ++j) {
        DirectionSolve ds = solve_direction(s, values, k, Bs[j], nullptr);
        if (!ds.clean) {
            res.solver_clean = false;
            continue;
        }
        if (ds.primal > res.coupling) {
            res.coupling = ds.primal;
            res.best_direction = j;
        }
        res.upper_bound = std::max(res.upper_bound, ds.dual);
        if (early_exit > 0.0 && res.coupling >= early_exit) break;
    }

    if (res.best_direction >= 0 && res.coupling > tol) {
        // re-solve the winning direction with a seeded tie-break objective and
        // keep its optimizer as the dilation witness
        std::vector<ComplexMatrix> pert(s.num_blocks);
        const double eps = 1e-4 * std::max(1.0, res.coupling);
        for (int b = 0; b < s.num_blocks; ++b) {
            ComplexMatrix G = random_hermitian(s.block_dim * (k + 1), rng);
            G *= Cx{eps / std::max(1.0, G.frobenius_norm()), 0.0};
            pert[b] = std::move(G);
        }
        DirectionSolve ds = solve_direction(s, values, k, Bs[res.best_direction], &pert);
        if (ds.clean && !ds.result.primal.empty()) {
            if (s.num_blocks == 1) {
                res.best_dilation.in_dim = s.block_dim;
                res.best_dilation.out_dim = k + 1;
                res.best_dilation.choi = ds.result.primal[0];
            } else {
                res.best_dilation = choi::ChoiMap{};
            }
        } else {
            res.solver_clean = false;
        }
    }
    return res;
}

}  // namespace

CouplingResult dilation_coupling_max(const OperatorTuple& s, const choi::ChoiMap& phi,
                                     int directions, std::uint64_t seed, double tol) {
    if (phi.in_dim != s.dim())
        throw std::invalid_argument("dilation_coupling_max: map input dimension mismatch");
    if (choi::is_cp(phi).min_eigenvalue < -1e-6 || !phi.is_unital(1e-6))
        throw std::invalid_argument("dilation_coupling_max: phi is not UCP within tolerance");
    std::vector<ComplexMatrix> values;
    values.reserve(s.arity());
    for (int i = 0; i < s.arity(); ++i) values.push_back(choi::apply(phi, s.dense(i)));
    return coupling_max_values(s, values, phi.out_dim, directions, seed, tol);
}

ChainReport extreme_chain_walk(const OperatorTuple& s, const choi::ChoiMap& start, int max_steps,
                               int directions, std::uint64_t seed, double tol) {
    if (start.in_dim != s.dim())
        throw std::invalid_argument("extreme_chain_walk: map input dimension mismatch");
    if (choi::is_cp(start).min_eigenvalue < -1e-6 || !start.is_unital(1e-6))
        throw std::invalid_argument("extreme_chain_walk: start is not UCP within tolerance");

    ChainReport rep;
    rep.tol = tol;
    rep.seed = seed;
    std::vector<ComplexMatrix> values;
    for (int i = 0; i < s.arity(); ++i) values.push_back(choi::apply(start, s.dense(i)));
    int level = start.out_dim;

    for (int step = 0; step < max_steps; ++step) {
        rep.levels.push_back(level);
        CouplingResult cr =
            coupling_max_values(s, values, level, directions, seed + 1000003ULL * step, tol);
        rep.couplings.push_back(cr.coupling);
        if (!cr.solver_clean) {
            rep.stop = ChainStop::solver_failure;
            return rep;
        }
        if (std::max(cr.coupling, cr.upper_bound) <= tol) {
            rep.stop = ChainStop::maximal;
            return rep;
        }
        if (s.num_blocks != 1 || cr.best_dilation.in_dim == 0) {
            rep.stop = ChainStop::solver_failure;
            return rep;
        }
        values.clear();
        for (int i = 0; i < s.arity(); ++i)
            values.push_back(choi::apply(cr.best_dilation, s.dense(i)));
        level += 1;

        // a walk arriving at the representation level sits within SDP accuracy
        // of an exact boundary restriction; reconstruct and verify it so the
        // maximality certificate is not limited by solver precision
        if (s.q && s.arity() == 2 && level == static_cast<int>(s.q->n)) {
            if (auto sn = snap_to_boundary(values, *s.q, 1e-2)) {
                values = sn->values;
                rep.snapped = true;
                rep.snap_distance = sn->distance;
            }
        }
    }
    rep.stop = ChainStop::max_steps;
    return rep;
}

}  // namespace oskit::extremal
