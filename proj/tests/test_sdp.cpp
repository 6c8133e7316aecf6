#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"
#include "oskit/sdp.hpp"

using namespace oskit;
using namespace oskit::sdp;

namespace {

ComplexMatrix scalar1(double v) {
    ComplexMatrix m(1);
    m(0, 0) = Cx{v, 0.0};
    return m;
}

ComplexMatrix unit(int dim, int i, int j) {
    // Hermitian basis element: E_ii, or (E_ij + E_ji) for i < j
    ComplexMatrix m(dim);
    if (i == j)
        m(i, i) = 1.0;
    else {
        m(i, j) = 1.0;
        m(j, i) = 1.0;
    }
    return m;
}

}  // namespace

TEST_CASE("maximize t with diag(1-t, 2-t) psd") {
    // variables: X (2x2, X = diag(1-t,2-t) slack), t+ and t- as 1x1 blocks
    SdpProblem p;
    p.block_dims = {2, 1, 1};
    p.objective = {{1, scalar1(1.0)}, {2, scalar1(-1.0)}};
    Constraint c1;
    c1.coeffs = {{0, unit(2, 0, 0)}, {1, scalar1(1.0)}, {2, scalar1(-1.0)}};
    c1.rhs = 1.0;
    Constraint c2;
    c2.coeffs = {{0, unit(2, 1, 1)}, {1, scalar1(1.0)}, {2, scalar1(-1.0)}};
    c2.rhs = 2.0;
    p.constraints = {c1, c2};

    SdpResult r = solve(p, 1e-8);
    REQUIRE(r.status == Status::optimal);
    CHECK(r.primal_objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.gap < 1e-7);
    CHECK(r.primal_residual < 1e-7);
    CHECK(r.min_primal_eig > -1e-7);
}

TEST_CASE("feasibility of tr X = 1") {
    SdpProblem p;
    p.block_dims = {3};
    Constraint c;
    c.coeffs = {{0, ComplexMatrix::identity(3)}};
    c.rhs = 1.0;
    p.constraints = {c};
    auto fr = feasibility(p);
    REQUIRE(fr.definitive);
    CHECK(fr.feasible);
    // witness satisfies the constraint and is PSD
    REQUIRE(fr.witness.size() == 1);
    CHECK(fr.witness[0].trace().real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lambda_min(fr.witness[0]) > -1e-8);
}

TEST_CASE("feasibility of tr X = -1 is certified infeasible") {
    SdpProblem p;
    p.block_dims = {2};
    Constraint c;
    c.coeffs = {{0, ComplexMatrix::identity(2)}};
    c.rhs = -1.0;
    p.constraints = {c};
    auto fr = feasibility(p);
    REQUIRE(fr.definitive);
    CHECK_FALSE(fr.feasible);
    REQUIRE(fr.certificate.has_value());
    CHECK(fr.certificate->verified);
    CHECK(fr.certificate->b_dot_y > 0.0);
    CHECK(fr.certificate->eps > 1e-9);
}

TEST_CASE("feasibility of X[0][0] = -1 is certified infeasible") {
    SdpProblem p;
    p.block_dims = {2};
    Constraint c;
    c.coeffs = {{0, unit(2, 0, 0)}};
    c.rhs = -1.0;
    p.constraints = {c};
    auto fr = feasibility(p);
    REQUIRE(fr.definitive);
    CHECK_FALSE(fr.feasible);
    REQUIRE(fr.certificate.has_value());
    CHECK(fr.certificate->verified);
}

TEST_CASE("inconsistent linear system reported infeasible") {
    SdpProblem p;
    p.block_dims = {2};
    Constraint c1;
    c1.coeffs = {{0, unit(2, 0, 0)}};
    c1.rhs = 1.0;
    Constraint c2;
    c2.coeffs = {{0, unit(2, 0, 0)}};
    c2.rhs = 2.0;
    p.constraints = {c1, c2};
    auto fr = feasibility(p);
    REQUIRE(fr.definitive);
    CHECK_FALSE(fr.feasible);
    REQUIRE(fr.certificate.has_value());
    CHECK(fr.certificate->b_dot_y > 0.0);
}

TEST_CASE("unbounded objective detected") {
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {{0, ComplexMatrix::identity(2)}};
    Constraint c;
    c.coeffs = {{0, unit(2, 0, 1)}};
    c.rhs = 0.0;
    p.constraints = {c};
    SdpResult r = solve(p, 1e-7);
    CHECK(r.status == Status::unbounded);
}

TEST_CASE("tolerance precondition enforced") {
    SdpProblem p;
    p.block_dims = {1};
    Constraint c;
    c.coeffs = {{0, scalar1(1.0)}};
    c.rhs = 1.0;
    p.constraints = {c};
    CHECK_THROWS_AS(solve(p, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve(p, 1e-11), std::invalid_argument);
}

TEST_CASE("complex Hermitian data round-trips through the real embedding") {
    ComplexMatrix A(2);
    A(0, 1) = Cx{0.0, 1.0};
    A(1, 0) = Cx{0.0, -1.0};
    ComplexMatrix R = sdp::detail::embed_real(A);
    CHECK(R.hermiticity_defect() < 1e-15);
    ComplexMatrix back = sdp::detail::restrict_complex(R);
    CHECK(max_abs_diff(back, A) < 1e-15);
}

TEST_CASE("feasible complex instance with known interior point") {
    std::mt19937_64 rng(777);
    const int n = 4;
    SdpProblem p;
    p.block_dims = {n};
    ComplexMatrix G = random_hermitian(n, rng);
    ComplexMatrix X0 = kernels::mul(G, G);  // PSD
    for (int i = 0; i < n; ++i) X0(i, i) += 0.5;
    for (int k = 0; k < 5; ++k) {
        ComplexMatrix A = random_hermitian(n, rng);
        Constraint c;
        c.rhs = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c.rhs += (std::conj(A(i, j)) * X0(i, j)).real();
        c.coeffs = {{0, A}};
        p.constraints.push_back(std::move(c));
    }
    auto fr = feasibility(p, 1e-7);
    REQUIRE(fr.definitive);
    CHECK(fr.feasible);
    CHECK(fr.slack > 0.1);  // X0 has interior room
    for (const auto& c : p.constraints) {
        double v = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                v += (std::conj(c.coeffs[0].matrix(i, j)) * fr.witness[0](i, j)).real();
        CHECK(v == doctest::Approx(c.rhs).epsilon(1e-6));
    }
}

TEST_CASE("weak duality and rescaling invariance on random instances") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int inst = 0; inst < 25; ++inst) {
        const int n = 2 + static_cast<int>(rng() % 3);
        SdpProblem p;
        p.block_dims = {n};
        ComplexMatrix C = random_hermitian(n, rng);
        C *= Cx{1.0 / std::max(1.0, C.frobenius_norm()), 0.0};
        p.objective = {{0, C}};
        ComplexMatrix G = random_hermitian(n, rng);
        ComplexMatrix X0 = kernels::mul(G, G);
        X0 *= Cx{1.0 / std::max(1.0, X0.frobenius_norm()), 0.0};
        const int m = 2 + static_cast<int>(rng() % 3);
        for (int k = 0; k < m; ++k) {
            ComplexMatrix A = random_hermitian(n, rng);
            A *= Cx{1.0 / std::max(1.0, A.frobenius_norm()), 0.0};
            Constraint c;
            c.rhs = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    c.rhs += (std::conj(A(i, j)) * X0(i, j)).real();
            c.coeffs = {{0, A}};
            p.constraints.push_back(std::move(c));
        }
        SdpResult r = solve(p, 1e-7);
        if (r.status != Status::optimal) continue;  // bounded-ness not guaranteed by construction
        ++solved;
        CHECK(r.primal_objective <= r.dual_objective + 1e-6);

        SdpProblem q = p;
        q.constraints[0].rhs *= 2.0;
        for (auto& bm : q.constraints[0].coeffs) bm.matrix *= Cx{2.0, 0.0};
        SdpResult r2 = solve(q, 1e-7);
        CHECK(r2.status == r.status);
        CHECK(std::fabs(r2.primal_objective - r.primal_objective) < 1e-5);
    }
    CHECK(solved >= 10);
}

TEST_CASE("solver is deterministic") {
    SdpProblem p;
    p.block_dims = {3};
    ComplexMatrix C(3);
    C(0, 1) = Cx{0.3, 0.1};
    C(1, 0) = Cx{0.3, -0.1};
    C(2, 2) = Cx{-0.5, 0.0};
    p.objective = {{0, C}};
    Constraint c;
    c.coeffs = {{0, ComplexMatrix::identity(3)}};
    c.rhs = 1.0;
    p.constraints = {c};
    SdpResult a = solve(p, 1e-8);
    SdpResult b = solve(p, 1e-8);
    REQUIRE(a.status == Status::optimal);
    CHECK(a.primal_objective == b.primal_objective);
    CHECK(a.iterations == b.iterations);
    CHECK(max_abs_diff(a.primal[0], b.primal[0]) == 0.0);
}
