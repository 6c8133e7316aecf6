#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"
#include "oskit/tuples.hpp"

using namespace oskit;
using namespace oskit::tuples;

TEST_CASE("RationalAngle normalization and arithmetic") {
    RationalAngle a(1, 1);
    CHECK(a.k == 0);
    CHECK(a.n == 1);
    RationalAngle b(5, 3);
    CHECK(b.k == 2);
    CHECK(b.n == 3);
    RationalAngle c(2, 4);
    CHECK(c.k == 1);
    CHECK(c.n == 2);
    CHECK(RationalAngle(1, 3).conjugated() == RationalAngle(2, 3));
    CHECK(RationalAngle(0, 1).conjugated() == RationalAngle(0, 1));
    CHECK(RationalAngle(2, 3).minus(RationalAngle(1, 3)) == RationalAngle(1, 3));
    CHECK(RationalAngle(1, 2).minus(RationalAngle(1, 2)) == RationalAngle(0, 1));
    CHECK(RationalAngle(1, 4).minus(RationalAngle(1, 2)) == RationalAngle(3, 4));
    CHECK_THROWS_AS(RationalAngle(1, 0), std::invalid_argument);
}

TEST_CASE("standard pair matches the clock/shift form") {
    OperatorTuple t = standard_pair(RationalAngle(1, 2));
    const ComplexMatrix& U = t.entries[0][0];
    const ComplexMatrix& V = t.entries[1][0];
    CHECK(U(0, 0) == Cx{1, 0});
    CHECK(U(1, 1) == Cx{-1, 0});
    CHECK(U(0, 1) == Cx{0, 0});
    CHECK(V(0, 1) == Cx{1, 0});
    CHECK(V(1, 0) == Cx{1, 0});
    CHECK(V(0, 0) == Cx{0, 0});

    OperatorTuple one = standard_pair(RationalAngle(1, 1));
    CHECK(one.dim() == 1);
    CHECK(one.entries[0][0](0, 0) == Cx{1, 0});
    CHECK(one.entries[1][0](0, 0) == Cx{1, 0});
}

TEST_CASE("standard pair commutation and order relations") {
    for (long long n : {1, 2, 3, 5, 8}) {
        for (long long k = 0; k < n; ++k) {
            if (std::gcd(k, n) != 1) continue;
            RationalAngle a(k, n);
            OperatorTuple t = standard_pair(a);
            CHECK(t.commutation_residual() < 1e-12);
            CHECK(t.unitarity_defect() < 1e-12);
            // U^n = V^n = I
            ComplexMatrix Un = ComplexMatrix::identity(static_cast<int>(n));
            ComplexMatrix Vn = ComplexMatrix::identity(static_cast<int>(n));
            for (int p = 0; p < n; ++p) {
                Un = kernels::mul(Un, t.entries[0][0]);
                Vn = kernels::mul(Vn, t.entries[1][0]);
            }
            CHECK(max_abs_diff(Un, ComplexMatrix::identity(static_cast<int>(n))) < 1e-12);
            CHECK(max_abs_diff(Vn, ComplexMatrix::identity(static_cast<int>(n))) < 1e-12);
        }
    }
    // direct entrywise check for n = 3: U V - q V U = 0
    OperatorTuple t = standard_pair(RationalAngle(1, 3));
    ComplexMatrix UV = kernels::mul(t.entries[0][0], t.entries[1][0]);
    ComplexMatrix VU = kernels::mul(t.entries[1][0], t.entries[0][0]);
    VU *= RationalAngle(1, 3).q();
    CHECK(max_abs_diff(UV, VU) < 1e-15);
}

TEST_CASE("phase scaled pairs") {
    OperatorTuple t = phase_scaled_pair(RationalAngle(1, 2), Cx{0, 1}, Cx{1, 0});
    // (iU)^2 = -I
    ComplexMatrix sq = kernels::mul(t.entries[0][0], t.entries[0][0]);
    ComplexMatrix mI = ComplexMatrix::identity(2);
    mI *= Cx{-1, 0};
    CHECK(max_abs_diff(sq, mI) < 1e-15);
    CHECK(t.commutation_residual() < 1e-12);

    OperatorTuple s = phase_scaled_pair(RationalAngle(1, 3), Cx{1, 0}, Cx{1, 0});
    CHECK(max_abs_diff(s.entries[0][0], standard_pair(RationalAngle(1, 3)).entries[0][0]) == 0.0);

    CHECK_THROWS_AS(phase_scaled_pair(RationalAngle(1, 2), Cx{0.5, 0}, Cx{1, 0}),
                    std::invalid_argument);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    for (int trial = 0; trial < 5; ++trial) {
        const double ta = ang(rng), tb = ang(rng);
        Cx al{std::cos(ta), std::sin(ta)};
        Cx be{std::cos(tb), std::sin(tb)};
        CHECK(phase_scaled_pair(RationalAngle(2, 5), al, be).commutation_residual() < 1e-12);
    }
}

TEST_CASE("lambda tuple constructions") {
    // d = 2 reduces to the standard pair
    LambdaMatrix l2 = LambdaMatrix::from_upper(2, {RationalAngle(1, 3)});
    OperatorTuple t2 = lambda_tuple(l2);
    OperatorTuple s3 = standard_pair(RationalAngle(1, 3));
    CHECK(max_abs_diff(t2.entries[0][0], s3.entries[0][0]) == 0.0);
    CHECK(max_abs_diff(t2.entries[1][0], s3.entries[1][0]) == 0.0);

    // d = 3, all pairs anti-commuting: dim 8
    LambdaMatrix l3 = LambdaMatrix::from_upper(
        3, {RationalAngle(1, 2), RationalAngle(1, 2), RationalAngle(1, 2)});
    OperatorTuple t3 = lambda_tuple(l3);
    CHECK(t3.dim() == 8);
    CHECK(t3.commutation_residual() < 1e-12);
    CHECK(t3.unitarity_defect() < 1e-12);

    // d = 3 with a single nontrivial angle: dim 3
    LambdaMatrix lone = LambdaMatrix::from_upper(
        3, {RationalAngle(1, 3), RationalAngle(0, 1), RationalAngle(0, 1)});
    OperatorTuple tone = lambda_tuple(lone);
    CHECK(tone.dim() == 3);
    CHECK(tone.commutation_residual() < 1e-12);

    // cap enforcement
    int saved = numerics_config().dim_cap;
    numerics_config().dim_cap = 4;
    CHECK_THROWS_AS(lambda_tuple(l3), std::length_error);
    numerics_config().dim_cap = saved;
}

TEST_CASE("universal samples") {
    OperatorTuple g1 = universal_sample(RationalAngle(1, 2), 1);
    CHECK(g1.num_blocks == 1);
    CHECK(max_abs_diff(g1.entries[0][0], standard_pair(RationalAngle(1, 2)).entries[0][0]) == 0.0);

    OperatorTuple g3 = universal_sample(RationalAngle(1, 3), 4);
    CHECK(g3.dim() == 3 * 16);
    CHECK(g3.commutation_residual() < 1e-12);

    // norm of u + u* + v + v* on a 64-point grid; the grid contains the
    // maximizing phase pair (1,1), where the closed form gives 2 sqrt(2)
    OperatorTuple big = universal_sample(RationalAngle(1, 2), 64);
    CHECK(big.dim() == 8192);
    double norm = combination_norm(big, Cx{0, 0}, {Cx{1, 0}, Cx{1, 0}}, {Cx{1, 0}, Cx{1, 0}});
    CHECK(std::fabs(norm - 2.0 * std::sqrt(2.0)) < 3e-3);
}

TEST_CASE("blockwise combination norm agrees with the dense norm") {
    OperatorTuple t = universal_sample(RationalAngle(1, 2), 3);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gau(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Cx c0{gau(rng), gau(rng)};
        std::vector<Cx> c = {Cx{gau(rng), gau(rng)}, Cx{gau(rng), gau(rng)}};
        std::vector<Cx> d = {Cx{gau(rng), gau(rng)}, Cx{gau(rng), gau(rng)}};
        double blockwise = combination_norm(t, c0, c, d);
        ComplexMatrix M = ComplexMatrix::identity(t.dim());
        M *= c0;
        for (int i = 0; i < 2; ++i) {
            ComplexMatrix D = t.dense(i);
            ComplexMatrix Da = D.adjoint();
            D *= c[i];
            Da *= d[i];
            M += D;
            M += Da;
        }
        CHECK(std::fabs(blockwise - operator_norm(M)) < 1e-10);
    }
}

TEST_CASE("transpose tuple") {
    OperatorTuple t2 = standard_pair(RationalAngle(1, 2));
    OperatorTuple t2t = transpose_tuple(t2);
    CHECK(t2t.commutation_residual() < 1e-12);  // n = 2: still anti-commuting
    CHECK(t2t.q->k == 1);
    CHECK(t2t.q->n == 2);

    OperatorTuple t3 = standard_pair(RationalAngle(1, 3));
    OperatorTuple t3t = transpose_tuple(t3);
    CHECK(t3t.q.value() == RationalAngle(2, 3));
    CHECK(t3t.commutation_residual() < 1e-12);  // checked against conj(q)

    OperatorTuple back = transpose_tuple(t3t);
    CHECK(max_abs_diff(back.entries[0][0], t3.entries[0][0]) == 0.0);
    CHECK(max_abs_diff(back.entries[1][0], t3.entries[1][0]) == 0.0);
    CHECK(back.q.value() == RationalAngle(1, 3));
}

TEST_CASE("classification of the standard pair") {
    ClassifyResult r = classify_irreducible_pair(standard_pair(RationalAngle(1, 3)),
                                                 RationalAngle(1, 3));
    CHECK(std::abs(r.xi - Cx{1, 0}) < 1e-12);
    CHECK(std::abs(r.zeta - Cx{1, 0}) < 1e-12);
    CHECK(std::abs(r.lambda - Cx{1, 0}) < 1e-12);
    CHECK(std::abs(r.eta - Cx{1, 0}) < 1e-12);
    CHECK(r.residual_u < 1e-10);
    CHECK(r.residual_v < 1e-10);
    CHECK(max_abs_diff(r.W, ComplexMatrix::identity(3)) < 1e-10);
}

TEST_CASE("classification reads off the phase powers") {
    const double a = 3.14159265358979 / 7.0;
    Cx alpha{std::cos(a), std::sin(a)};
    OperatorTuple t = phase_scaled_pair(RationalAngle(1, 3), alpha, Cx{1, 0});
    ClassifyResult r = classify_irreducible_pair(t, RationalAngle(1, 3));
    Cx expect = alpha * alpha * alpha;
    CHECK(std::abs(r.xi - expect) < 1e-12);
    CHECK(std::abs(r.zeta - Cx{1, 0}) < 1e-12);
}

TEST_CASE("classification round trip through random conjugation") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    for (int trial = 0; trial < 10; ++trial) {
        const long long n = 2 + static_cast<long long>(rng() % 4);  // 2..5
        long long k = 1 + static_cast<long long>(rng() % n);
        while (std::gcd(k, n) != 1) k = 1 + static_cast<long long>(rng() % n);
        RationalAngle angle(k, n);
        const double ta = ang(rng), tb = ang(rng);
        Cx alpha{std::cos(ta), std::sin(ta)};
        Cx beta{std::cos(tb), std::sin(tb)};
        OperatorTuple t = phase_scaled_pair(angle, alpha, beta);
        ComplexMatrix G = random_unitary(static_cast<int>(n), rng);
        ComplexMatrix u = kernels::mul(kernels::mul_adjL(G, t.entries[0][0]), G);
        ComplexMatrix v = kernels::mul(kernels::mul_adjL(G, t.entries[1][0]), G);
        OperatorTuple conj = OperatorTuple::from_dense({u, v}, angle);

        ClassifyResult r = classify_irreducible_pair(conj, angle);
        Cx an{1, 0}, bn{1, 0};
        for (int p = 0; p < n; ++p) {
            an *= alpha;
            bn *= beta;
        }
        CHECK(std::abs(r.xi - an) < 1e-9);
        CHECK(std::abs(r.zeta - bn) < 1e-9);
        CHECK(r.residual_u < 1e-8);
        CHECK(r.residual_v < 1e-8);
        // W unitary
        CHECK(max_abs_diff(kernels::mul_adjL(r.W, r.W), ComplexMatrix::identity(static_cast<int>(n))) <
              1e-9);
    }
}

TEST_CASE("classification rejects bad inputs") {
    OperatorTuple t = standard_pair(RationalAngle(1, 3));
    CHECK_THROWS_AS(classify_irreducible_pair(t, RationalAngle(1, 2)), std::invalid_argument);

    OperatorTuple bad = t;
    bad.entries[1][0] *= Cx{1.001, 0.0};  // not unitary
    CHECK_THROWS_AS(classify_irreducible_pair(bad, RationalAngle(1, 3)), std::invalid_argument);

    OperatorTuple wrongq = OperatorTuple::from_dense(
        {clock_matrix(RationalAngle(1, 3)), clock_matrix(RationalAngle(1, 3))});
    CHECK_THROWS_AS(classify_irreducible_pair(wrongq, RationalAngle(1, 3)), std::invalid_argument);
}

TEST_CASE("lambda commutant dimension cross-checks the Sylvester route") {
    LambdaMatrix l3 = LambdaMatrix::from_upper(
        3, {RationalAngle(1, 2), RationalAngle(1, 2), RationalAngle(1, 2)});
    OperatorTuple t3 = lambda_tuple(l3);
    CHECK(lambda_commutant_dimension(l3) == commutant_dimension(t3.dense_all()));

    LambdaMatrix lone = LambdaMatrix::from_upper(
        3, {RationalAngle(1, 3), RationalAngle(0, 1), RationalAngle(0, 1)});
    CHECK(lambda_commutant_dimension(lone) == 1);
    CHECK(commutant_dimension(lambda_tuple(lone).dense_all()) == 1);

    LambdaMatrix l2 = LambdaMatrix::from_upper(2, {RationalAngle(2, 5)});
    CHECK(lambda_commutant_dimension(l2) == 1);
}

TEST_CASE("lambda summand dimensions") {
    // three pairwise anti-commuting unitaries on dim 8: four summands of dim 2
    LambdaMatrix l3 = LambdaMatrix::from_upper(
        3, {RationalAngle(1, 2), RationalAngle(1, 2), RationalAngle(1, 2)});
    auto dims = lambda_summand_dimensions(l3, 99);
    CHECK(dims == std::vector<int>{2, 2, 2, 2});

    // irreducible single pair
    LambdaMatrix l2 = LambdaMatrix::from_upper(2, {RationalAngle(1, 4)});
    CHECK(lambda_summand_dimensions(l2, 1) == std::vector<int>{4});
}
