#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oskit/choi.hpp"
#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"

using namespace oskit;
using namespace oskit::choi;

namespace {

ComplexMatrix unit_e(int dim, int i, int j) {
    ComplexMatrix m(dim);
    m(i, j) = 1.0;
    return m;
}

ChoiMap random_hermitian_preserving_map(int m, int mp, std::mt19937_64& rng) {
    // images chosen so the Choi matrix is Hermitian
    std::vector<ComplexMatrix> images(static_cast<size_t>(m) * m, ComplexMatrix(mp));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            ComplexMatrix img = random_hermitian(mp, rng);
            if (i == j) {
                images[static_cast<size_t>(i) * m + i] = img;
            } else {
                ComplexMatrix g = random_hermitian(mp, rng);
                ComplexMatrix a(mp);
                for (int k = 0; k < mp; ++k)
                    for (int l = 0; l < mp; ++l) a(k, l) = img(k, l) + Cx{0, 1} * g(k, l);
                images[static_cast<size_t>(i) * m + j] = a;
                images[static_cast<size_t>(j) * m + i] = a.adjoint();
            }
        }
    return choi_from_images(m, mp, images);
}

}  // namespace

TEST_CASE("Choi of the identity map on M2") {
    ChoiMap id = identity_map(2);
    auto eig = hermitian_eigenvalues(id.choi);
    // rank-one 2|Omega><Omega|
    CHECK(eig[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig[3] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Choi of the trace map on M2 is the identity") {
    std::vector<ComplexMatrix> images;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ComplexMatrix img(2);
            if (i == j) img = ComplexMatrix::identity(2);
            images.push_back(img);
        }
    ChoiMap tr_map = choi_from_images(2, 2, images);
    CHECK(max_abs_diff(tr_map.choi, ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("Choi of the transpose map on M2 is the swap") {
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> vals;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) vals.push_back({unit_e(2, i, j), unit_e(2, j, i)});
    ChoiMap t = choi_of(vals);
    auto eig = hermitian_eigenvalues(t.choi);
    CHECK(eig.front() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig.back() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(is_cp(t).completely_positive);
    CHECK(is_cp(t).min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("apply: identity, trace map, tomiyama") {
    std::mt19937_64 rng(5);
    ComplexMatrix X = random_hermitian(2, rng);
    CHECK(max_abs_diff(apply(identity_map(2), X), X) < 1e-14);

    std::vector<ComplexMatrix> images;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            images.push_back(i == j ? ComplexMatrix::identity(2) : ComplexMatrix(2));
    ChoiMap tr_map = choi_from_images(2, 2, images);
    ComplexMatrix D = ComplexMatrix::diagonal({Cx{1, 0}, Cx{2, 0}});
    ComplexMatrix out = apply(tr_map, D);
    ComplexMatrix expect = ComplexMatrix::identity(2);
    expect *= Cx{3.0, 0.0};
    CHECK(max_abs_diff(out, expect) < 1e-14);

    // phi(E11) = 2 tr(E11) I3 - E11
    ChoiMap tom = tomiyama_map(2, 3);
    ComplexMatrix img = apply(tom, unit_e(3, 0, 0));
    ComplexMatrix want = ComplexMatrix::identity(3);
    want *= Cx{2.0, 0.0};
    want -= unit_e(3, 0, 0);
    CHECK(max_abs_diff(img, want) == 0.0);
}

TEST_CASE("tomiyama map spectrum and unitality defect") {
    ChoiMap tom = tomiyama_map(2, 3);
    auto v = is_cp(tom);
    CHECK(v.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(v.completely_positive);
    // spectrum {n - N, n} = {-1, 2}
    auto eig = hermitian_eigenvalues(tom.choi);
    CHECK(eig.front() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eig.back() == doctest::Approx(2.0).epsilon(1e-12));

    // not unital: phi(I) = (nN - 1) I
    ComplexMatrix img = apply(tom, ComplexMatrix::identity(3));
    ComplexMatrix want = ComplexMatrix::identity(3);
    want *= Cx{5.0, 0.0};
    CHECK(max_abs_diff(img, want) < 1e-14);
    CHECK_FALSE(tom.is_unital());

    ChoiMap tom12 = tomiyama_map(1, 2);
    CHECK(is_cp(tom12).min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(tomiyama_map(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(tomiyama_map(3, 2), std::invalid_argument);
}

TEST_CASE("choi_of/apply round trip on random Hermitian-preserving maps") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        ChoiMap phi = random_hermitian_preserving_map(3, 2, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ComplexMatrix img = apply(phi, unit_e(3, i, j));
                // re-assemble and compare against the stored block
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        CHECK(std::abs(img(k, l) - phi.at(i, k, j, l)) < 1e-11);
            }
    }
}

TEST_CASE("composition computed two ways agrees") {
    std::mt19937_64 rng(123);
    ChoiMap a = random_hermitian_preserving_map(2, 3, rng);
    ChoiMap b = random_hermitian_preserving_map(3, 2, rng);
    ChoiMap ba = compose(b, a);
    // oracle: Choi contraction C_{b o a}[(i,k),(j,l)] = sum_rs Ca[(i,r),(j,s)] Cb[(r,k),(s,l)]
    ComplexMatrix expect(2 * 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    Cx s{0, 0};
                    for (int r = 0; r < 3; ++r)
                        for (int ss = 0; ss < 3; ++ss)
                            s += a.at(i, r, j, ss) * b.at(r, k, ss, l);
                    expect(i * 2 + k, j * 2 + l) = s;
                }
    CHECK(max_abs_diff(ba.choi, expect) < 1e-10);
}

TEST_CASE("CP unital maps preserve positivity") {
    std::mt19937_64 rng(31);
    ComplexMatrix G = random_unitary(3, rng);
    ChoiMap phi = conjugation_map(G);
    CHECK(is_cp(phi).completely_positive);
    CHECK(phi.is_unital());
    for (int trial = 0; trial < 100; ++trial) {
        ComplexMatrix H = random_hermitian(3, rng);
        ComplexMatrix X = kernels::mul(H, H);  // PSD
        CHECK(lambda_min(apply(phi, X).hermitized()) > -1e-9);
    }
}

TEST_CASE("violation search on the tomiyama map") {
    ChoiMap tom = tomiyama_map(2, 3);

    // level 3: the maximally entangled projector witnesses the violation
    ViolationReport r3 = positivity_violation_search(tom, 3, 8, 42);
    CHECK(r3.found);
    CHECK(r3.violation < -1e-3);
    // oracle: (id (x) phi)(3 |Omega><Omega|) has eigenvalue n - N = -1
    ComplexMatrix Om(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Om(i * 3 + i, j * 3 + j) = Cx{1.0, 0.0};
    ComplexMatrix out = apply_amplified(tom, 3, Om).hermitized();
    CHECK(lambda_min(out) == doctest::Approx(-1.0).epsilon(1e-10));
    // trace-one scaling of the same witness: eigenvalue (n-N)/N
    CHECK(r3.violation == doctest::Approx(-1.0 / 3.0).epsilon(1e-6));

    // level 2: the map is 2-positive, the search must come back empty
    ViolationReport r2 = positivity_violation_search(tom, 2, 100, 7);
    CHECK_FALSE(r2.found);
    CHECK(!r2.note.empty());

    // identity map: CP, nothing to find
    ViolationReport rid = positivity_violation_search(identity_map(2), 2, 10, 3);
    CHECK_FALSE(rid.found);
}

TEST_CASE("vector states are unital maps to M1") {
    std::mt19937_64 rng(11);
    auto v = random_unit_vector(4, rng);
    ChoiMap st = vector_state(v);
    CHECK(st.is_unital());
    CHECK(is_cp(st).completely_positive);
}
