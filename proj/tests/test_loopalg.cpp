#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painlax/loopalg.hpp"
#include "painlax/sampling.hpp"

using namespace painlax;

namespace {

std::vector<PartitionSpec> all_specs(int n) {
    std::vector<PartitionSpec> out;
    out.emplace_back(PartitionKind::NplusNplus, n);
    if (n >= 2) {
        out.emplace_back(PartitionKind::TwoNminusOne_One, n);
        out.emplace_back(PartitionKind::TwoN_One, n);
    }
    out.emplace_back(PartitionKind::N_N_One, n);
    return out;
}

LaurentMatrix<Exact> random_sparse(Sampler& smp, int N) {
    LaurentMatrix<Exact> m(N);
    std::uniform_int_distribution<int> idx(1, N), ex(-2, 2);
    for (int k = 0; k < 2 * N; ++k)
        m.add(idx(smp.rng()), idx(smp.rng()), ex(smp.rng()), smp.rational());
    return m;
}

}  // namespace

TEST_CASE("affine Cartan matrix of type A") {
    auto a = cartan_matrix(3);
    CHECK(a[0] == std::vector<int>{2, -1, 0, -1});
    CHECK(a[1][3] == 0);
    for (int m = 2; m <= 7; ++m) {
        auto c = cartan_matrix(m);
        for (int i = 0; i <= m; ++i) {
            int row = 0, col = 0;
            for (int j = 0; j <= m; ++j) {
                row += c[i][j];
                col += c[j][i];
            }
            CHECK(row == 0);
            CHECK(col == 0);
        }
    }
    CHECK_THROWS_AS(cartan_matrix(1), UnsupportedRank);
}

TEST_CASE("graded Chevalley generators and bracket relations") {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& spec : all_specs(n)) {
            CAPTURE(partition_name(spec.kind));
            CAPTURE(n);
            int N = spec.size();
            auto g = generators<Exact>(spec);
            auto a = cartan_matrix(N - 1);
            for (int i = 0; i < N; ++i) {
                // [e_i, f_j] = delta_ij h_i
                for (int j = 0; j < N; ++j) {
                    auto br = bracket(g.e[i], g.f[j]);
                    if (i == j)
                        CHECK(br == g.h[i]);
                    else
                        CHECK(br.is_zero());
                }
                // [h_i, e_j] = a_ij e_j
                for (int j = 0; j < N; ++j)
                    CHECK(bracket(g.h[i], g.e[j]) == Exact(a[i][j]) * g.e[j]);
            }
        }
    }
}

TEST_CASE("(n+1,n+1) n=1 generators match the graded realization") {
    PartitionSpec spec(PartitionKind::NplusNplus, 1);
    auto g = generators<Exact>(spec);
    CHECK(g.e[0] == unit_matrix<Exact>(4, 4, 1, 1));  // e_0 = z E_{4,1}
    CHECK(g.e[1] == unit_matrix<Exact>(4, 1, 2, 0));  // e_1 = E_{1,2}
    CHECK(g.e[2] == unit_matrix<Exact>(4, 2, 3, 1));  // e_2 = z E_{2,3}
}

TEST_CASE("(n,n,1) n=2 grading puts e_0 at E_{5,1} with no z") {
    PartitionSpec spec(PartitionKind::N_N_One, 2);
    CHECK(spec.grading() == std::vector<int>{0, 1, 0, 1, 0});
    auto g = generators<Exact>(spec);
    CHECK(g.e[0] == unit_matrix<Exact>(5, 5, 1, 0));
}

TEST_CASE("bracket is antisymmetric and satisfies Jacobi") {
    Sampler smp(7);
    for (int rep = 0; rep < 5; ++rep) {
        auto A = random_sparse(smp, 4), B = random_sparse(smp, 4), C = random_sparse(smp, 4);
        CHECK(bracket(A, A).is_zero());
        auto jac = bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) +
                   bracket(C, bracket(A, B));
        CHECK(jac.is_zero());
    }
    CHECK_THROWS_AS(bracket(random_sparse(smp, 3), random_sparse(smp, 4)), DimensionError);
}

TEST_CASE("elementary bracket [zE_12, E_21] = z(E_11 - E_22)") {
    auto x = unit_matrix<Exact>(3, 1, 2, 1), y = unit_matrix<Exact>(3, 2, 1, 0);
    LaurentMatrix<Exact> want(3);
    want.add(1, 1, 1, Exact(1));
    want.add(2, 2, 1, Exact(-1));
    CHECK(bracket(x, y) == want);
}

TEST_CASE("Heisenberg elements: values, commutation, grading") {
    // Lambda_1 for (2,2) is z(E_13 + E_31)
    PartitionSpec s22(PartitionKind::NplusNplus, 1);
    LaurentMatrix<Exact> want(4);
    want.add(1, 3, 1, Exact(1));
    want.add(3, 1, 1, Exact(1));
    CHECK(heisenberg_lambda<Exact>(s22, 1) == want);
    CHECK_THROWS_AS(heisenberg_lambda<Exact>(s22, 3), UnsupportedIndex);

    for (int n = 1; n <= 3; ++n) {
        for (const auto& spec : all_specs(n)) {
            CAPTURE(partition_name(spec.kind));
            CAPTURE(n);
            auto l1 = heisenberg_lambda<Exact>(spec, 1);
            auto l2 = heisenberg_lambda<Exact>(spec, 2);
            CHECK(bracket(l1, l2).is_zero());
            CHECK(l1.trace().is_zero());
            CHECK(l2.trace().is_zero());
            // [theta, Lambda_k] = d_k Lambda_k with theta = z d/dz
            CHECK(l1.z_ddz() == Exact(spec.lambda_grade(1)) * l1);
            CHECK(l2.z_ddz() == Exact(spec.lambda_grade(2)) * l2);
        }
    }
}

TEST_CASE("generators are traceless and graded") {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& spec : all_specs(n)) {
            auto g = generators<Exact>(spec);
            auto sv = spec.grading();
            for (int i = 0; i < spec.size(); ++i) {
                CHECK(g.e[i].trace().is_zero());
                CHECK(g.e[i].z_ddz() == Exact(sv[i]) * g.e[i]);
                CHECK(g.f[i].z_ddz() == Exact(-sv[i]) * g.f[i]);
            }
        }
    }
}

TEST_CASE("tail partitions reject n=1 (degenerate realization)") {
    CHECK_THROWS_AS(PartitionSpec(PartitionKind::TwoNminusOne_One, 1), UnsupportedRank);
    CHECK_THROWS_AS(PartitionSpec(PartitionKind::TwoN_One, 1), UnsupportedRank);
}

TEST_CASE("dense/sparse round-trip is the identity") {
    Sampler smp(99);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_sparse(smp, 5);
        CHECK(LaurentMatrix<Exact>::from_dense(m.dense()) == m);
    }
}
