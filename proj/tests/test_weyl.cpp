#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "painlax/weyl.hpp"

using namespace painlax;

namespace {

Exact rat(long long n, long long d = 1) { return Exact(Rational(n, d)); }

WeylState<Exact> sample_state(Sampler& smp, int n) {
    int rejected = 0;
    return painlax::detail::admissible_state<Exact>(smp, n, &rejected);
}

}  // namespace

TEST_CASE("r_0 parameter action on the Cartan row") {
    // n=1, alpha = (1/10, 2/10, 3/10, 4/10) -> (-1/10, 3/10, 3/10, 5/10)
    Params<Exact> prm;
    prm.alpha = {rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10)};
    prm.eta = rat(1, 6);
    PhasePoint<Exact> x{{rat(3)}, {rat(2)}, rat(7, 2)};
    auto img = reflect(0, 1, prm, x);
    CHECK(img.params.alpha ==
          std::vector<Exact>{rat(-1, 10), rat(3, 10), rat(3, 10), rat(5, 10)});
    CHECK(img.params.eta == prm.eta + prm.alpha[0]);
    Exact sum = rat(0);
    for (const auto& a : img.params.alpha) sum += a;
    CHECK(sum == rat(1));
}

TEST_CASE("odd reflections fix p; zero alpha gives the identity on phase space") {
    Sampler smp(17);
    for (int n = 1; n <= 2; ++n) {
        auto st = sample_state(smp, n);
        for (int i = 1; i <= 2 * n - 1; i += 2) {
            auto img = reflect(i, n, st.params, st.x);
            CHECK(img.x.p == st.x.p);  // r_{2i-1}(p_j) = p_j
        }
        auto zeroed = st;
        zeroed.params.alpha[1] = rat(0);
        auto img = reflect(1, n, zeroed.params, zeroed.x);
        CHECK(img.x.q == zeroed.x.q);
        CHECK(img.x.p == zeroed.x.p);
    }
}

TEST_CASE("words: empty/identity, involution, commuting braid") {
    Sampler smp(23);
    for (int n = 1; n <= 2; ++n) {
        auto st = sample_state(smp, n);
        auto id = apply_word({}, n, st.params, st.x);
        double dummy = 0;
        CHECK(weyl_states_equal(id, st, 0.0, &dummy));
        for (int i = 0; i < 2 * n + 2; ++i) {
            auto sq = apply_word({i, i}, n, st.params, st.x);
            CHECK(weyl_states_equal(sq, st, 0.0, &dummy));
        }
        if (n == 1) {
            for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 3}}) {
                auto w = apply_word({i, j, i, j}, 1, st.params, st.x);
                CHECK(weyl_states_equal(w, st, 0.0, &dummy));
            }
        }
    }
}

TEST_CASE("full relation suite passes exactly (n = 1, 2)") {
    for (int n = 1; n <= 2; ++n) {
        auto reports = check_relations<Exact>(n, 20, 42);
        for (const auto& rep : reports) {
            CAPTURE(rep.name);
            CHECK(rep.pass);
            CHECK(rep.max_error == 0.0);
        }
    }
    for (const auto& rep : check_relations<Complex>(1, 50, 7)) {
        CAPTURE(rep.name);
        CHECK(rep.pass);
    }
}

TEST_CASE("a corrupted reflection breaks the involution") {
    // flip the sign of r_0's momentum shift: (r_0')^2 moves p_1 by 2a/(q_1-1)
    Sampler smp(31);
    auto st = sample_state(smp, 1);
    auto corrupt = [&](const WeylState<Exact>& s) {
        WeylState<Exact> out = s;
        out.x.p[0] = s.x.p[0] - s.params.alpha[0] / (s.x.q[0] - rat(1));
        for (int j = 0; j < 4; ++j) {
            int aij = (j == 0) ? 1 : ((j == 1 || j == 3) ? -1 : 0);  // a_00 corrupted to 1
            out.params.alpha[j] = s.params.alpha[j] - rat(aij) * s.params.alpha[0];
        }
        out.params.eta = s.params.eta + s.params.alpha[0];
        return out;
    };
    auto twice = corrupt(corrupt(st));
    CHECK(!(twice.x.p[0] == st.x.p[0]));
}

TEST_CASE("symplecticity: exact pass, identity at zero alpha, unit shear for r_0") {
    for (int n = 1; n <= 2; ++n)
        for (int i = 0; i < 2 * n + 2; ++i) {
            auto rep = check_symplectic<Exact>(i, n, 20, 1000 + i);
            CAPTURE(rep.name);
            CHECK(rep.pass);
        }

    Sampler smp(3);
    auto st = sample_state(smp, 2);
    st.params.alpha[3] = rat(0);
    auto J = reflect_jacobian(3, 2, st.params, st.x);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(J[r][c] == (r == c ? rat(1) : rat(0)));

    // r_0 is a single shear in (q_1, p_1): triangular, unit determinant
    auto st1 = sample_state(smp, 1);
    auto J0 = reflect_jacobian(0, 1, st1.params, st1.x);
    CHECK(J0[0][0] == rat(1));
    CHECK(J0[0][1] == rat(0));
    CHECK(J0[1][1] == rat(1));
    CHECK(J0[0][0] * J0[1][1] - J0[0][1] * J0[1][0] == rat(1));

    auto rep5 = check_symplectic<Exact>(5, 2, 10, 77);
    CHECK(rep5.pass);
}

TEST_CASE("equivariance of the P(A_{2n+1}*) field under every reflection") {
    for (int n = 1; n <= 2; ++n)
        for (int i = 0; i < 2 * n + 2; ++i) {
            auto rep = check_equivariance<Exact>(i, n, 10, 555 + i);
            CAPTURE(rep.name);
            CHECK(rep.pass);
            CHECK(rep.max_error == 0.0);
        }
    for (int i = 0; i < 4; ++i) {
        auto rep = check_equivariance<Complex>(i, 1, 50, 99 + i);
        CAPTURE(rep.name);
        CHECK(rep.pass);
        CHECK(rep.max_error <= 1e-8);
    }
}

TEST_CASE("alpha sum and involution on the parameter lattice") {
    Sampler smp(8);
    for (int n = 1; n <= 2; ++n) {
        auto st = sample_state(smp, n);
        for (int i = 0; i < 2 * n + 2; ++i) {
            auto img = reflect(i, n, st.params, st.x);
            Exact sum = rat(0);
            for (const auto& a : img.params.alpha) sum += a;
            CHECK(sum == rat(1));
            auto back = reflect(i, n, img.params, img.x);
            CHECK(back.params.alpha == st.params.alpha);
            CHECK(back.params.eta == st.params.eta);
        }
    }
}

TEST_CASE("parameter action is consistent with the dressing (kappa shift + gauge)") {
    // dress(r_i(alpha, eta)) equals dress(alpha, eta) with kappa_i += (kappa|alpha_i^vee),
    // up to the kappa_0 gauge; rho_1 is untouched
    Sampler smp(64);
    for (int n = 1; n <= 2; ++n) {
        PartitionSpec spec(PartitionKind::NplusNplus, n);
        auto st = sample_state(smp, n);
        auto ks = dress_parameters(spec, st.params);
        auto pair = kappa_pairings(spec, ks);
        for (int i = 0; i < 2 * n + 2; ++i) {
            auto img = reflect(i, n, st.params, st.x);
            auto ks2 = dress_parameters(spec, img.params);
            std::vector<Exact> shifted = ks.kappa;
            shifted[i] += pair[i];
            for (size_t j = 0; j < shifted.size(); ++j)
                CHECK(ks2.kappa[j] - ks2.kappa[0] == shifted[j] - shifted[0]);
            CHECK(ks2.rho1 == ks.rho1);
        }
    }
}
