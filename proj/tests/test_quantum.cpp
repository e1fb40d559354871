#include <doctest.h>

#include <cmath>

#include "nlv/errors.hpp"
#include "nlv/quantum.hpp"
#include "support.hpp"

using namespace nlv;
using namespace nlv::quantum;
using sphere::UnitVector;
using nlv::test::kDeg;

namespace {

// Random mixed state: G G^dagger / Tr with complex Gaussian G.
TwoQubitState random_state() {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = {g(test::rng()), g(test::rng())};
    Matrix4 rho = m * m.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return TwoQubitState(rho);
}

}  // namespace

TEST_CASE("state validation") {
    Matrix4 bad = Matrix4::Zero();
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(TwoQubitState{bad}, InvalidArgument);  // trace 0.5
    bad(1, 1) = 0.5;
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(TwoQubitState{bad}, InvalidArgument);  // not Hermitian
    Matrix4 neg = Matrix4::Zero();
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(TwoQubitState{neg}, InvalidArgument);
    CHECK_THROWS_AS(bell_diagonal(1, 1, 1), InvalidArgument);  // outside tetrahedron
    CHECK_NOTHROW(bell_diagonal(1, 1, -1));                     // a Bell state
    CHECK_THROWS_AS(werner(1.2), InvalidArgument);
    CHECK_NOTHROW(bell_diagonal(-1, -1, -1));
}

TEST_CASE("outcome probability examples") {
    const UnitVector h(1, 0, 0);
    const auto s = singlet();
    CHECK(outcome_probability(s, h, h, 1, 1) == doctest::Approx(0.0));
    CHECK(outcome_probability(s, h, -h, 1, 1) == doctest::Approx(0.5));
    const auto mm = maximally_mixed();
    for (int i = 0; i < 20; ++i) {
        CHECK(outcome_probability(mm, test::random_unit(), test::random_unit(), -1, 1) ==
              doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(outcome_probability(s, h, h, 0, 1), InvalidArgument);
}

TEST_CASE("correlation examples") {
    CHECK(correlation(maximally_mixed(), UnitVector(1, 0, 0), UnitVector(0, 1, 0)) ==
          doctest::Approx(0.0));
    const UnitVector d(0, 1, 0);
    CHECK(correlation(colored_noise(0.99), d, d) == doctest::Approx(-0.99).epsilon(1e-12));
}

TEST_CASE("probabilities sum to one for random states") {
    for (int i = 0; i < 10000; ++i) {
        const auto st = random_state();
        const auto a = test::random_unit();
        const auto b = test::random_unit();
        double sum = 0.0;
        for (int ra : {1, -1})
            for (int rb : {1, -1}) sum += outcome_probability(st, a, b, ra, rb);
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
        REQUIRE(std::abs(correlation(st, a, b) - correlation_trace(st, a, b)) < 1e-12);
    }
}

TEST_CASE("singlet correlation is -a.b") {
    const auto s = singlet();
    const QuantumSource src(s);
    CHECK(src.rotation_invariant());
    for (int i = 0; i < 10000; ++i) {
        const auto a = test::random_unit();
        const auto b = test::random_unit();
        REQUIRE(std::abs(correlation(s, a, b) + dot(a, b)) < 1e-12);
        REQUIRE(std::abs(src.correlation(a, b) + dot(a, b)) < 1e-12);
    }
}

TEST_CASE("QuantumSource agrees with the density-matrix path") {
    for (int i = 0; i < 500; ++i) {
        const auto st = random_state();
        const QuantumSource src(st);
        const auto a = test::random_unit();
        const auto b = test::random_unit();
        for (int ra : {1, -1})
            for (int rb : {1, -1})
                REQUIRE(std::abs(src.probability(a, b, ra, rb) -
                                 outcome_probability(st, a, b, ra, rb)) < 1e-12);
    }
}

TEST_CASE("named states") {
    CHECK((werner(1.0).rho() - singlet().rho()).cwiseAbs().maxCoeff() < 1e-15);

    SUBCASE("colored noise tensor") {
        // HV/VH admixture keeps the S1 correlation perfect.
        for (double v : {0.0, 0.5, 0.99, 1.0}) {
            const auto t = correlation_tensor(colored_noise(v));
            CHECK(t.t1 == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(t.t2 == doctest::Approx(-v).epsilon(1e-12));
            CHECK(t.t3 == doctest::Approx(-v).epsilon(1e-12));
        }
    }
    SUBCASE("measured visibilities") {
        // 0.995 + 0.990 - 0.982 > 1: no Bell-diagonal state has all three.
        CHECK(bell_diagonal_min_eigenvalue({-0.995, -0.990, -0.982}) ==
              doctest::Approx(-0.00075).epsilon(1e-9));
        CHECK_THROWS_AS(bell_diagonal(-0.995, -0.990, -0.982), InvalidArgument);
        const auto u = correlation_tensor(from_visibilities(0.995, 0.990, 0.982));
        CHECK(u.t1 == doctest::Approx(-0.994).epsilon(1e-12));
        CHECK(u.t2 == doctest::Approx(-0.989).epsilon(1e-12));
        CHECK(u.t3 == doctest::Approx(-0.983).epsilon(1e-12));
        const auto w = correlation_tensor(from_visibilities(0.99, 0.98, 0.97));
        CHECK(w.t2 == doctest::Approx(-0.98).epsilon(1e-12));
    }
    SUBCASE("werner is rotation invariant, colored noise is not") {
        CHECK(QuantumSource(werner(0.9)).rotation_invariant());
        CHECK_FALSE(QuantumSource(colored_noise(0.9)).rotation_invariant());
        CHECK(QuantumSource(maximally_mixed()).rotation_invariant());
    }
}

TEST_CASE("singlet_L") {
    CHECK(singlet_L(0.0) == 4.0);
    CHECK(singlet_L(15 * kDeg) == doctest::Approx(3.931852).epsilon(1e-7));
    CHECK(std::abs(singlet_L(std::numbers::pi)) < 1e-15);
}

TEST_CASE("nearest Bell-diagonal tensor") {
    for (int i = 0; i < 2000; ++i) {
        const CorrelationTensor x{test::uniform(-2, 2), test::uniform(-2, 2), test::uniform(-2, 2)};
        const auto p = nearest_bell_diagonal(x);
        REQUIRE(bell_diagonal_min_eigenvalue(p) >= -1e-14);
        const double d = std::hypot(p.t1 - x.t1, p.t2 - x.t2, p.t3 - x.t3);
        if (bell_diagonal_min_eigenvalue(x) >= 0) REQUIRE(d == 0.0);
        // No random feasible point is closer.
        for (int k = 0; k < 50; ++k) {
            const CorrelationTensor q{test::uniform(-1, 1), test::uniform(-1, 1), test::uniform(-1, 1)};
            if (bell_diagonal_min_eigenvalue(q) < 0) continue;
            REQUIRE(std::hypot(q.t1 - x.t1, q.t2 - x.t2, q.t3 - x.t3) >= d - 1e-12);
        }
    }
}
