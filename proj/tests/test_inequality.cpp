#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlv/errors.hpp"
#include "nlv/inequality.hpp"
#include "nlv/leggett.hpp"
#include "nlv/quantum.hpp"
#include "support.hpp"

using namespace nlv;
using namespace nlv::inequality;
using sphere::UnitVector;
using nlv::test::kDeg;

TEST_CASE("u coefficient") {
    CHECK(u_coefficient(1) == 0.0);
    CHECK(u_coefficient(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u_coefficient(3) == doctest::Approx(0.5773503).epsilon(1e-7));
    CHECK(u_coefficient(4) == doctest::Approx(0.6035534).epsilon(1e-7));
    CHECK(u_coefficient(100000) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-9));
    for (int n = 1; n < 200; ++n) REQUIRE(u_coefficient(n) < u_coefficient(n + 1));
    CHECK(u_coefficient(200) < u_limit());
    CHECK_THROWS_AS(u_coefficient(0), InvalidArgument);
}

TEST_CASE("discrete average examples") {
    const UnitVector x(1, 0, 0), y(0, 1, 0);
    auto r = discrete_average(x, x, 1);
    CHECK(r.value == doctest::Approx(1.0));

    r = discrete_average(x, y, 2);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.xi == doctest::Approx(0.0));

    for (int i = 0; i < 1000; ++i) {
        const auto w = test::random_unit();
        const auto c = test::random_unit();
        const auto avg = discrete_average(w, c, 5);
        const double u5 = u_coefficient(5);
        REQUIRE(avg.value >= u5 - 1e-12);
        REQUIRE(avg.value <= 1.0 + 1e-12);
        REQUIRE(avg.xi >= 0.0);
        REQUIRE(avg.xi < std::numbers::pi / 5);
        // Closed form of the same sum.
        REQUIRE(std::abs(avg.value - (std::sin(avg.xi) + 5 * u5 * std::cos(avg.xi)) / 5) < 1e-12);
    }
}

TEST_CASE("averaging axis for collinear inputs") {
    const UnitVector x(1, 0, 0);
    CHECK(averaging_axis(x, x) == UnitVector(0, -1, 0));
    const UnitVector z(0, 0, 1);
    const auto ax = averaging_axis(z, -z);
    CHECK(ax.x() == doctest::Approx(-1.0));
    const auto w = test::random_unit();
    const auto a = averaging_axis(w, w);
    CHECK(std::abs(dot(a, w)) < 1e-12);
    CHECK(a.x() == doctest::Approx(-std::sqrt(1 - w.x() * w.x())));
}

TEST_CASE("E_jN examples") {
    const quantum::QuantumSource singlet(quantum::singlet());
    const quantum::QuantumSource mixed(quantum::maximally_mixed());
    for (int i = 0; i < 50; ++i) {
        const auto frames = test::random_frames();
        const int n = 1 + i % 6;
        const double phi = test::uniform(0, std::numbers::pi);
        const auto s = sphere::build_schedule(frames.second, n, phi);
        REQUIRE(E_jN(singlet, s, Theta::Zero) == doctest::Approx(-1.0).epsilon(1e-14));
        REQUIRE(E_jN(singlet, s, Theta::Phi) == doctest::Approx(-std::cos(phi)).epsilon(1e-14));
        REQUIRE(std::abs(E_jN(mixed, s, Theta::Phi)) < 1e-15);
    }
}

TEST_CASE("bound matches tabulated values") {
    struct Row {
        int n;
        double phi_deg;
        const char* bound;
    };
    const Row rows[] = {{2, 12.5, "3.8911"}, {2, 15, "3.8695"},   {2, 17.5, "3.8479"},
                        {3, 12.5, "3.8743"}, {3, 15, "3.8493"},   {3, 17.5, "3.8243"},
                        {3, 20, "3.7995"},   {4, 12.5, "3.8686"}, {4, 15, "3.8424"},
                        {4, 17.5, "3.8164"}};
    for (const auto& r : rows) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", bound(r.n, r.phi_deg * kDeg));
        CHECK(std::string(buf) == r.bound);
    }
}

TEST_CASE("L_N examples") {
    const quantum::QuantumSource singlet(quantum::singlet());
    const auto frames = sphere::default_frames();

    auto rep = L_N(singlet, frames, 2, 15 * kDeg);
    CHECK(rep.l_value == doctest::Approx(3.931852).epsilon(1e-7));
    CHECK(rep.bound == doctest::Approx(3.8695).epsilon(1e-5));
    CHECK(rep.sigma == 0.0);
    CHECK_FALSE(rep.violation_sigmas.has_value());

    rep = L_N(singlet, frames, 4, 17.5 * kDeg);
    CHECK(rep.bound == doctest::Approx(3.8164).epsilon(1e-5));

    rep = L_N(quantum::QuantumSource(quantum::maximally_mixed()), frames, 3, 0.2);
    CHECK(std::abs(rep.l_value) < 1e-15);

    const sphere::FramePair skew{sphere::PlaneFrame(UnitVector(0, 0, 1), UnitVector(1, 0, 0)),
                                 sphere::PlaneFrame(UnitVector(0, 0.6, 0.8), UnitVector(1, 0, 0))};
    CHECK_THROWS_AS(L_N(singlet, skew, 2, 0.1), InvalidArgument);
}

TEST_CASE("singlet L_N is independent of N and the seeds") {
    const quantum::QuantumSource singlet(quantum::singlet());
    for (int f = 0; f < 10; ++f) {
        const auto frames = f == 0 ? sphere::default_frames() : test::random_frames();
        for (int n = 1; n <= 6; ++n) {
            for (int i = 0; i < 20; ++i) {
                const double phi = i * std::numbers::pi / 19;
                REQUIRE(std::abs(L_N(singlet, frames, n, phi).l_value - quantum::singlet_L(phi)) <
                        1e-12);
            }
        }
        const auto rotated =
            sphere::FramePair{frames.first.rotated_seed(test::uniform(0, 6)),
                              frames.second.rotated_seed(test::uniform(0, 6))};
        REQUIRE(std::abs(L_N(singlet, rotated, 3, 0.3).l_value -
                         L_N(singlet, frames, 3, 0.3).l_value) < 1e-12);
    }
}

TEST_CASE("Bell-diagonal average over equally spaced settings") {
    // E_j(theta) = cos(theta) (t1 + t_other)/2 for N >= 2 in the default planes.
    const double t1 = -0.994, t2 = -0.989, t3 = -0.983;
    const quantum::QuantumSource src(quantum::bell_diagonal(t1, t2, t3));
    const auto [p1, p2] = sphere::default_frames();
    for (int n = 2; n <= 8; ++n) {
        const double theta = test::uniform(0, std::numbers::pi);
        const auto s1 = sphere::build_schedule(p1, n, theta);
        const auto s2 = sphere::build_schedule(p2, n, theta);
        REQUIRE(E_jN(src, s1, Theta::Phi) == doctest::Approx(std::cos(theta) * (t1 + t2) / 2).epsilon(1e-12));
        REQUIRE(E_jN(src, s2, Theta::Phi) == doctest::Approx(std::cos(theta) * (t1 + t3) / 2).epsilon(1e-12));
    }
}

TEST_CASE("continuum limit") {
    const quantum::QuantumSource singlet(quantum::singlet());
    const auto frames = sphere::default_frames();

    auto r = continuum_L(singlet, frames, 0.0, 360);
    CHECK(r.l_value == doctest::Approx(4.0));
    CHECK(r.bound == 4.0);

    const quantum::QuantumSource bd(quantum::from_visibilities(0.995, 0.990, 0.982));
    r = continuum_L(bd, frames, 15 * kDeg, 360);
    // (1 + cos phi)(|t1 + t2| + |t1 + t3|)/2 with t = (-0.994, -0.989, -0.983)
    CHECK(r.l_value == doctest::Approx(3.892533136052355).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(4 - 4 / std::numbers::pi * std::sin(7.5 * kDeg)));

    SUBCASE("M = N K matches L_N on a rotation-invariant source") {
        const quantum::QuantumSource w(quantum::werner(0.97));
        for (int n = 1; n <= 5; ++n)
            for (int k = 1; k <= 4; ++k) {
                const double phi = test::uniform(0, 1);
                REQUIRE(std::abs(continuum_L(w, frames, phi, n * k).l_value -
                                 L_N(w, frames, n, phi).l_value) < 1e-12);
            }
    }
    SUBCASE("maximal singlet margin at 18.3 deg") {
        auto margin = [&](double phi) {
            const auto c = continuum_L(singlet, frames, phi, 64);
            return c.l_value - c.bound;
        };
        const double best = golden_section_maximize(margin, 1 * kDeg, 45 * kDeg, 1e-6);
        CHECK(best / kDeg == doctest::Approx(18.31).epsilon(0.0005));
    }
}

TEST_CASE("optimal phi") {
    CHECK(optimal_phi(2) / kDeg == doctest::Approx(14.36).epsilon(0.0005));
    CHECK(optimal_phi(4) / kDeg == doctest::Approx(17.35682220504355).epsilon(1e-12));
    CHECK(optimal_phi_continuum() / kDeg == doctest::Approx(18.31).epsilon(0.0005));
    CHECK_THROWS_AS(optimal_phi(1), NoViolation);

    const quantum::QuantumSource singlet(quantum::singlet());
    for (int n = 2; n <= 6; ++n) {
        const auto scan = scan_violation(singlet, sphere::default_frames(), n, 0.0, 45 * kDeg,
                                         1e-7);
        CHECK(scan.best_phi == doctest::Approx(optimal_phi(n)).epsilon(1e-5));
        REQUIRE(scan.region.has_value());
        CHECK(scan.region->first < optimal_phi(n));
        CHECK(scan.region->second > optimal_phi(n));
    }
}

TEST_CASE("no violation for a 96% Werner state") {
    const quantum::QuantumSource w(quantum::werner(0.96));
    for (int n = 2; n <= 6; ++n) {
        const auto scan = scan_violation(w, sphere::default_frames(), n, 0.0, 45 * kDeg, 1e-4);
        CHECK(scan.best_margin < 0.0);
        CHECK_FALSE(scan.region.has_value());
    }
}

TEST_CASE("bound derivative matches finite differences") {
    for (int n = 1; n <= 8; ++n) {
        for (int i = 1; i < 50; ++i) {
            const double phi = i * std::numbers::pi / 50;
            const double h = 1e-5;
            const double fd = (bound(n, phi + h) - bound(n, phi - h)) / (2 * h);
            REQUIRE(std::abs(fd - bound_derivative(n, phi)) < 1e-6);
        }
    }
}

TEST_CASE("local product ensembles never exceed the bound") {
    for (int e = 0; e < 100; ++e) {
        std::vector<leggett::Component> comps;
        const int k = 1 + e % 3;
        for (int i = 0; i < k; ++i) {
            comps.push_back(leggett::make_component(1.0 / k, test::random_unit(), test::random_unit(),
                                                    leggett::product_correlation));
        }
        const leggett::PureEnsemble ens(std::move(comps));
        const auto frames = test::random_frames();
        for (int n = 1; n <= 6; ++n)
            for (int i = 0; i < 50; ++i) {
                const auto rep = L_N(ens, frames, n, i * std::numbers::pi / 49);
                REQUIRE(rep.l_value <= rep.bound + 1e-12);
            }
    }
}
