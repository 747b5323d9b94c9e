#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ncps/kernels.hpp"
#include "ncps/rng.hpp"
#include "oracles.hpp"

using namespace ncps;

TEST_CASE("rational kernel values") {
    const auto k = make_rational();
    CHECK(k.name() == "rational");
    CHECK(k.smoothness() == Smoothness::piecewise_c2);
    REQUIRE(k.kink().has_value());
    CHECK(*k.kink() == 0.0);
    CHECK(k.theta(0.0) == 0.0);
    CHECK(k.psi(0.0) == 1.0);
    CHECK(k.theta(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(k.theta(-1.0) == -1.0);
    CHECK(k.psi_inv(2.0) == -1.0);
    CHECK(k.psi_inv(1.0) == 0.0);
    CHECK(k.psi_inv(0.25) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("exponential kernel values") {
    const auto k = make_exponential();
    CHECK(k.name() == "exp");
    CHECK(k.smoothness() == Smoothness::c2_everywhere);
    CHECK_FALSE(k.kink().has_value());
    CHECK(k.theta(0.0) == 0.0);
    CHECK(k.psi_inv(2.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(k.dpsi(1.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
    for (double t : {-3.0, -0.5, 0.0, 0.7, 4.0, 30.0}) CHECK(k.d2psi(t) == k.psi(t));
}

TEST_CASE("psi_inv rejects values outside the range of psi") {
    CHECK_THROWS_AS(make_rational().psi_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(make_rational().psi_inv(-1.0), std::domain_error);
    CHECK_THROWS_AS(make_exponential().psi_inv(0.0), std::domain_error);
}

TEST_CASE("theta_r") {
    CHECK(theta_r(make_rational(), 0.0, 0.3) == 0.0);
    CHECK(theta_r(make_exponential(), 1.0, 0.5) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    CHECK(theta_r(make_rational(), -1.0, 1.0) == -1.0);
    CHECK_THROWS_AS(theta_r(make_rational(), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_r(make_exponential(), 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("kernel invariants on sampled points") {
    for (const auto& k : {make_rational(), make_exponential(), make_phi_lambda({3.0, 1.0, 1.0}),
                          make_phi_lambda({1.5, 2.0, 1.0}), make_exponential(2.5)}) {
        CAPTURE(k.name());
        double prev = -INFINITY;
        for (int i = 0; i <= 400; ++i) {
            const double t = -5.0 + i * 0.05;
            const double th = k.theta(t);
            // theta may saturate to exactly 1 in double precision.
            if (prev < 1.0 - 1e-12) CHECK(th > prev);
            else CHECK(th >= prev);
            prev = th;
            if (t < 0.0) CHECK(th < 0.0);
            if (!k.kink() || std::abs(t - *k.kink()) > 1e-12) CHECK(k.dpsi(t) < 0.0);
            const double back = k.psi_inv(k.psi(t));
            CHECK(std::abs(back - t) <= 1e-12 * std::max(1.0, std::abs(t)));
        }
        for (double y : {1e-6, 0.01, 0.3, 0.999, 1.0, 1.001, 2.0, 7.5}) {
            CHECK(std::abs(k.psi(k.psi_inv(y)) - y) <= 1e-12 * y);
        }
    }
    CHECK(make_rational().theta(1e6) > 1.0 - 1e-3);
    CHECK(make_exponential().theta(1e6) > 1.0 - 1e-6);
}

TEST_CASE("rational psi_inv covers both branches against the hand-written inverse") {
    const auto k = make_rational();
    for (int i = 1; i <= 200; ++i) {
        const double y = 0.02 * i;
        CHECK(k.psi_inv(y) == doctest::Approx(static_cast<double>(oracle::rational_psi_inv(y))).epsilon(1e-14));
    }
}

TEST_CASE("exponential kernel dominates the rational kernel on t >= 0") {
    const auto r = make_rational();
    const auto e = make_exponential();
    for (int i = 0; i < 2000; ++i) {
        const double t = uniform(0.0, 50.0, 3, 0, i);
        CHECK(e.theta(t) >= r.theta(t));
        CHECK(e.theta(t) <= 1.0);
    }
    CHECK(r.dominates_rational());
    CHECK(e.dominates_rational());
    CHECK(make_phi_lambda({2.0, 1.0, 1.0}).dominates_rational());
    CHECK(make_phi_lambda({1.5, 1.0, 1.0}).dominates_rational());
    CHECK_FALSE(make_phi_lambda({3.0, 1.0, 1.0}).dominates_rational());
}

TEST_CASE("phi_lambda family") {
    SUBCASE("lambda = 2, c1 = 1 agrees with the rational kernel on t >= 0") {
        const auto p = make_phi_lambda({2.0, 1.0, 1.0});
        const auto r = make_rational();
        for (int i = 0; i <= 500; ++i) {
            const double t = 0.02 * i * i;
            CHECK(std::abs(p.psi(t) - r.psi(t)) <= 1e-14);
            CHECK(std::abs(p.theta(t) - r.theta(t)) <= 1e-14);
        }
    }
    SUBCASE("lambda = 1 is the exponential kernel with rate d") {
        const auto p = make_phi_lambda({1.0, 1.0, 1.0});
        const auto e = make_exponential();
        CHECK(p.family() == KernelFamily::exponential);
        for (double t : {-2.0, 0.0, 0.5, 3.0}) {
            CHECK(p.psi(t) == e.psi(t));
            CHECK(p.dpsi(t) == e.dpsi(t));
        }
        const auto p2 = make_phi_lambda({1.0, 1.0, 2.0});
        CHECK(p2.psi(1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
        CHECK(p2.rate() == 2.0);
    }
    SUBCASE("(psi')^2 = psi psi'' / lambda on the domain") {
        for (double lambda : {1.5, 2.0, 3.0, 5.0}) {
            for (double c1 : {0.5, 1.0, 2.0}) {
                const auto p = make_phi_lambda({lambda, c1, 1.0});
                for (double x : {-0.4 / c1, 0.0, 0.3, 2.0, 10.0, 200.0}) {
                    const double lhs = p.dpsi(x) * p.dpsi(x);
                    const double rhs = p.psi(x) * p.d2psi(x) / lambda;
                    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
                }
            }
        }
        const auto p3 = make_phi_lambda({3.0, 1.0, 1.0});
        CHECK(std::abs(p3.dpsi(2.0) * p3.dpsi(2.0) - p3.psi(2.0) * p3.d2psi(2.0) / 3.0) <= 1e-12);
    }
    SUBCASE("affine continuation keeps theta increasing and C1 below -1/(2 c1)") {
        const auto p = make_phi_lambda({3.0, 1.0, 1.0});
        const double x0 = -0.5;
        CHECK(p.theta(x0 - 1e-9) == doctest::Approx(p.theta(x0 + 1e-9)).epsilon(1e-8));
        CHECK(p.dpsi(x0 - 1e-12) == doctest::Approx(p.dpsi(x0 + 1e-12)).epsilon(1e-8));
        CHECK(p.theta(-50.0) < p.theta(-10.0));
        CHECK(std::isfinite(p.psi(-1e6)));
        CHECK(p.psi_inv(p.psi(-7.0)) == doctest::Approx(-7.0).epsilon(1e-12));
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(make_phi_lambda({0.5, 1.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_phi_lambda({2.0, 0.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_phi_lambda({2.0, -1.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_phi_lambda({1.0, 1.0, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("parse_kernel") {
    CHECK(parse_kernel("rational").name() == "rational");
    CHECK(parse_kernel("exp").name() == "exp");
    CHECK(parse_kernel("phi:3").psi(1.0) == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK(parse_kernel("phi:3:2").psi(1.0) == doctest::Approx(std::pow(3.0, -0.5)));
    CHECK(parse_kernel("phi:1:2").psi(1.0) == doctest::Approx(std::exp(-2.0)));
    for (const char* bad : {"", "gauss", "phi", "phi:", "phi:x", "phi:0.5", "phi:2:-1", "phi:2:1:3"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_kernel(bad), std::invalid_argument);
    }
}

TEST_CASE("c2_branch of the rational kernel continues 1/(t+1) past the kink") {
    const auto& b = make_rational().c2_branch();
    CHECK(b.smoothness() == Smoothness::c2_everywhere);
    CHECK(b.psi(-0.5) == doctest::Approx(2.0));
    CHECK(b.d2psi(-0.5) == doctest::Approx(16.0));
    const auto e = make_exponential();
    CHECK(&e.c2_branch() != nullptr);
    CHECK(e.c2_branch().psi(0.3) == e.psi(0.3));
}

TEST_CASE("check_Ha thresholds") {
    SUBCASE("exponential, a = 0.5: threshold ln2 / (1 - a)") {
        const auto rep = check_Ha(make_exponential(), 0.5, 100.0);
        REQUIRE(rep.holds);
        REQUIRE(rep.holds_from.has_value());
        const double step = std::pow(10.0, 1.0 / 64.0);
        const double exact = 2.0 * std::log(2.0);
        CHECK(*rep.holds_from <= exact * step);
        CHECK(*rep.holds_from >= exact / step);
    }
    SUBCASE("rational, a = 0.25: threshold 1 / (1 - 2a)") {
        const auto rep = check_Ha(make_rational(), 0.25, 100.0);
        REQUIRE(rep.holds);
        const double step = std::pow(10.0, 1.0 / 64.0);
        CHECK(*rep.holds_from <= 2.0 * step);
        CHECK(*rep.holds_from >= 2.0 / step);
    }
    SUBCASE("rational, a >= 1/2 fails arbitrarily far out") {
        for (double a : {0.5, 0.75, 0.9}) {
            const auto rep = check_Ha(make_rational(), a, 1e6);
            CHECK_FALSE(rep.holds);
            REQUIRE(rep.violated_at.has_value());
            CHECK(*rep.violated_at > 1e5);
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(check_Ha(make_rational(), 0.0, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(check_Ha(make_rational(), 1.0, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(check_Ha(make_rational(), 0.3, 0.0), std::invalid_argument);
    }
}

TEST_CASE("custom kernels") {
    const auto w = oracle::wobbly_kernel();
    CHECK(w.name() == "wobbly");
    CHECK(w.family() == KernelFamily::custom);
    CHECK(w.theta(0.5) == doctest::Approx(1.0 - w.psi(0.5)));
    CHECK(w.psi_inv(w.psi(3.0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(&w.c2_branch() != nullptr);
}
