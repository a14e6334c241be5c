#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "subaudit/error.hpp"
#include "subaudit/fuzzy/membership.hpp"

using namespace subaudit::fuzzy;

TEST_CASE("membership examples") {
    const auto low = MembershipFunction::trapezoid(0, 0, 0.10, 0.35);
    CHECK(mf_eval(low, 0.05) == 1.0);
    CHECK(std::abs(mf_eval(low, 0.225) - 0.5) <= 1e-12);
    const auto falling = MembershipFunction::trapezoid(-1, -1, -0.03, -0.01);
    CHECK(std::abs(mf_eval(falling, -0.02) - 0.5) <= 1e-12);
    const auto yes = MembershipFunction::trapezoid(0.5, 1, 1, 1.5);
    CHECK(mf_eval(yes, 1.0) == 1.0);
    CHECK(mf_eval(yes, 0.75) == 0.5);
    CHECK(mf_eval(yes, 0.0) == 0.0);
    CHECK(mf_eval(yes, 0.5) == 0.0);
    const auto tri = MembershipFunction::triangle(-10, 0, 10);
    CHECK(tri(0.0) == 1.0);
    CHECK(tri(-5.0) == 0.5);
    CHECK(tri(5.0) == 0.5);
    CHECK(tri(10.0) == 0.0);
    CHECK(tri(42.0) == 0.0);
}

TEST_CASE("shoulders: degenerate edges give a plateau at the boundary") {
    const auto left = MembershipFunction::trapezoid(0, 0, 35, 45);
    CHECK(left(0.0) == 1.0);
    CHECK(left(-1.0) == 0.0);
    CHECK(left(40.0) == 0.5);
    const auto right = MembershipFunction::trapezoid(70, 80, 100, 100);
    CHECK(right(100.0) == 1.0);
    CHECK(right(75.0) == 0.5);
    CHECK(right(100.5) == 0.0);
}

TEST_CASE("shape bookkeeping") {
    const auto tri = MembershipFunction::triangle(0.3, 0.5, 0.7);
    CHECK(tri.shape() == MembershipFunction::Shape::Triangle);
    CHECK(tri.parameters() == std::vector<double>{0.3, 0.5, 0.7});
    CHECK(tri.ordered());
    CHECK_FALSE(MembershipFunction::triangle(0.7, 0.5, 0.3).ordered());
    CHECK(to_string(MembershipFunction::Shape::Trapezoid) == "trapezoid");
}

TEST_CASE("membership is bounded, continuous and piecewise linear") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto mf = oracle::random_mf(rng, -2.0, 2.0, 0.05);
        const auto& p = mf.corners();
        for (int k = 0; k < 50; ++k) {
            const double x = u(rng);
            const double y = mf(x);
            CHECK((y >= 0.0 && y <= 1.0));
            CHECK(y == doctest::Approx(oracle::trapezoid(p, x)).epsilon(1e-12));
            // continuity: small steps produce small changes, bounded by the steepest slope
            const double slope = std::max(p[1] > p[0] ? 1.0 / (p[1] - p[0]) : 0.0, p[3] > p[2] ? 1.0 / (p[3] - p[2]) : 0.0);
            CHECK(std::abs(mf(x + 1e-7) - y) <= slope * 1e-7 + 1e-12);
        }
        // linear between corners: midpoint of each edge is the average of its ends
        if (p[1] > p[0]) CHECK(mf(0.5 * (p[0] + p[1])) == doctest::Approx(0.5).epsilon(1e-12));
        if (p[3] > p[2]) CHECK(mf(0.5 * (p[2] + p[3])) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("universe grid") {
    Universe u{-100, 100, 2001};
    const auto g = u.grid();
    REQUIRE(g.size() == 2001);
    CHECK(g.front() == -100.0);
    CHECK(g.back() == 100.0);
    CHECK(g[1000] == doctest::Approx(0.0));
    CHECK(u.step() == doctest::Approx(0.1));
    CHECK(u.clamp(150.0) == 100.0);
    CHECK_THROWS_AS((Universe{1, 0, 10}.validate()), subaudit::DomainError);
    CHECK_THROWS_AS((Universe{0, 1, 2}.validate()), subaudit::DomainError);
}
