#include <doctest.h>

#include "rr/errors.hpp"
#include "rr/payoff.hpp"

using namespace rr;

TEST_SUITE("payoff")
{
    TEST_CASE("vanilla payoffs and their metadata")
    {
        const auto p = payoffs::put(1.0, 2.0);
        CHECK(p(0.5) == 1.0);
        CHECK(p(1.5) == 0.0);
        CHECK(p.shape == Convexity::convex);
        CHECK(p.kinks == std::vector<double>{1.0});
        CHECK(payoffs::call(1.0, -1.0).shape == Convexity::concave);

        const auto cs = payoffs::capped_call_spread(0.95, 0.02);
        CHECK(cs(0.9) == 0.0);
        CHECK(cs(0.96) == doctest::Approx(0.01));
        CHECK(cs(1.2) == 0.02);
        CHECK(cs.shape == Convexity::general);
        CHECK(cs.kinks.size() == 2);
        CHECK_THROWS_AS(payoffs::capped_call_spread(0.95, 0.0), ValidationError);
    }

    TEST_CASE("piecewise linear detects its curvature")
    {
        const auto v = payoffs::piecewise_linear({{0.0, 1.0}, {1.0, 0.0}, {2.0, 1.0}});
        CHECK(v.shape == Convexity::convex);
        CHECK(v(0.5) == 0.5);
        CHECK(v(3.0) == 2.0);  // linear extrapolation
        const auto w = payoffs::piecewise_linear({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}});
        CHECK(w.shape == Convexity::concave);
        CHECK_THROWS_AS(payoffs::piecewise_linear({{0.0, 0.0}}), ValidationError);
        CHECK_THROWS_AS(payoffs::piecewise_linear({{1.0, 0.0}, {0.0, 1.0}}), ValidationError);
    }

    TEST_CASE("negate and scale flip the shape")
    {
        const auto p = payoffs::put(1.0);
        const auto n = payoffs::negate(p);
        CHECK(n(0.5) == -0.5);
        CHECK(n.shape == Convexity::concave);
        CHECK(payoffs::scale(p, -3.0).shape == Convexity::concave);
        CHECK(payoffs::scale(p, 3.0)(0.5) == 1.5);
    }

    TEST_CASE("growth certificate is required and checked")
    {
        PayoffSpec bare;
        bare.evaluator = [](double x) { return x; };
        CHECK_THROWS_AS(bare.require_certificate(), ValidationError);
        bare.growth = GrowthCertificate{0.0, 1};
        CHECK_THROWS_AS(bare.require_certificate(), ValidationError);
        bare.growth = GrowthCertificate{1.0, 1};
        CHECK_NOTHROW(bare.require_certificate());
    }

    TEST_CASE("chord check")
    {
        CHECK(chord_check(payoffs::put(1.0), Convexity::convex, 0.5, 1.5));
        CHECK(chord_check(payoffs::quadratic(-1.0, 0.0, 0.0), Convexity::concave, 0.5, 1.5));
        // a capped spread tagged convex is caught on a domain straddling the cap
        CHECK_FALSE(chord_check(payoffs::capped_call_spread(0.9, 0.05), Convexity::convex, 0.8, 1.1, 7, 50));
        CHECK(chord_check(payoffs::capped_call_spread(0.9, 0.05), Convexity::general, 0.8, 1.1));
        CHECK(parse_convexity("concave") == Convexity::concave);
        CHECK_THROWS_AS(parse_convexity("wavy"), ValidationError);
    }
}
