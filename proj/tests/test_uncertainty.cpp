#include <doctest.h>

#include <stdexcept>

#include "rr/errors.hpp"
#include "rr/uncertainty.hpp"

using namespace rr;

TEST_SUITE("uncertainty")
{
    TEST_CASE("band construction")
    {
        const UncertaintyBand b({0.5, 0.8}, {1.5, 1.2});
        CHECK(b.dimension() == 2);
        CHECK(b.interpolate(0.5) == std::vector<double>{1.0, 1.0});
        CHECK(b.contains(std::vector<double>{1.0, 0.8}));
        CHECK_FALSE(b.contains(std::vector<double>{1.6, 1.0}));
        CHECK_FALSE(degenerate(b));
        CHECK(degenerate(UncertaintyBand::point({1.3})));

        const auto s = UncertaintyBand::stress(3, 0.25);
        CHECK(s.lower() == std::vector<double>(3, 0.75));
        CHECK(s.upper() == std::vector<double>(3, 1.25));
        CHECK_THROWS_AS(UncertaintyBand::stress(1, 0.0), ValidationError);
        CHECK_THROWS_AS(UncertaintyBand::stress(1, 1.0), ValidationError);
    }

    TEST_CASE("band validation")
    {
        CHECK_THROWS_AS(UncertaintyBand({}, {}), ValidationError);
        CHECK_THROWS_AS(UncertaintyBand({0.5}, {1.5, 1.0}), ValidationError);
        CHECK_THROWS_AS(UncertaintyBand({1.5}, {0.5}), ValidationError);
        CHECK_THROWS_AS(UncertaintyBand({0.0}, {1.0}), ValidationError);
    }

    TEST_CASE("G switches between the band edges on the sign")
    {
        const UncertaintyBand b({0.5}, {1.5});
        CHECK(g_generator(b, std::vector<double>{2.0}) == doctest::Approx(0.5 * 2.25 * 2.0));
        CHECK(g_generator(b, std::vector<double>{-2.0}) == doctest::Approx(-0.5 * 0.25 * 2.0));
        CHECK(g_generator(b, std::vector<double>{0.0}) == 0.0);
        // sublinear: G(a + c) <= G(a) + G(c)
        const std::vector<double> a{1.0}, c{-3.0}, ac{-2.0};
        CHECK(g_generator(b, ac) <= g_generator(b, a) + g_generator(b, c));
        CHECK_THROWS_AS(g_generator(b, std::vector<double>{1.0, 1.0}), ValidationError);
    }

    TEST_CASE("price bounds invariants")
    {
        CHECK_NOTHROW(PriceBounds::make(1.0, 2.0, false));
        CHECK_THROWS_AS(PriceBounds::make(2.0, 1.0, false), std::logic_error);
        CHECK_THROWS_AS(PriceBounds::make(1.0, 1.1, true), std::logic_error);
        const auto p = PriceBounds::make(1.0, 3.0, false);
        CHECK(p.mid() == 2.0);
        CHECK(p.half_spread() == 1.0);
        const auto n = p.scaled(-2.0);
        CHECK(n.lower == -6.0);
        CHECK(n.upper == -2.0);
    }
}
