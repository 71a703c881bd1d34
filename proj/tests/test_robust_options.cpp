#include <doctest.h>

#include <cmath>

#include "rr/errors.hpp"
#include "rr/fixtures.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/numerics.hpp"
#include "rr/robust_options.hpp"

using namespace rr;

namespace {

const std::vector<double> kHi{1.5};
const std::vector<double> kLo{0.5};

} // namespace

TEST_SUITE("robust_options")
{
    // Frozen values from tests/reference/generate.py: hull-white c = 0.01,
    // kappa = 0.1 on the linear curve, sigma = 1.5, schedule {1, 1.5, 2}, K = 4%.
    TEST_CASE("frozen hull-white reference values")
    {
        const auto m = fixtures::hull_white_market();
        const auto s = fixtures::base_schedule();
        CHECK(price_caplet_sigma(m.curve, m.vs, kHi, 1, s, 0.04) ==
              doctest::Approx(6.7983258960590984e-05).epsilon(1e-9));
        CHECK(price_in_arrears_period_sigma(m.curve, m.vs, kHi, 2, s, 0.04) ==
              doctest::Approx(-0.012932323287159223).epsilon(1e-11));
        CHECK(swaption_sigma_1f(m.curve, m.vs, kHi, s, 0.04) ==
              doctest::Approx(0.00012820238853078738).epsilon(1e-8));
    }

    TEST_CASE("cap bounds come from the band edges")
    {
        const auto m = fixtures::base_market();
        const OptionContract cap{OptionKind::cap, fixtures::base_schedule(), 0.04};
        const auto p = price_cap(m.curve, m.vs, fixtures::wide_band(), cap);
        CHECK_FALSE(p.symmetric);
        CHECK(p.upper == doctest::Approx(price_cap_sigma(m.curve, m.vs, kHi, cap.schedule, 0.04)).epsilon(1e-15));
        CHECK(p.lower == doctest::Approx(price_cap_sigma(m.curve, m.vs, kLo, cap.schedule, 0.04)).epsilon(1e-15));
        CHECK(p.lower < p.upper);
    }

    TEST_CASE("caplet matches direct lognormal quadrature of the put")
    {
        const auto m = fixtures::base_market();
        const auto s = fixtures::base_schedule();
        const double x0 = m.curve.forward_price(1.0, 1.5);
        const double Ki = transformed_strike(0.5, 0.04);
        const double sd = std::sqrt(m.vs.integrated_variance(kHi, 0.0, 1.0, 1.0, 1.5));
        const double q = lognormal_expectation([&](double x) { return std::max(Ki - x, 0.0) / Ki; }, x0, sd,
                                               std::vector<double>{Ki});
        CHECK(price_caplet_sigma(m.curve, m.vs, kHi, 1, s, 0.04) ==
              doctest::Approx(m.curve.bond_price(1.0) * q).epsilon(1e-10));
    }

    TEST_CASE("cap minus floor is the payer swap")
    {
        for (const auto& m : {fixtures::base_market(), fixtures::hull_white_market()}) {
            const auto s = TenorSchedule({1.0, 1.25, 1.5, 1.75, 2.0});
            for (double K : {0.005, 0.01, 0.04, 0.08}) {
                const auto cap = price_cap(m.curve, m.vs, fixtures::wide_band(), {OptionKind::cap, s, K});
                const auto floor = price_floor(m.curve, m.vs, fixtures::wide_band(), {OptionKind::floor, s, K});
                const double swap = swap_value(m.curve, s, K);
                CHECK(cap.upper - floor.upper == doctest::Approx(swap).epsilon(1e-10).scale(1.0));
                CHECK(cap.lower - floor.lower == doctest::Approx(swap).epsilon(1e-10).scale(1.0));
            }
        }
    }

    TEST_CASE("degenerate band collapses and is flagged symmetric")
    {
        const auto m = fixtures::base_market();
        const auto band = UncertaintyBand::point({1.2});
        for (auto kind : {OptionKind::cap, OptionKind::floor, OptionKind::swaption_payer,
                          OptionKind::in_arrears_payer_swap}) {
            const auto p = price_option(m.curve, m.vs, band, {kind, fixtures::base_schedule(), 0.03});
            CHECK(p.symmetric);
            CHECK(std::abs(p.upper - p.lower) <= 1e-9);
        }
    }

    TEST_CASE("one-period swaption is the caplet")
    {
        const auto m = fixtures::hull_white_market();
        const TenorSchedule s({1.0, 1.5});
        CHECK(swaption_sigma_1f(m.curve, m.vs, kHi, s, 0.04) ==
              doctest::Approx(price_caplet_sigma(m.curve, m.vs, kHi, 1, s, 0.04)).epsilon(1e-12));
    }

    TEST_CASE("swaption is bounded by the cap and above the swap")
    {
        const auto m = fixtures::base_market();
        const auto s = TenorSchedule({1.0, 2.0, 3.0, 4.0});
        for (double K : {0.01, 0.02, 0.03}) {
            const double swn = swaption_sigma_1f(m.curve, m.vs, kHi, s, K);
            CHECK(swn <= price_cap_sigma(m.curve, m.vs, kHi, s, K) + 1e-15);
            CHECK(swn >= std::max(swap_value(m.curve, s, K), 0.0) - 1e-15);
        }
    }

    TEST_CASE("monte carlo swaption agrees with the one-factor quadrature")
    {
        const auto m = fixtures::base_market();
        const auto s = fixtures::base_schedule();
        McConfig mc;
        mc.paths = 200000;
        const auto r = swaption_sigma_mc(m.curve, m.vs, kHi, s, 0.04, mc);
        CHECK(std::abs(r.mean - swaption_sigma_1f(m.curve, m.vs, kHi, s, 0.04)) <= 3.0 * r.standard_error);
    }

    TEST_CASE("monte carlo is independent of the thread count")
    {
        const auto m = fixtures::two_factor_market();
        const std::vector<double> sigma{1.2, 0.9};
        McConfig mc;
        mc.paths = 20000;
        mc.threads = 1;
        const auto a = swaption_sigma_mc(m.curve, m.vs, sigma, fixtures::base_schedule(), 0.03, mc);
        mc.threads = 7;
        const auto b = swaption_sigma_mc(m.curve, m.vs, sigma, fixtures::base_schedule(), 0.03, mc);
        CHECK(a.mean == b.mean);
        CHECK(a.standard_error == b.standard_error);
    }

    TEST_CASE("method dispatch")
    {
        const auto two = fixtures::two_factor_market();
        const OptionContract swn{OptionKind::swaption_payer, fixtures::base_schedule(), 0.03};
        const UncertaintyBand band({0.5, 0.5}, {1.5, 1.5});
        CHECK_THROWS_AS(price_swaption(two.curve, two.vs, band, swn, SwaptionMethod::quadrature_1f), UnsupportedError);
        McConfig mc;
        mc.paths = 2000;
        const auto p = price_swaption(two.curve, two.vs, band, swn, SwaptionMethod::automatic, mc);
        CHECK(p.diagnostics.at("method") == "monte-carlo");
        const auto one = fixtures::base_market();
        CHECK(price_swaption(one.curve, one.vs, fixtures::wide_band(), swn).diagnostics.at("method") == "quadrature-1f");
        CHECK(parse_swaption_method("monte-carlo") == SwaptionMethod::monte_carlo);
        CHECK_THROWS_AS(parse_swaption_method("lsm"), ValidationError);
    }

    TEST_CASE("validation")
    {
        const auto m = fixtures::base_market();
        CHECK_THROWS_AS(price_cap(m.curve, m.vs, fixtures::wide_band(), {OptionKind::cap, fixtures::base_schedule(), -0.01}),
                        ValidationError);
        CHECK_THROWS_AS(price_cap(m.curve, m.vs, UncertaintyBand({1.0, 1.0}, {1.0, 1.0}),
                                  {OptionKind::cap, fixtures::base_schedule(), 0.01}),
                        ValidationError);
        CHECK_THROWS_AS(price_caplet_sigma(m.curve, m.vs, kHi, 3, fixtures::base_schedule(), 0.04), DomainError);
    }
}
