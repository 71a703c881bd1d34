#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rr/errors.hpp"
#include "rr/fixtures.hpp"
#include "rr/numerics.hpp"
#include "rr/pde_engine.hpp"
#include "rr/robust_options.hpp"

using namespace rr;

namespace {

PayoffSpec caplet_put(double accrual, double K)
{
    const double Ki = transformed_strike(accrual, K);
    return payoffs::put(Ki, 1.0 / Ki);
}

} // namespace

TEST_SUITE("pde_engine")
{
    TEST_CASE("constants and affine payoffs are priced exactly")
    {
        const auto m = fixtures::base_market();
        const auto band = fixtures::wide_band();
        const auto c = solve_single_option(m.curve, m.vs, band, 1.0, 1.0, 3.5, payoffs::affine(0.0, 0.7));
        CHECK(c.forward_value == doctest::Approx(0.7).epsilon(1e-12));
        const double x0 = m.curve.forward_price(1.0, 3.5);
        const auto a = solve_single_option(m.curve, m.vs, band, 1.0, 1.0, 3.5, payoffs::affine(2.0, -1.0));
        CHECK(a.forward_value == doctest::Approx(2.0 * x0 - 1.0).epsilon(1e-10));
        const auto lo = solve_lower(m.curve, m.vs, band, 1.0, 1.0, 3.5, payoffs::affine(2.0, -1.0));
        CHECK(lo.forward_value == doctest::Approx(a.forward_value).epsilon(1e-10));
    }

    TEST_CASE("convex payoff: upper is the classical price at sigma upper")
    {
        const auto m = fixtures::base_market();
        const auto s = fixtures::base_schedule();
        const std::vector<double> hi{1.5}, lo{0.5};
        const auto put = caplet_put(0.5, 0.04);
        PDEGrid g;
        g.nx = 400;
        g.nt = 400;
        const auto up = solve_single_option(m.curve, m.vs, fixtures::wide_band(), 1.0, 1.0, 1.5, put, g);
        CHECK(up.price == doctest::Approx(price_caplet_sigma(m.curve, m.vs, hi, 1, s, 0.04)).epsilon(2e-3));
        const auto dn = solve_lower(m.curve, m.vs, fixtures::wide_band(), 1.0, 1.0, 1.5, put, g);
        CHECK(dn.price == doctest::Approx(price_caplet_sigma(m.curve, m.vs, lo, 1, s, 0.04)).epsilon(1e-2));
        CHECK(dn.price < up.price);
    }

    TEST_CASE("hull-white caplet on the linear curve")
    {
        const auto m = fixtures::hull_white_market();
        const auto up = solve_single_option(m.curve, m.vs, fixtures::wide_band(), 1.0, 1.0, 1.5, caplet_put(0.5, 0.04));
        // tests/reference/generate.py
        CHECK(up.price == doctest::Approx(6.7983258960590984e-05).epsilon(2e-3));
    }

    TEST_CASE("explicit and implicit schemes agree; explicit enforces its stability bound")
    {
        const auto m = fixtures::base_market();
        const auto cs = fixtures::capped_spread();
        PDEGrid g;
        g.nx = 200;
        g.nt = 2000;
        g.scheme = PdeScheme::explicit_euler;
        const auto ex = solve_single_option(m.curve, m.vs, fixtures::wide_band(), cs.T, cs.t1, cs.underlying, cs.payoff, g);
        g.scheme = PdeScheme::implicit_policy_iteration;
        const auto im = solve_single_option(m.curve, m.vs, fixtures::wide_band(), cs.T, cs.t1, cs.underlying, cs.payoff, g);
        CHECK(ex.price == doctest::Approx(im.price).epsilon(2e-3));
        g.scheme = PdeScheme::explicit_euler;
        g.nt = 10;
        CHECK_THROWS_AS(
            solve_single_option(m.curve, m.vs, fixtures::wide_band(), cs.T, cs.t1, cs.underlying, cs.payoff, g),
            StabilityError);
    }

    TEST_CASE("sublinearity of the discrete operator")
    {
        const auto m = fixtures::base_market();
        const auto cs = fixtures::capped_spread();
        const auto band = fixtures::wide_band();
        const double u = solve_single_option(m.curve, m.vs, band, 1.0, 1.0, 3.5, cs.payoff).price;
        const double l = solve_lower(m.curve, m.vs, band, 1.0, 1.0, 3.5, cs.payoff).price;
        const double neg = solve_single_option(m.curve, m.vs, band, 1.0, 1.0, 3.5, payoffs::negate(cs.payoff)).price;
        CHECK(l < u);
        CHECK(neg == doctest::Approx(-l).epsilon(1e-12));
        // degenerate band: upper and lower meet
        const auto pt = UncertaintyBand::point({1.0});
        CHECK(solve_single_option(m.curve, m.vs, pt, 1.0, 1.0, 3.5, cs.payoff).price ==
              doctest::Approx(solve_lower(m.curve, m.vs, pt, 1.0, 1.0, 3.5, cs.payoff).price).epsilon(1e-12));
    }

    TEST_CASE("option expiry before the measure date")
    {
        // t1 < T: value of phi(X_{t1}^{T, T_i}) under the T-forward expectation
        const auto m = fixtures::base_market();
        const auto put = payoffs::put(0.96);
        const auto r = solve_single_option(m.curve, m.vs, UncertaintyBand::point({1.0}), 2.0, 1.0, 3.0, put);
        const double x0 = m.curve.forward_price(2.0, 3.0);
        const double sd = std::sqrt(m.vs.factor_variance(0, 0.0, 1.0, 2.0, 3.0));
        CHECK(r.forward_value == doctest::Approx(lognormal_put(x0, 0.96, sd)).epsilon(2e-3));
    }

    TEST_CASE("surface output and validation")
    {
        const auto m = fixtures::base_market();
        const auto path = std::filesystem::temp_directory_path() / "rr_surface_test.csv";
        PDEGrid g;
        g.nx = 11;
        g.nt = 5;
        PdeOptions o;
        o.surface_csv = path;
        solve_single_option(m.curve, m.vs, fixtures::wide_band(), 1.0, 1.0, 1.5, payoffs::put(0.99), g, o);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,x,u");
        std::size_t lines = 0;
        for (std::string l; std::getline(in, l);) ++lines;
        CHECK(lines == 6 * 11);
        std::filesystem::remove(path);

        g.nx = 2;
        CHECK_THROWS_AS(g.validate(), ValidationError);
        CHECK_THROWS_AS(solve_single_option(m.curve, m.vs, fixtures::wide_band(), 1.0, 2.0, 1.5, payoffs::put(0.99)),
                        DomainError);
        CHECK(parse_pde_scheme("explicit") == PdeScheme::explicit_euler);
        CHECK_THROWS_AS(parse_pde_scheme("crank"), ValidationError);
    }
}
