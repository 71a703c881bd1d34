#include "rr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rr/errors.hpp"
#include "rr/fixtures.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/oracle.hpp"
#include "rr/pde_engine.hpp"
#include "rr/stream_engine.hpp"

namespace rr {

namespace {

Check relative(std::string name, double value, double reference, double tol)
{
    const double err = std::abs(value / reference - 1.0);
    return {std::move(name), value, reference, err, tol, err <= tol};
}

Check absolute(std::string name, double value, double reference, double tol)
{
    const double err = std::abs(value - reference);
    return {std::move(name), value, reference, err, tol, err <= tol};
}

// value <= reference + tol
Check at_most(std::string name, double value, double reference, double tol = 0.0)
{
    const double err = value - reference;
    return {std::move(name), value, reference, err, tol, err <= tol};
}

Check strictly_below(std::string name, double value, double reference)
{
    const double err = value - reference;
    return {std::move(name), value, reference, err, 0.0, err < 0.0};
}

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

UncertaintyBand band_for(std::size_t d, double lo, double hi)
{
    return UncertaintyBand(std::vector<double>(d, lo), std::vector<double>(d, hi));
}

PayoffSpec sum(const PayoffSpec& a, const PayoffSpec& b)
{
    PayoffSpec p;
    p.evaluator = [a, b](double x) { return a(x) + b(x); };
    p.kinks = a.kinks;
    p.kinks.insert(p.kinks.end(), b.kinks.begin(), b.kinks.end());
    std::sort(p.kinks.begin(), p.kinks.end());
    if (a.growth && b.growth) p.growth = GrowthCertificate{a.growth->C + b.growth->C, std::max(a.growth->m, b.growth->m)};
    p.description = a.description + " + " + b.description;
    return p;
}

// Caplet on the first period of the base schedule written as a put on
// X^{T0,T1}: (1/K_i) (K_i - x)^+ with K_i = 1/(1 + delta K).
PayoffSpec caplet_put()
{
    const double Ki = transformed_strike(0.5, fixtures::kBaseStrike);
    return payoffs::put(Ki, 1.0 / Ki);
}

} // namespace

std::vector<Check> verify_parity()
{
    std::vector<Check> out;
    const std::vector<TenorSchedule> schedules{fixtures::base_schedule(),
                                               TenorSchedule({1.0, 1.25, 1.5, 1.75, 2.0}),
                                               TenorSchedule({5.0, 6.0, 7.0, 8.0, 9.0, 10.0})};
    for (const auto& m : {fixtures::base_market(), fixtures::hull_white_market(), fixtures::two_factor_market()}) {
        for (auto [lo, hi] : {std::pair{0.5, 1.5}, std::pair{0.8, 1.2}}) {
            const auto band = band_for(m.vs.dimension(), lo, hi);
            for (const auto& s : schedules) {
                const OptionContract cap{OptionKind::cap, s, fixtures::kBaseStrike};
                const OptionContract floor{OptionKind::floor, s, fixtures::kBaseStrike};
                const auto c = price_cap(m.curve, m.vs, band, cap);
                const auto f = price_floor(m.curve, m.vs, band, floor);
                const double swap = swap_value(m.curve, s, fixtures::kBaseStrike);
                const auto tag = m.name + " band(" + short_number(lo) + "," + short_number(hi) + ") " +
                                 std::to_string(s.periods()) + "p";
                out.push_back(absolute("upper cap-floor=swap " + tag, c.upper - f.upper, swap, 1e-10));
                out.push_back(absolute("lower cap-floor=swap " + tag, c.lower - f.lower, swap, 1e-10));
            }
        }
    }
    return out;
}

std::vector<Check> verify_sublinearity()
{
    std::vector<Check> out;
    const auto m = fixtures::base_market();
    const auto band = fixtures::wide_band();

    const auto stream = fixtures::mixed_stream(m.curve);
    const auto whole = price_stream(m.curve, m.vs, band, stream);
    const auto legs = price_stream_legs(m.curve, m.vs, band, stream);
    double lo_sum = 0.0;
    double hi_sum = 0.0;
    for (const auto& l : legs) {
        lo_sum += l.lower;
        hi_sum += l.upper;
    }
    out.push_back(strictly_below("stream: sum of leg lowers < stream lower", lo_sum, whole.lower));
    out.push_back(at_most("stream: lower <= upper", whole.lower, whole.upper));
    out.push_back(strictly_below("stream: stream upper < sum of leg uppers", whole.upper, hi_sum));

    const auto cs = fixtures::capped_spread();
    const auto put = payoffs::put(0.97);
    const auto solve = [&](const PayoffSpec& p) {
        return solve_single_option(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, p).price;
    };
    const auto solve_lo = [&](const PayoffSpec& p) {
        return solve_lower(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, p).price;
    };
    const double u1 = solve(put);
    const double u2 = solve(cs.payoff);
    out.push_back(at_most("pde: upper(put + spread) <= upper(put) + upper(spread)", solve(sum(put, cs.payoff)),
                          u1 + u2, 1e-12));
    out.push_back(at_most("pde: lower(put) + lower(spread) <= lower(put + spread)",
                          solve_lo(put) + solve_lo(cs.payoff), solve_lo(sum(put, cs.payoff)), 1e-12));
    out.push_back(relative("pde: upper(2 spread) = 2 upper(spread)", solve(payoffs::scale(cs.payoff, 2.0)),
                           2.0 * u2, 1e-10));
    const double c = 0.01;
    out.push_back(absolute("pde: upper(spread + c) = upper(spread) + c P0(T)",
                           solve(sum(cs.payoff, payoffs::affine(0.0, c))),
                           u2 + c * m.curve.bond_price(cs.T), 1e-10));
    return out;
}

std::vector<Check> verify_oracle(const McConfig& mc)
{
    std::vector<Check> out;
    const auto m = fixtures::base_market();
    const auto cs = fixtures::capped_spread();
    PDEGrid grid;
    for (const auto& band : {fixtures::wide_band(), fixtures::narrow_band()}) {
        const auto tag = " band(" + short_number(band.lower()[0]) + "," + short_number(band.upper()[0]) + ")";
        const double lat = lattice_price(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, cs.payoff, 2000).price;
        const double pde = solve_single_option(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, cs.payoff, grid).price;
        out.push_back(relative("capped spread: pde(400) vs lattice(2000)" + tag, pde, lat, 1e-3));
        double best = -1e300;
        for (int k = 0; k < 5; ++k) {
            const double s = band.lower()[0] + 0.25 * k * (band.upper()[0] - band.lower()[0]);
            best = std::max(best, lattice_price(m.curve, m.vs, UncertaintyBand::point({s}), cs.T, cs.t1,
                                                cs.underlying, cs.payoff, 2000)
                                      .price);
        }
        out.push_back(strictly_below("capped spread: best constant-sigma price < robust upper" + tag, best,
                                     std::min(lat, pde)));
    }

    const auto s = fixtures::base_schedule();
    const std::vector<double> hi{1.5};
    const double black = price_caplet_sigma(m.curve, m.vs, hi, 1, s, fixtures::kBaseStrike);
    const double lat = lattice_price(m.curve, m.vs, UncertaintyBand::point(hi), 1.0, 1.0, 1.5, caplet_put(), 2000).price;
    out.push_back(relative("caplet: degenerate lattice(2000) vs black", lat, black, 5e-4));

    const auto affine = payoffs::affine(2.0, -0.5);
    const auto band = fixtures::wide_band();
    out.push_back(absolute("affine: lattice upper = lattice lower",
                           lattice_price(m.curve, m.vs, band, 1.0, 1.0, 3.5, affine, 500).price,
                           lattice_lower(m.curve, m.vs, band, 1.0, 1.0, 3.5, affine, 500).price, 1e-9));

    // Plain Gauss-Hermite does not see the exercise kink and converges slowly
    // (about 0.5% at 200 nodes); it is a coarse sanity check only.
    const double swn = swaption_sigma_1f(m.curve, m.vs, hi, s, fixtures::kBaseStrike);
    out.push_back(relative("swaption: gauss-hermite(200) vs exercise-boundary quadrature",
                           swaption_sigma_gauss_hermite(m.curve, m.vs, hi, s, fixtures::kBaseStrike), swn, 1e-2));
    const auto mcv = swaption_sigma_mc(m.curve, m.vs, hi, s, fixtures::kBaseStrike, mc);
    out.push_back(absolute("swaption: monte-carlo vs exercise-boundary quadrature (3 se)", mcv.mean, swn,
                           3.0 * mcv.standard_error));
    return out;
}

std::vector<Check> verify_expectations_hypothesis(const McConfig& mc)
{
    std::vector<Check> out;
    for (const auto& m : {fixtures::base_market(), fixtures::two_factor_market()}) {
        const double T = 2.0;
        for (double s : {0.5, 1.0, 1.5}) {
            const std::vector<double> sigma(m.vs.dimension(), s);
            for (auto measure : {EhMeasure::forward, EhMeasure::spot}) {
                auto cfg = mc;
                // Antithetic pairs cancel exactly under the driftless forward
                // measure, which would leave no error estimate.
                cfg.antithetic = measure == EhMeasure::spot;
                const auto r = expectations_hypothesis_check(m.curve, m.vs, sigma, T, cfg, measure);
                const auto name = m.name + (measure == EhMeasure::forward ? " forward" : " spot") +
                                  " sigma=" + short_number(s);
                out.push_back({name, r.mean, r.forward_rate, r.gap, 3.0 * r.standard_error,
                               r.gap <= 3.0 * r.standard_error});
            }
        }
    }
    return out;
}

std::vector<Check> verify_convergence()
{
    std::vector<Check> out;
    const auto m = fixtures::base_market();
    const auto s = fixtures::base_schedule();
    const std::vector<double> hi{1.5};
    const double black = price_caplet_sigma(m.curve, m.vs, hi, 1, s, fixtures::kBaseStrike);
    const auto put = caplet_put();
    std::vector<double> errs;
    std::vector<std::size_t> ns{100, 200, 400, 800};
    for (std::size_t n : ns) {
        PDEGrid g;
        g.nx = n;
        g.nt = n;
        const double p = solve_single_option(m.curve, m.vs, fixtures::wide_band(), 1.0, 1.0, 1.5, put, g).price;
        errs.push_back(std::abs(p / black - 1.0));
        const auto name = "caplet pde " + std::to_string(n) + "x" + std::to_string(n) + " vs black";
        out.push_back({name, p, black, errs.back(), n >= 400 ? 2e-3 : 1.0, n < 400 || errs.back() <= 2e-3});
    }
    for (std::size_t k = 1; k < ns.size(); ++k) {
        const double order = std::log2(errs[k - 1] / errs[k]);
        const auto name = "empirical order " + std::to_string(ns[k - 1]) + "->" + std::to_string(ns[k]);
        out.push_back({name, order, 1.0, 1.0 - order, 0.0, order >= 1.0});
    }
    return out;
}

std::vector<Check> run_suite(std::string_view suite, const McConfig& mc)
{
    if (suite == "parity") return verify_parity();
    if (suite == "sublinearity") return verify_sublinearity();
    if (suite == "oracle") return verify_oracle(mc);
    if (suite == "expectations-hypothesis") return verify_expectations_hypothesis(mc);
    if (suite == "convergence") return verify_convergence();
    throw ValidationError("unknown verify suite '" + std::string(suite) + "'");
}

} // namespace rr
