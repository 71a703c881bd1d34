// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "rr/app.hpp"
#include "rr/fixtures.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/oracle.hpp"
#include "rr/pde_engine.hpp"
#include "rr/robust_options.hpp"
#include "rr/stream_engine.hpp"

using namespace rr;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records a failed sub-check, keeping the first few for the summary line.
struct Tally {
    Outcome out;
    int failures = 0;

    void require(bool ok, const std::string& what)
    {
        if (ok) return;
        out.pass = false;
        if (++failures <= 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel(double v, double ref) { return std::abs(v / ref - 1.0); }

UncertaintyBand band_for(std::size_t d, double lo, double hi)
{
    return UncertaintyBand(std::vector<double>(d, lo), std::vector<double>(d, hi));
}

// Independent closed forms read straight off the discount curve.
double fcb_formula(const DiscountCurve& c, const TenorSchedule& s, double K)
{
    double v = c.bond_price(s.last());
    for (std::size_t i = 1; i <= s.periods(); ++i) v += K * (s.date(i) - s.date(i - 1)) * c.bond_price(s.date(i));
    return v;
}

double frn_formula(const DiscountCurve& c, const TenorSchedule& s) { return c.bond_price(s.first()); }

double swap_formula(const DiscountCurve& c, const TenorSchedule& s, double K)
{
    double v = c.bond_price(s.first()) - c.bond_price(s.last());
    for (std::size_t i = 1; i <= s.periods(); ++i) v -= K * (s.date(i) - s.date(i - 1)) * c.bond_price(s.date(i));
    return v;
}

Outcome linear_exactness()
{
    Tally t;
    double worst = 0.0;
    const std::vector<UncertaintyBand> bands{band_for(1, 0.5, 1.5), band_for(1, 0.9, 1.1), UncertaintyBand::point({1.0})};
    for (const auto& cs : fixtures::linear_set()) {
        const LinearContract fcb{LinearKind::fixed_coupon_bond, cs.schedule, cs.fixed_rate};
        const LinearContract frn{LinearKind::floating_rate_note, cs.schedule, {}};
        const LinearContract swap{LinearKind::payer_swap, cs.schedule, cs.fixed_rate};
        const double refs[] = {fcb_formula(cs.curve, cs.schedule, cs.fixed_rate), frn_formula(cs.curve, cs.schedule),
                               swap_formula(cs.curve, cs.schedule, cs.fixed_rate)};
        const LinearContract* contracts[] = {&fcb, &frn, &swap};
        for (int k = 0; k < 3; ++k) {
            const auto p = price_linear(cs.curve, *contracts[k]);
            // a swap can be worth ~0; fall back to an absolute scale of one unit
            const double err = std::abs(p.lower - refs[k]) / std::max(std::abs(refs[k]), 1e-2);
            worst = std::max(worst, err);
            t.require(err <= 1e-12, cs.name + " " + std::string(to_string(contracts[k]->kind)) + fmt(" rel err %.2e", err));
            t.require(p.lower == p.upper && p.symmetric, cs.name + " bounds differ");
            // The band never enters a linear price: a generic pricing entry
            // point with a band must return the same number.
            for (const auto& b : bands) {
                const Config cfg{cs.curve, VolStructure({VolFactor::ho_lee(0.01)}), b};
                const ContractEntry entry{cs.name, std::string(to_string(contracts[k]->kind)), *contracts[k]};
                const auto q = price_entry(cfg, entry, b, McConfig{});
                t.require(q.lower == p.lower && q.upper == p.upper, cs.name + " band dependence");
            }
        }
    }
    if (t.out.pass) t.out.detail = fmt("30 prices, worst rel err %.2e", worst);
    return t.out;
}

Outcome parity()
{
    Tally t;
    double worst = 0.0;
    std::size_t n = 0;
    const std::vector<TenorSchedule> schedules{fixtures::base_schedule(), TenorSchedule({1.0, 1.25, 1.5, 1.75, 2.0}),
                                               TenorSchedule({0.5, 2.0, 5.0, 10.0})};
    for (const auto& m : {fixtures::base_market(), fixtures::hull_white_market(), fixtures::two_factor_market()}) {
        for (auto [lo, hi] : {std::pair{0.5, 1.5}, std::pair{0.8, 1.2}, std::pair{1.0, 1.0}}) {
            const auto band = band_for(m.vs.dimension(), lo, hi);
            for (const auto& s : schedules) {
                for (double K : {0.01, 0.04, 0.08}) {
                    const auto c = price_cap(m.curve, m.vs, band, {OptionKind::cap, s, K});
                    const auto f = price_floor(m.curve, m.vs, band, {OptionKind::floor, s, K});
                    const double sw = swap_formula(m.curve, s, K);
                    const double e = std::max(std::abs(c.upper - f.upper - sw), std::abs(c.lower - f.lower - sw));
                    worst = std::max(worst, e);
                    ++n;
                    t.require(e <= 1e-10, m.name + fmt(" K=%g err %.2e", K, e));
                }
            }
        }
    }
    if (t.out.pass) t.out.detail = std::to_string(n) + fmt(" cap/floor pairs, worst abs err %.2e", worst);
    return t.out;
}

Outcome convex_reduction()
{
    Tally t;
    const auto m = fixtures::base_market();
    const auto s = fixtures::base_schedule();
    const double black = price_caplet_sigma(m.curve, m.vs, std::vector<double>{1.5}, 1, s, fixtures::kBaseStrike);
    const double Ki = transformed_strike(s.accrual(1), fixtures::kBaseStrike);
    const auto put = payoffs::put(Ki, 1.0 / Ki);
    std::vector<double> errs;
    const std::vector<std::size_t> ns{100, 200, 400, 800};
    for (std::size_t n : ns) {
        PDEGrid g;
        g.nx = n;
        g.nt = n;
        const double p = solve_single_option(m.curve, m.vs, fixtures::wide_band(), s.first(), s.first(), s.date(1), put, g).price;
        errs.push_back(rel(p, black));
    }
    t.require(errs[2] <= 2e-3, fmt("400x400 rel err %.3e > 2e-3", errs[2]));
    std::string orders;
    for (std::size_t k = 1; k < errs.size(); ++k) {
        const double order = std::log2(errs[k - 1] / errs[k]);
        t.require(order >= 1.0, fmt("order %zu->%zu", double(ns[k - 1])) + fmt(" = %.3f", order));
        orders += fmt(" %.2f", order);
    }
    if (t.out.pass) t.out.detail = fmt("400x400 rel err %.2e, orders", errs[2]) + orders;
    return t.out;
}

Outcome oracle_agreement()
{
    Tally t;
    const auto m = fixtures::base_market();
    const auto cs = fixtures::capped_spread();
    std::string detail;
    for (const auto& band : {fixtures::wide_band(), fixtures::narrow_band()}) {
        const double lo = band.lower()[0];
        const double hi = band.upper()[0];
        const double lat = lattice_price(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, cs.payoff, 2000).price;
        const double pde = solve_single_option(m.curve, m.vs, band, cs.T, cs.t1, cs.underlying, cs.payoff).price;
        const double e = rel(pde, lat);
        t.require(e <= 1e-3, fmt("band(%g,%g) pde/lattice rel err %.2e", lo, hi, e));
        double best = -1e300;
        for (int k = 0; k < 5; ++k) {
            const double s = lo + 0.25 * k * (hi - lo);
            best = std::max(best, lattice_price(m.curve, m.vs, UncertaintyBand::point({s}), cs.T, cs.t1,
                                                cs.underlying, cs.payoff, 2000).price);
        }
        t.require(lat > best && pde > best, fmt("band(%g,%g) robust price not above best constant sigma %.6g", lo, hi, best));
        detail += fmt("band(%g,%g): ", lo, hi) + fmt("rel err %.2e, gap over constant-sigma %.2e; ", e, std::min(lat, pde) - best);
    }
    detail.resize(detail.size() - 2);
    if (t.out.pass) t.out.detail = detail;
    return t.out;
}

Outcome sublinearity()
{
    Tally t;
    const auto m = fixtures::base_market();
    const auto band = fixtures::wide_band();
    const auto st = fixtures::mixed_stream(m.curve);
    StreamOptions opt;
    opt.method = StreamMethod::recursion;
    const auto whole = price_stream(m.curve, m.vs, band, st, opt);
    const auto legs = price_stream_legs(m.curve, m.vs, band, st, opt);
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& l : legs) {
        lo += l.lower;
        hi += l.upper;
    }
    t.require(lo < whole.lower, fmt("leg lower sum %.10g !< stream lower %.10g", lo, whole.lower));
    t.require(whole.lower <= whole.upper, "stream lower > upper");
    t.require(whole.upper < hi, fmt("stream upper %.10g !< leg upper sum %.10g", whole.upper, hi));
    if (t.out.pass) t.out.detail = fmt("%.6g < [%.6g, %.6g]", lo, whole.lower, whole.upper) + fmt(" < %.6g", hi);
    return t.out;
}

Outcome scenario_soundness()
{
    Tally t;
    McConfig mc;
    mc.paths = 100000;
    mc.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto s = fixtures::base_schedule();
    const ScenarioControls controls;  // lambda in {0, 0.5, 1}: lower, midpoint, upper
    double worst_se = -1e300;
    for (const auto& m : {fixtures::base_market(), fixtures::hull_white_market()}) {
        const auto band = fixtures::wide_band();
        for (auto kind : {OptionKind::cap, OptionKind::floor, OptionKind::in_arrears_payer_swap, OptionKind::swaption_payer}) {
            const OptionContract c{kind, s, fixtures::kBaseStrike};
            const auto engine = price_option(m.curve, m.vs, band, c);
            const auto r = scenario_sup(m.curve, m.vs, band, scenario_cashflows(c), controls, mc);
            const std::string tag = m.name + " " + std::string(to_string(kind));
            const double z = (r.sup - engine.upper) / r.sup_se;
            worst_se = std::max(worst_se, z);
            t.require(r.sup <= engine.upper + 3.0 * r.sup_se, tag + fmt(" sup exceeds upper by %.2f se", z));
            if (kind == OptionKind::cap || kind == OptionKind::floor) {
                const std::size_t top = r.values.size() - 1;  // lambda = 1
                const double gap = std::abs(r.values[top] - engine.upper);
                t.require(gap <= 3.0 * r.standard_errors[top],
                          tag + fmt(" sigma-upper scenario off by %.2f se", gap / r.standard_errors[top]));
            }
        }
    }
    if (t.out.pass) t.out.detail = fmt("8 contracts, max (sup - upper)/se = %.2f", worst_se);
    return t.out;
}

Outcome expectations_hypothesis()
{
    Tally t;
    McConfig mc;
    mc.paths = 100000;
    mc.antithetic = false;  // pairs cancel exactly under the driftless forward measure
    mc.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto m = fixtures::base_market();
    const auto band = fixtures::wide_band();
    double worst = 0.0;
    for (double s : {band.lower()[0], 1.0, band.upper()[0]}) {
        for (double T : {1.0, 5.0}) {
            const auto r = expectations_hypothesis_check(m.curve, m.vs, std::vector<double>{s}, T, mc, EhMeasure::forward);
            const double z = r.gap / r.standard_error;
            worst = std::max(worst, z);
            t.require(r.gap <= 3.0 * r.standard_error, fmt("sigma=%g T=%g gap %.2f se", s, T, z));
        }
    }
    if (t.out.pass) t.out.detail = fmt("6 checks, worst gap %.2f se", worst);
    return t.out;
}

Outcome degenerate_collapse()
{
    Tally t;
    double worst_gap = 0.0;
    double worst_cf = 0.0;
    const auto check = [&](const std::string& tag, const PriceBounds& p, double closed) {
        const double gap = std::abs(p.upper - p.lower);
        const double cf = std::max(std::abs(p.upper - closed), std::abs(p.lower - closed));
        worst_gap = std::max(worst_gap, gap);
        worst_cf = std::max(worst_cf, cf);
        t.require(gap <= 1e-9, tag + fmt(" bounds differ by %.2e", gap));
        t.require(cf <= 1e-9, tag + fmt(" off closed form by %.2e", cf));
    };
    for (const auto& m : {fixtures::base_market(), fixtures::hull_white_market(), fixtures::two_factor_market()}) {
        for (double s0 : {0.5, 1.0, 1.5}) {
            const std::vector<double> sigma(m.vs.dimension(), s0);
            const auto band = UncertaintyBand::point(sigma);
            for (const auto& s : {fixtures::base_schedule(), TenorSchedule({1.0, 2.0, 3.0, 4.0})}) {
                const double K = fixtures::kBaseStrike;
                const std::string tag = m.name + fmt(" sigma=%g", s0);
                check(tag + " cap", price_cap(m.curve, m.vs, band, {OptionKind::cap, s, K}),
                      price_cap_sigma(m.curve, m.vs, sigma, s, K));
                check(tag + " floor", price_floor(m.curve, m.vs, band, {OptionKind::floor, s, K}),
                      price_floor_sigma(m.curve, m.vs, sigma, s, K));
                check(tag + " in-arrears", price_in_arrears_swap(m.curve, m.vs, band, {OptionKind::in_arrears_payer_swap, s, K}),
                      price_in_arrears_sigma(m.curve, m.vs, sigma, s, K));
                if (m.vs.dimension() == 1) {
                    check(tag + " swaption", price_swaption(m.curve, m.vs, band, {OptionKind::swaption_payer, s, K}),
                          swaption_sigma_1f(m.curve, m.vs, sigma, s, K));
                } else {
                    // Monte Carlo: both bounds come from the same sample, so
                    // they coincide; the closed-form check is the sample itself.
                    McConfig mc;
                    mc.paths = 20000;
                    const auto p = price_swaption(m.curve, m.vs, band, {OptionKind::swaption_payer, s, K},
                                                  SwaptionMethod::monte_carlo, mc);
                    check(tag + " swaption(mc)", p, swaption_sigma_mc(m.curve, m.vs, sigma, s, K, mc).mean);
                }
            }
        }
    }
    // Anchor against scipy quadrature (tests/reference/generate.py): first
    // caplet of the hull-white fixture at sigma 1.5.
    {
        const auto hw = fixtures::hull_white_market();
        const TenorSchedule one({1.0, 1.5});
        const auto p = price_cap(hw.curve, hw.vs, UncertaintyBand::point({1.5}), {OptionKind::cap, one, fixtures::kBaseStrike});
        const double ref = 6.7983258960590984e-05;
        t.require(rel(p.upper, ref) <= 1e-9 && rel(p.lower, ref) <= 1e-9,
                  fmt("hull-white caplet %.12g vs quadrature %.12g", p.upper, ref));
    }
    // Non-linear engines on a point band: the two PDE/lattice bounds coincide.
    const auto m = fixtures::base_market();
    const auto cs = fixtures::capped_spread();
    const auto point = UncertaintyBand::point({1.2});
    const double up = solve_single_option(m.curve, m.vs, point, cs.T, cs.t1, cs.underlying, cs.payoff).price;
    const double dn = solve_lower(m.curve, m.vs, point, cs.T, cs.t1, cs.underlying, cs.payoff).price;
    t.require(std::abs(up - dn) <= 1e-9, fmt("pde point band bounds differ by %.2e", std::abs(up - dn)));
    const auto st = price_stream(m.curve, m.vs, point, fixtures::mixed_stream(m.curve));
    t.require(std::abs(st.upper - st.lower) <= 1e-9, fmt("stream point band bounds differ by %.2e", st.upper - st.lower));
    if (t.out.pass) t.out.detail = fmt("worst bound gap %.2e, worst closed-form gap %.2e", worst_gap, worst_cf);
    return t.out;
}

Outcome determinism()
{
    Tally t;
    const auto cfg = load_config(RR_DATA_DIR "/example.json");
    for (auto format : {OutputFormat::table, OutputFormat::json, OutputFormat::csv}) {
        RunOptions one{format, std::nullopt, 1};
        const auto ref = price_report(cfg, one);
        const auto again = price_report(load_config(RR_DATA_DIR "/example.json"), one);
        t.require(ref == again, "repeat run differs");
        for (unsigned th : {2u, 4u, 8u}) {
            RunOptions opt{format, std::nullopt, th};
            t.require(price_report(cfg, opt) == ref, "--threads " + std::to_string(th) + " differs");
        }
    }
    if (t.out.pass) t.out.detail = "example.json, 3 formats, threads 1/2/4/8, byte-identical";
    return t.out;
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 linear-contract exactness", 1.0, linear_exactness},
        {"2 parity identity", 1.0, parity},
        {"3 convex reduction", 30.0, convex_reduction},
        {"4 oracle agreement", 60.0, oracle_agreement},
        {"5 sublinearity sandwich", 120.0, sublinearity},
        {"6 scenario-sup soundness", 300.0, scenario_soundness},
        {"7 robust expectations hypothesis", 60.0, expectations_hypothesis},
        {"8 degenerate-band collapse", 10.0, degenerate_collapse},
        {"9 determinism", 10.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt(" [runtime over budget %gs]", c.budget_s);
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  %-34s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
