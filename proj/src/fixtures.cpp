#include "rr/fixtures.hpp"

namespace rr::fixtures {

namespace {

constexpr double kHorizon = 30.0;

DiscountCurve linear_curve()
{
    return DiscountCurve(kHorizon, {{0.0, 0.01}, {10.0, 0.03}}, Interpolation::linear);
}

} // namespace

std::vector<std::pair<std::string, DiscountCurve>> curves()
{
    return {
        {"flat-2%", DiscountCurve::flat(0.02, kHorizon)},
        {"linear-1%-3%", linear_curve()},
        {"stepped", DiscountCurve(kHorizon, {{0.0, 0.015}, {2.0, 0.025}, {5.0, 0.03}},
                                  Interpolation::flat_left)},
        {"humped", DiscountCurve(kHorizon, {{0.0, 0.03}, {3.0, 0.02}, {10.0, 0.035}},
                                 Interpolation::linear)},
        {"zero", DiscountCurve::flat(0.0, kHorizon)},
    };
}

std::vector<CurveSchedule> linear_set()
{
    const std::vector<std::pair<std::string, std::vector<double>>> schedules{
        {"1y-2y", {1.0, 2.0}},
        {"semi-1y-2y", {1.0, 1.5, 2.0}},
        {"semi-0.5y-3y", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}},
        {"annual-2y-5y", {2.0, 3.0, 4.0, 5.0}},
        {"quarterly-1y-2y", {1.0, 1.25, 1.5, 1.75, 2.0}},
        {"annual-5y-10y", {5.0, 6.0, 7.0, 8.0, 9.0, 10.0}},
    };
    const std::vector<double> rates{0.05, 0.04, 0.03, 0.025, 0.0, 0.045, 0.02, 0.035, 0.01, 0.06};
    const auto cs = curves();
    std::vector<CurveSchedule> out;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto& [cname, curve] = cs[k % cs.size()];
        const auto& [sname, dates] = schedules[k % schedules.size()];
        out.push_back({cname + "/" + sname, curve, TenorSchedule(dates), rates[k]});
    }
    return out;
}

Market base_market()
{
    return {"flat-2%/ho-lee", DiscountCurve::flat(0.02, kHorizon),
            VolStructure({VolFactor::ho_lee(0.01)})};
}

Market hull_white_market()
{
    return {"linear/hull-white", linear_curve(), VolStructure({VolFactor::hull_white(0.01, 0.1)})};
}

Market two_factor_market()
{
    return {"humped/two-factor",
            DiscountCurve(kHorizon, {{0.0, 0.03}, {3.0, 0.02}, {10.0, 0.035}}, Interpolation::linear),
            VolStructure({VolFactor::ho_lee(0.008), VolFactor::hull_white(0.006, 0.3)})};
}

TenorSchedule base_schedule() { return TenorSchedule({1.0, 1.5, 2.0}); }

UncertaintyBand wide_band() { return UncertaintyBand({0.5}, {1.5}); }
UncertaintyBand narrow_band() { return UncertaintyBand({0.8}, {1.2}); }

CappedSpread capped_spread()
{
    CappedSpread c;
    c.payoff = payoffs::capped_call_spread(0.95, 0.02);
    return c;
}

CashflowStream mixed_stream(const DiscountCurve& curve)
{
    const auto s = base_schedule();
    const double x1 = curve.forward_price(s.date(0), s.date(1));
    const double x2 = curve.forward_price(s.date(1), s.date(2));
    return CashflowStream{
        s,
        {StreamLeg::option(payoffs::put(x1), Convexity::convex),
         StreamLeg::option(payoffs::capped_call_spread(x2 - 0.003, 0.006), Convexity::general)},
        1.0};
}

} // namespace rr::fixtures
