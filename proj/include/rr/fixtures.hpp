#pragma once

#include <string>
#include <vector>

#include "rr/curve.hpp"
#include "rr/schedule.hpp"
#include "rr/stream_engine.hpp"
#include "rr/uncertainty.hpp"
#include "rr/vol_structure.hpp"

namespace rr::fixtures {

struct Market {
    std::string name;
    DiscountCurve curve;
    VolStructure vs;
};

/// Curves used across the verification suites: flat, linear, stepped
/// (flat-left), humped and zero.
std::vector<std::pair<std::string, DiscountCurve>> curves();

/// Ten curve/schedule combinations for linear-contract checks.
struct CurveSchedule {
    std::string name;
    DiscountCurve curve;
    TenorSchedule schedule;
    double fixed_rate;
};
std::vector<CurveSchedule> linear_set();

/// Flat 2% curve, ho-lee c = 0.01.
Market base_market();
/// Linear curve with a hull-white factor (c = 0.01, kappa = 0.1).
Market hull_white_market();
/// Two factors: ho-lee 0.008 and hull-white (0.006, 0.3).
Market two_factor_market();

/// Schedule {1, 1.5, 2}, strike 4%.
TenorSchedule base_schedule();
inline constexpr double kBaseStrike = 0.04;

UncertaintyBand wide_band();    // (0.5, 1.5)
UncertaintyBand narrow_band();  // (0.8, 1.2)

/// Capped call spread min((x - 0.95)^+, 0.02) on X^{1,3.5} at t1 = 1.
struct CappedSpread {
    double T = 1.0;
    double t1 = 1.0;
    double underlying = 3.5;
    PayoffSpec payoff;
};
CappedSpread capped_spread();

/// Two-period stream on the base market and schedule: an at-the-money put
/// on P_{T0}(T1) paid at T0 (convex) and a capped call spread on
/// P_{T1}(T2) paid at T1 (neither convex nor concave).
CashflowStream mixed_stream(const DiscountCurve& curve);

} // namespace rr::fixtures
