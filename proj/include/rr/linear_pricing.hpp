#pragma once

#include <optional>
#include <string_view>

#include "rr/schedule.hpp"
#include "rr/uncertainty.hpp"

namespace rr {

class DiscountCurve;

enum class LinearKind { fixed_coupon_bond, floating_rate_note, payer_swap };

std::string_view to_string(LinearKind kind);

/// Contracts whose discounted payoff is symmetric: a single price that
/// does not depend on the volatility band.
struct LinearContract {
    LinearKind kind;
    TenorSchedule schedule;
    std::optional<double> fixed_rate;
    double notional = 1.0;

    /// Checks that fixed_rate is present iff the kind needs one, and K >= 0 for bonds.
    void validate() const;
};

PriceBounds price_fixed_coupon_bond(const DiscountCurve& curve, const LinearContract& c);
PriceBounds price_floating_rate_note(const DiscountCurve& curve, const LinearContract& c);
PriceBounds price_swap(const DiscountCurve& curve, const LinearContract& c);
/// Dispatches on c.kind.
PriceBounds price_linear(const DiscountCurve& curve, const LinearContract& c);

/// Par rate (P0(T0) - P0(TN)) / annuity.
double swap_rate(const DiscountCurve& curve, const TenorSchedule& schedule);

/// Unit-notional payer swap value P0(T0) - P0(TN) - K * annuity.
double swap_value(const DiscountCurve& curve, const TenorSchedule& schedule, double fixed_rate);

} // namespace rr
