#include "rr/linear_pricing.hpp"

#include <string>

#include "rr/curve.hpp"
#include "rr/errors.hpp"

namespace rr {

std::string_view to_string(LinearKind kind)
{
    switch (kind) {
    case LinearKind::fixed_coupon_bond: return "fixed-coupon-bond";
    case LinearKind::floating_rate_note: return "floating-rate-note";
    case LinearKind::payer_swap: return "payer-swap";
    }
    return "?";
}

void LinearContract::validate() const
{
    const bool needs_rate = kind != LinearKind::floating_rate_note;
    if (needs_rate && !fixed_rate) {
        throw ValidationError(std::string(to_string(kind)) + " requires fixed_rate");
    }
    if (!needs_rate && fixed_rate) {
        throw ValidationError("floating-rate-note does not take fixed_rate");
    }
    if (kind == LinearKind::fixed_coupon_bond && *fixed_rate < 0.0) {
        throw ValidationError("fixed-coupon-bond requires fixed_rate >= 0");
    }
}

namespace {

void require_kind(const LinearContract& c, LinearKind kind)
{
    if (c.kind != kind) {
        throw ValidationError("expected " + std::string(to_string(kind)) + ", got " +
                              std::string(to_string(c.kind)));
    }
    c.validate();
}

Diagnostics closed_form_diag()
{
    return {{"method", "closed-form"}};
}

} // namespace

double swap_value(const DiscountCurve& curve, const TenorSchedule& schedule, double fixed_rate)
{
    schedule.check_horizon(curve);
    return curve.bond_price(schedule.first()) - curve.bond_price(schedule.last()) -
           fixed_rate * annuity(curve, schedule);
}

PriceBounds price_fixed_coupon_bond(const DiscountCurve& curve, const LinearContract& c)
{
    require_kind(c, LinearKind::fixed_coupon_bond);
    c.schedule.check_horizon(curve);
    const double price =
        curve.bond_price(c.schedule.last()) + *c.fixed_rate * annuity(curve, c.schedule);
    return PriceBounds::single(c.notional * price, closed_form_diag());
}

PriceBounds price_floating_rate_note(const DiscountCurve& curve, const LinearContract& c)
{
    require_kind(c, LinearKind::floating_rate_note);
    c.schedule.check_horizon(curve);
    return PriceBounds::single(c.notional * curve.bond_price(c.schedule.first()),
                               closed_form_diag());
}

PriceBounds price_swap(const DiscountCurve& curve, const LinearContract& c)
{
    require_kind(c, LinearKind::payer_swap);
    return PriceBounds::single(c.notional * swap_value(curve, c.schedule, *c.fixed_rate),
                               closed_form_diag());
}

PriceBounds price_linear(const DiscountCurve& curve, const LinearContract& c)
{
    switch (c.kind) {
    case LinearKind::fixed_coupon_bond: return price_fixed_coupon_bond(curve, c);
    case LinearKind::floating_rate_note: return price_floating_rate_note(curve, c);
    case LinearKind::payer_swap: return price_swap(curve, c);
    }
    throw ValidationError("unknown linear contract kind");
}

double swap_rate(const DiscountCurve& curve, const TenorSchedule& schedule)
{
    schedule.check_horizon(curve);
    const double a = annuity(curve, schedule);
    if (!(a > 0.0)) throw DomainError("degenerate schedule: zero annuity");
    return (curve.bond_price(schedule.first()) - curve.bond_price(schedule.last())) / a;
}

} // namespace rr
