#pragma once

#include <string_view>
#include <vector>

#include "rr/oracle.hpp"
#include "rr/payoff.hpp"
#include "rr/pde_engine.hpp"
#include "rr/schedule.hpp"
#include "rr/uncertainty.hpp"

namespace rr {

class DiscountCurve;
class VolStructure;

enum class LegKind { constant, linear, option };

/// Cashflow of period i (1-based) of a stream:
///  - constant: `amount` paid at T_i;
///  - linear: a * L_{T_{i-1}}(T_i) + b paid at T_i;
///  - option: phi(P_{T_{i-1}}(T_i)) paid at T_{i-1}.
struct StreamLeg {
    LegKind kind = LegKind::constant;
    double amount = 0.0;
    double a = 0.0;
    double b = 0.0;
    PayoffSpec payoff;
    Convexity tag = Convexity::general;

    static StreamLeg constant(double amount);
    static StreamLeg linear(double a, double b);
    static StreamLeg option(PayoffSpec payoff, Convexity tag);
};

struct CashflowStream {
    TenorSchedule schedule;
    std::vector<StreamLeg> legs;  // one per period
    double notional = 1.0;

    void validate() const;
};

enum class StreamMethod {
    automatic,  // symmetric shortcut, convex decoupling, else recursion
    recursion   // always solve the backward recursion for option legs
};

StreamMethod parse_stream_method(std::string_view name);

/// Grid of the two-state recursion (M, R) = (int g dB, int g^2 d<B>).
struct StateGrid {
    std::size_t nm = 241;    // odd so that M = 0 is a node
    std::size_t nr = 121;
    double width_sd = 6.0;

    void validate() const;
};

struct StreamOptions {
    StreamMethod method = StreamMethod::automatic;
    PDEGrid grid;
    StateGrid state;
};

/// Robust bounds of the stream. Symmetric legs are priced in closed form
/// and added to both bounds; option legs go through the convex decoupling
/// when all tags agree and through the backward recursion otherwise (at
/// most two option legs, one-factor separable structures).
PriceBounds price_stream(const DiscountCurve& curve, const VolStructure& vs,
                         const UncertaintyBand& band, const CashflowStream& stream,
                         const StreamOptions& options = {});

/// Bounds of each leg priced on its own (the terms of the subadditivity
/// sandwich), in period order.
std::vector<PriceBounds> price_stream_legs(const DiscountCurve& curve, const VolStructure& vs,
                                           const UncertaintyBand& band,
                                           const CashflowStream& stream,
                                           const StreamOptions& options = {});

std::vector<ScenarioCashflow> scenario_cashflows(const CashflowStream& stream);

} // namespace rr
