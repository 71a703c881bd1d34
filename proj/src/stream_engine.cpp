#include "rr/stream_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rr/curve.hpp"
#include "rr/errors.hpp"
#include "rr/numerics.hpp"
#include "rr/vol_structure.hpp"

namespace rr {

StreamLeg StreamLeg::constant(double amount)
{
    StreamLeg leg;
    leg.kind = LegKind::constant;
    leg.amount = amount;
    return leg;
}

StreamLeg StreamLeg::linear(double a, double b)
{
    StreamLeg leg;
    leg.kind = LegKind::linear;
    leg.a = a;
    leg.b = b;
    return leg;
}

StreamLeg StreamLeg::option(PayoffSpec payoff, Convexity tag)
{
    StreamLeg leg;
    leg.kind = LegKind::option;
    leg.payoff = std::move(payoff);
    leg.tag = tag;
    return leg;
}

void CashflowStream::validate() const
{
    if (legs.size() != schedule.periods()) {
        throw ValidationError("stream has " + std::to_string(legs.size()) + " legs for " +
                              std::to_string(schedule.periods()) + " periods");
    }
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const auto& leg = legs[i];
        if (leg.kind == LegKind::option) leg.payoff.require_certificate();
        if (!std::isfinite(leg.amount) || !std::isfinite(leg.a) || !std::isfinite(leg.b)) {
            throw ValidationError("stream leg " + std::to_string(i + 1) + " has non-finite data");
        }
    }
}

StreamMethod parse_stream_method(std::string_view name)
{
    if (name == "auto" || name == "automatic") return StreamMethod::automatic;
    if (name == "recursion") return StreamMethod::recursion;
    throw ValidationError("unknown stream method '" + std::string(name) + "'");
}

void StateGrid::validate() const
{
    if (nm < 5 || nm % 2 == 0) throw ValidationError("state grid needs an odd nm >= 5");
    if (nr < 3) throw ValidationError("state grid needs nr >= 3");
    if (!(width_sd > 0.0)) throw ValidationError("state grid needs width_sd > 0");
}

namespace {

struct OptionLeg {
    std::size_t period;  // 1-based
    const PayoffSpec* payoff;
    Convexity tag;
};

double symmetric_leg_value(const DiscountCurve& curve, const TenorSchedule& s, std::size_t i,
                           const StreamLeg& leg)
{
    const double a = s.date(i - 1), b = s.date(i);
    switch (leg.kind) {
    case LegKind::constant: return leg.amount * curve.bond_price(b);
    case LegKind::linear:
        return leg.a * (curve.bond_price(a) - curve.bond_price(b)) / (b - a) +
               leg.b * curve.bond_price(b);
    case LegKind::option: break;
    }
    throw std::logic_error("option leg is not symmetric");
}

double leg_stdev(const VolStructure& vs, std::span<const double> sigma, const TenorSchedule& s,
                 std::size_t i)
{
    const double a = s.date(i - 1);
    return std::sqrt(vs.integrated_variance(sigma, 0.0, a, a, s.date(i)));
}

// P0(T_{i-1}) E[phi(X)] with X lognormal around P0(T_i)/P0(T_{i-1}).
double classical_leg_value(const DiscountCurve& curve, const VolStructure& vs,
                           std::span<const double> sigma, const TenorSchedule& s, std::size_t i,
                           const PayoffSpec& phi)
{
    const double a = s.date(i - 1);
    return curve.bond_price(a) * lognormal_expectation(phi.evaluator, curve.forward_price(a, s.date(i)),
                                                       leg_stdev(vs, sigma, s, i), phi.kinks);
}

// Value slice w(z) of a later leg, interpolated on the pde grid and
// extrapolated linearly beyond it.
struct Slice {
    std::vector<double> x, u;
    const PayoffSpec* fallback = nullptr;
    double sign = 1.0;

    double operator()(double z) const
    {
        if (x.size() < 3) return sign * (*fallback)(z);
        if (z <= x.front() || z >= x.back()) return interp_linear(x, u, z);
        return interp_quadratic(x, u, z);
    }
};

// Upper value E[F(M_S, R_S)] of the two-state problem
//   u_s + sup_{q in [q_lo, q_hi]} q (u_MM / 2 + u_R) = 0
// by an explicit monotone scheme (central in M, upwind in R).
template <class F>
double solve_state_problem(F&& terminal, double S, double q_lo, double q_hi, const StateGrid& g,
                           Diagnostics& diag)
{
    const double A = g.width_sd * std::sqrt(q_hi * S);
    const double r_max = 1.25 * q_hi * S;
    const std::size_t nm = g.nm, nr = g.nr;
    const double dm = 2.0 * A / static_cast<double>(nm - 1);
    const double dr = r_max / static_cast<double>(nr - 1);
    const double ds_max = 1.0 / (q_hi * (1.0 / (dm * dm) + 1.0 / dr));
    const auto steps = static_cast<std::size_t>(std::ceil(S / ds_max));
    const double ds = S / static_cast<double>(steps);
    diag["state_steps"] = std::to_string(steps);

    std::vector<double> u(nm * nr), next(nm * nr);
    for (std::size_t i = 0; i < nm; ++i) {
        const double m = -A + dm * static_cast<double>(i);
        for (std::size_t j = 0; j < nr; ++j) u[i * nr + j] = terminal(m, dr * static_cast<double>(j));
    }
    next = u;  // M boundaries keep the terminal values
    const double half_inv_dm2 = 0.5 / (dm * dm);
    const double inv_dr = 1.0 / dr;
    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t i = 1; i + 1 < nm; ++i) {
            const double* lo = &u[(i - 1) * nr];
            const double* mid = &u[i * nr];
            const double* hi = &u[(i + 1) * nr];
            double* out = &next[i * nr];
            for (std::size_t j = 0; j < nr; ++j) {
                const double drift = j + 1 < nr ? (mid[j + 1] - mid[j]) * inv_dr : 0.0;
                const double L = (hi[j] - 2.0 * mid[j] + lo[j]) * half_inv_dm2 + drift;
                out[j] = mid[j] + ds * (L > 0.0 ? q_hi : q_lo) * L;
            }
        }
        u.swap(next);
    }
    return u[(nm / 2) * nr];
}

// Bounds (lower, upper) of phi_i(P_{T_{i-1}}(T_i)) paid at T_{i-1} plus
// phi_k(P_{T_{k-1}}(T_k)) paid at T_{k-1}, i < k.
std::pair<double, double> two_leg_bounds(const DiscountCurve& curve, const VolStructure& vs,
                                         const UncertaintyBand& band, const TenorSchedule& s,
                                         const OptionLeg& first, const OptionLeg& second,
                                         const StreamOptions& opt, Diagnostics& diag)
{
    if (vs.dimension() != 1 || !vs.factor(0).separable()) {
        throw UnsupportedError(
            "stream recursion with two option legs needs a one-factor ho-lee or hull-white "
            "structure");
    }
    opt.state.validate();
    const auto& f = vs.factor(0);
    const double ta = s.date(first.period - 1);
    const double ti = s.date(first.period);
    const double tk1 = s.date(second.period - 1);
    const double tk = s.date(second.period);

    const double S = f.separable_clock(0.0, ta);
    const double a_i = f.separable_alpha(ta, ti), x_i = curve.forward_price(ta, ti);
    const double a_p = f.separable_alpha(ta, tk1), x_p = curve.forward_price(ta, tk1);
    const double a_k = f.separable_alpha(ta, tk), x_k = curve.forward_price(ta, tk);
    const double q_lo = band.lower()[0] * band.lower()[0];
    const double q_hi = band.upper()[0] * band.upper()[0];

    double out[2];
    for (int side = 0; side < 2; ++side) {
        const double sign = side == 0 ? 1.0 : -1.0;  // upper, then -lower
        const PayoffSpec psi_k = sign > 0 ? *second.payoff : payoffs::negate(*second.payoff);
        PdeOptions po;
        po.t_start = ta;
        const auto inner = solve_single_option(curve, vs, band, tk1, tk1, tk, psi_k, opt.grid, po);
        const Slice w{inner.x, inner.u, second.payoff, sign};
        const PayoffSpec& phi_i = *first.payoff;
        const auto terminal = [&](double m, double r) {
            const double xi = x_i * std::exp(-a_i * m - 0.5 * a_i * a_i * r);
            const double p = x_p * std::exp(-a_p * m - 0.5 * a_p * a_p * r);
            const double pk = x_k * std::exp(-a_k * m - 0.5 * a_k * a_k * r);
            return sign * phi_i(xi) + p * w(pk / p);
        };
        const double v = S > 0.0 ? solve_state_problem(terminal, S, q_lo, q_hi, opt.state, diag)
                                 : terminal(0.0, 0.0);
        out[side] = sign * curve.bond_price(ta) * v;
    }
    return {out[1], out[0]};
}

std::pair<double, double> single_leg_pde_bounds(const DiscountCurve& curve, const VolStructure& vs,
                                                const UncertaintyBand& band,
                                                const TenorSchedule& s, const OptionLeg& leg,
                                                const PDEGrid& grid)
{
    const double a = s.date(leg.period - 1), b = s.date(leg.period);
    const auto hi = solve_single_option(curve, vs, band, a, a, b, *leg.payoff, grid);
    const auto lo = solve_lower(curve, vs, band, a, a, b, *leg.payoff, grid);
    return {lo.price, hi.price};
}

std::pair<double, double> decoupled_bounds(const DiscountCurve& curve, const VolStructure& vs,
                                           const UncertaintyBand& band, const TenorSchedule& s,
                                           const OptionLeg& leg)
{
    const double at_hi = classical_leg_value(curve, vs, band.upper(), s, leg.period, *leg.payoff);
    const double at_lo = classical_leg_value(curve, vs, band.lower(), s, leg.period, *leg.payoff);
    return leg.tag == Convexity::concave ? std::pair{at_hi, at_lo} : std::pair{at_lo, at_hi};
}

std::vector<OptionLeg> collect_option_legs(const DiscountCurve& curve, const VolStructure& vs,
                                           const UncertaintyBand& band,
                                           const CashflowStream& stream, Diagnostics& diag)
{
    std::vector<OptionLeg> out;
    const auto& s = stream.schedule;
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        const auto& leg = stream.legs[i - 1];
        if (leg.kind != LegKind::option) continue;
        OptionLeg o{i, &leg.payoff, leg.tag};
        if (o.tag != Convexity::general) {
            const double x0 = curve.forward_price(s.date(i - 1), s.date(i));
            const double v = std::max(leg_stdev(vs, band.upper(), s, i), 1e-4);
            if (!chord_check(leg.payoff, o.tag, x0 * std::exp(-6.0 * v), x0 * std::exp(6.0 * v))) {
                diag["warning_leg_" + std::to_string(i)] =
                    "declared " + std::string(to_string(o.tag)) +
                    " contradicted by chord test; treated as general";
                o.tag = Convexity::general;
            }
        }
        out.push_back(o);
    }
    return out;
}

void require_dims(const VolStructure& vs, const UncertaintyBand& band)
{
    if (vs.dimension() != band.dimension()) {
        throw ValidationError("band dimension " + std::to_string(band.dimension()) +
                              " does not match vol structure dimension " +
                              std::to_string(vs.dimension()));
    }
}

} // namespace

PriceBounds price_stream(const DiscountCurve& curve, const VolStructure& vs,
                         const UncertaintyBand& band, const CashflowStream& stream,
                         const StreamOptions& options)
{
    stream.validate();
    require_dims(vs, band);
    const auto& s = stream.schedule;
    s.check_horizon(curve);

    double symmetric = 0.0;
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        const auto& leg = stream.legs[i - 1];
        if (leg.kind != LegKind::option) symmetric += symmetric_leg_value(curve, s, i, leg);
    }
    Diagnostics diag;
    const auto legs = collect_option_legs(curve, vs, band, stream, diag);
    const double N = stream.notional;

    if (legs.empty()) {
        diag["method"] = "symmetric closed form";
        return PriceBounds::make(N * symmetric, N * symmetric, true, std::move(diag));
    }

    double lower = 0.0, upper = 0.0;
    const bool forced = options.method == StreamMethod::recursion;
    const bool same_tag =
        legs.front().tag != Convexity::general &&
        std::all_of(legs.begin(), legs.end(), [&](const auto& l) { return l.tag == legs.front().tag; });

    if (!forced && degenerate(band)) {
        diag["method"] = "classical (degenerate band)";
        for (const auto& l : legs) {
            const double v = classical_leg_value(curve, vs, band.upper(), s, l.period, *l.payoff);
            lower += v;
            upper += v;
        }
    } else if (!forced && same_tag) {
        diag["method"] = "convex decoupling";
        for (const auto& l : legs) {
            const auto [lo, hi] = decoupled_bounds(curve, vs, band, s, l);
            lower += lo;
            upper += hi;
        }
    } else if (legs.size() == 1) {
        diag["method"] = "recursion (pde)";
        std::tie(lower, upper) = single_leg_pde_bounds(curve, vs, band, s, legs[0], options.grid);
    } else if (legs.size() == 2) {
        diag["method"] = "recursion (pde + two-state)";
        std::tie(lower, upper) =
            two_leg_bounds(curve, vs, band, s, legs[0], legs[1], options, diag);
    } else {
        throw UnsupportedError("stream recursion supports at most two option legs (" +
                               std::to_string(legs.size()) +
                               " given); larger mixed streams are a high-dimensional problem");
    }
    if (upper < lower) {
        // Both bounds come from separate discretisations; a crossing can
        // only be grid error on a (nearly) symmetric stream.
        diag["note"] = "bounds crossed by " + diag_number(lower - upper) + "; reported at midpoint";
        lower = upper = 0.5 * (lower + upper);
    }
    return PriceBounds::make(N * (symmetric + lower), N * (symmetric + upper), degenerate(band),
                             std::move(diag));
}

std::vector<PriceBounds> price_stream_legs(const DiscountCurve& curve, const VolStructure& vs,
                                           const UncertaintyBand& band,
                                           const CashflowStream& stream,
                                           const StreamOptions& options)
{
    stream.validate();
    std::vector<PriceBounds> out;
    const auto& s = stream.schedule;
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        std::vector<double> dates{s.date(i - 1), s.date(i)};
        CashflowStream single{TenorSchedule(dates), {stream.legs[i - 1]}, stream.notional};
        auto opt = options;
        opt.method = StreamMethod::automatic;
        out.push_back(price_stream(curve, vs, band, single, opt));
    }
    return out;
}

std::vector<ScenarioCashflow> scenario_cashflows(const CashflowStream& stream)
{
    stream.validate();
    std::vector<ScenarioCashflow> out;
    const auto& s = stream.schedule;
    const double N = stream.notional;
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        const auto& leg = stream.legs[i - 1];
        const double a = s.date(i - 1), b = s.date(i);
        switch (leg.kind) {
        case LegKind::constant: {
            const double c = leg.amount;
            out.push_back({b, b, {}, [=](const BondState&) { return N * c; }});
            break;
        }
        case LegKind::linear: {
            const double la = leg.a, lb = leg.b, delta = b - a;
            out.push_back({a, b, {b}, [=](const BondState& st) {
                               return N * (la * (1.0 / st.bond(b) - 1.0) / delta + lb);
                           }});
            break;
        }
        case LegKind::option: {
            const auto phi = leg.payoff.evaluator;
            out.push_back({a, a, {b}, [=](const BondState& st) { return N * phi(st.bond(b)); }});
            break;
        }
        }
    }
    return out;
}

} // namespace rr
