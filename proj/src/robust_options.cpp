#include "rr/robust_options.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "rr/curve.hpp"
#include "rr/errors.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/parallel.hpp"
#include "rr/random.hpp"
#include "rr/vol_structure.hpp"

namespace rr {

std::string_view to_string(OptionKind kind)
{
    switch (kind) {
    case OptionKind::cap: return "cap";
    case OptionKind::floor: return "floor";
    case OptionKind::swaption_payer: return "swaption-payer";
    case OptionKind::in_arrears_payer_swap: return "in-arrears-payer-swap";
    }
    return "?";
}

void OptionContract::validate() const
{
    if (!(strike_rate > 0.0) || !std::isfinite(strike_rate)) {
        throw ValidationError(std::string(to_string(kind)) + " requires strike_rate > 0");
    }
}

SwaptionMethod parse_swaption_method(std::string_view name)
{
    if (name == "auto" || name == "automatic") return SwaptionMethod::automatic;
    if (name == "quadrature-1f") return SwaptionMethod::quadrature_1f;
    if (name == "monte-carlo") return SwaptionMethod::monte_carlo;
    throw ValidationError("unknown swaption method '" + std::string(name) + "'");
}

std::string_view to_string(SwaptionMethod m)
{
    switch (m) {
    case SwaptionMethod::automatic: return "auto";
    case SwaptionMethod::quadrature_1f: return "quadrature-1f";
    case SwaptionMethod::monte_carlo: return "monte-carlo";
    }
    return "?";
}

double transformed_strike(double accrual, double strike_rate)
{
    return 1.0 / (1.0 + accrual * strike_rate);
}

namespace {

void check_period(const TenorSchedule& s, std::size_t i)
{
    if (i < 1 || i > s.periods()) {
        throw DomainError("period index " + std::to_string(i) + " outside [1, " +
                          std::to_string(s.periods()) + "]");
    }
}

struct PeriodInputs {
    double discount;  // P0(T_{i-1})
    double forward;   // P0(T_i) / P0(T_{i-1})
    double strike;    // K_i
    double stdev;
};

PeriodInputs period_inputs(const DiscountCurve& curve, const VolStructure& vs,
                           std::span<const double> sigma, std::size_t i,
                           const TenorSchedule& s, double K)
{
    check_period(s, i);
    s.check_horizon(curve);
    const double t0 = s.date(i - 1);
    const double t1 = s.date(i);
    const double v2 = vs.integrated_variance(sigma, 0.0, t0, t0, t1);
    return {curve.bond_price(t0), curve.forward_price(t0, t1), transformed_strike(t1 - t0, K),
            std::sqrt(v2)};
}

template <class F>
double sum_periods(const TenorSchedule& s, F&& f)
{
    double acc = 0.0;
    for (std::size_t i = 1; i <= s.periods(); ++i) acc += f(i);
    return acc;
}

void require_kind(const OptionContract& c, OptionKind kind)
{
    if (c.kind != kind) {
        throw ValidationError("expected " + std::string(to_string(kind)) + ", got " +
                              std::string(to_string(c.kind)));
    }
    c.validate();
}

void require_dims(const VolStructure& vs, const UncertaintyBand& band)
{
    if (vs.dimension() != band.dimension()) {
        throw ValidationError("band dimension " + std::to_string(band.dimension()) +
                              " does not match vol structure dimension " +
                              std::to_string(vs.dimension()));
    }
}

PriceBounds bounds_from(const UncertaintyBand& band, double lower, double upper, double notional,
                        Diagnostics diag)
{
    return PriceBounds::make(notional * lower, notional * upper, degenerate(band),
                             std::move(diag));
}

// Swaption payoff 1 - sum_i c_i x_i exp(-w_i Z - w_i^2 / 2) on one driver.
struct OneFactorSwaption {
    double discount = 1.0;     // P0(T0)
    std::vector<double> cx;    // c_i x_i
    std::vector<double> w;     // loadings on Z, >= 0

    double payoff(double z) const
    {
        double acc = 1.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc -= cx[i] * std::exp(-w[i] * z - 0.5 * w[i] * w[i]);
        return acc;
    }
};

struct SwaptionLegs {
    double discount;
    std::vector<double> cx;
    std::vector<double> maturities;
};

SwaptionLegs swaption_legs(const DiscountCurve& curve, const TenorSchedule& s, double K)
{
    s.check_horizon(curve);
    const double T0 = s.first();
    SwaptionLegs legs{curve.bond_price(T0), {}, {}};
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        double c = s.accrual(i) * K;
        if (i == s.periods()) c += 1.0;
        legs.cx.push_back(c * curve.forward_price(T0, s.date(i)));
        legs.maturities.push_back(s.date(i));
    }
    return legs;
}

std::vector<double> swaption_covariance(const VolStructure& vs, std::span<const double> sigma,
                                        const SwaptionLegs& legs, double T0)
{
    const std::size_t n = legs.maturities.size();
    std::vector<double> cov(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k <= i; ++k) {
            const double v = vs.integrated_covariance(sigma, 0.0, T0, T0, legs.maturities[i], T0,
                                                      legs.maturities[k]);
            cov[i * n + k] = v;
            cov[k * n + i] = v;
        }
    }
    return cov;
}

OneFactorSwaption one_factor(const DiscountCurve& curve, const VolStructure& vs,
                             std::span<const double> sigma, const TenorSchedule& s, double K)
{
    if (vs.dimension() != 1) {
        throw UnsupportedError("quadrature-1f requires a one-factor vol structure (d = " +
                               std::to_string(vs.dimension()) + ")");
    }
    auto legs = swaption_legs(curve, s, K);
    const std::size_t n = legs.cx.size();
    const auto cov = swaption_covariance(vs, sigma, legs, s.first());
    OneFactorSwaption sw{legs.discount, legs.cx, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) sw.w[i] = std::sqrt(std::max(cov[i * n + i], 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            const double prod = sw.w[i] * sw.w[k];
            if (std::abs(cov[i * n + k] - prod) > 1e-10 * std::max(prod, 1e-300)) {
                throw UnsupportedError(
                    "quadrature-1f requires forward prices driven by a single Gaussian variable; "
                    "use monte-carlo for this vol structure");
            }
        }
    }
    return sw;
}

} // namespace

double price_caplet_sigma(const DiscountCurve& curve, const VolStructure& vs,
                          std::span<const double> sigma, std::size_t i,
                          const TenorSchedule& schedule, double strike_rate)
{
    const auto p = period_inputs(curve, vs, sigma, i, schedule, strike_rate);
    return p.discount * lognormal_put(p.forward, p.strike, p.stdev) / p.strike;
}

double price_floorlet_sigma(const DiscountCurve& curve, const VolStructure& vs,
                            std::span<const double> sigma, std::size_t i,
                            const TenorSchedule& schedule, double strike_rate)
{
    const auto p = period_inputs(curve, vs, sigma, i, schedule, strike_rate);
    return p.discount * lognormal_call(p.forward, p.strike, p.stdev) / p.strike;
}

double price_in_arrears_period_sigma(const DiscountCurve& curve, const VolStructure& vs,
                                     std::span<const double> sigma, std::size_t i,
                                     const TenorSchedule& schedule, double strike_rate)
{
    check_period(schedule, i);
    schedule.check_horizon(curve);
    const double t0 = schedule.date(i - 1);
    const double t1 = schedule.date(i);
    const double x = curve.forward_price(t1, t0);
    const double V = vs.integrated_variance(sigma, 0.0, t0, t1, t0);
    const double Ki = transformed_strike(t1 - t0, strike_rate);
    return curve.bond_price(t1) * (x * x * std::exp(V) - x / Ki);
}

double price_cap_sigma(const DiscountCurve& curve, const VolStructure& vs,
                       std::span<const double> sigma, const TenorSchedule& schedule,
                       double strike_rate)
{
    return sum_periods(schedule, [&](std::size_t i) {
        return price_caplet_sigma(curve, vs, sigma, i, schedule, strike_rate);
    });
}

double price_floor_sigma(const DiscountCurve& curve, const VolStructure& vs,
                         std::span<const double> sigma, const TenorSchedule& schedule,
                         double strike_rate)
{
    return sum_periods(schedule, [&](std::size_t i) {
        return price_floorlet_sigma(curve, vs, sigma, i, schedule, strike_rate);
    });
}

double price_in_arrears_sigma(const DiscountCurve& curve, const VolStructure& vs,
                              std::span<const double> sigma, const TenorSchedule& schedule,
                              double strike_rate)
{
    return sum_periods(schedule, [&](std::size_t i) {
        return price_in_arrears_period_sigma(curve, vs, sigma, i, schedule, strike_rate);
    });
}

double swaption_sigma_1f(const DiscountCurve& curve, const VolStructure& vs,
                         std::span<const double> sigma, const TenorSchedule& schedule,
                         double strike_rate)
{
    const auto sw = one_factor(curve, vs, sigma, schedule, strike_rate);
    if (std::all_of(sw.w.begin(), sw.w.end(), [](double w) { return w == 0.0; })) {
        return sw.discount * std::max(sw.payoff(0.0), 0.0);
    }
    // payoff is increasing in z, tends to 1 as z -> +inf and to -inf as z -> -inf.
    double lo = -1.0, hi = 1.0;
    while (sw.payoff(lo) > 0.0) lo *= 2.0;
    while (sw.payoff(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) return 0.0;
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        [&](double z) { return sw.payoff(z); }, lo, hi, boost::math::tools::eps_tolerance<double>(),
        iters);
    const double zs = 0.5 * (a + b);
    double acc = normal_cdf(-zs);
    for (std::size_t i = 0; i < sw.w.size(); ++i) acc -= sw.cx[i] * normal_cdf(-zs - sw.w[i]);
    return sw.discount * std::max(acc, 0.0);
}

double swaption_sigma_gauss_hermite(const DiscountCurve& curve, const VolStructure& vs,
                                    std::span<const double> sigma,
                                    const TenorSchedule& schedule, double strike_rate, int nodes)
{
    const auto sw = one_factor(curve, vs, sigma, schedule, strike_rate);
    return sw.discount *
           gauss_hermite(nodes).expectation([&](double z) { return std::max(sw.payoff(z), 0.0); });
}

SampleStats swaption_sigma_mc(const DiscountCurve& curve, const VolStructure& vs,
                              std::span<const double> sigma, const TenorSchedule& schedule,
                              double strike_rate, const McConfig& mc)
{
    if (mc.paths < 2) throw ValidationError("mc.paths must be at least 2");
    const auto legs = swaption_legs(curve, schedule, strike_rate);
    const std::size_t n = legs.cx.size();
    const auto cov = swaption_covariance(vs, sigma, legs, schedule.first());
    const auto L = psd_cholesky(cov, n);

    const std::size_t samples = mc.antithetic ? mc.paths / 2 : mc.paths;
    std::vector<double> values(samples);
    parallel_for(samples, mc.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> z(n), y(n);
        const auto payoff = [&](double sign) {
            double acc = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                double yi = 0.0;
                for (std::size_t k = 0; k <= i; ++k) yi += L[i * n + k] * z[k];
                acc -= legs.cx[i] * std::exp(-sign * yi - 0.5 * cov[i * n + i]);
            }
            return std::max(acc, 0.0);
        };
        for (std::size_t p = begin; p < end; ++p) {
            Philox rng(mc.seed, p);
            for (auto& zk : z) zk = rng.normal();
            values[p] = mc.antithetic ? 0.5 * (payoff(1.0) + payoff(-1.0)) : payoff(1.0);
        }
    });
    auto stats = sample_stats(values);
    stats.mean *= legs.discount;
    stats.standard_error *= legs.discount;
    return stats;
}

PriceBounds price_cap(const DiscountCurve& curve, const VolStructure& vs,
                      const UncertaintyBand& band, const OptionContract& c)
{
    require_kind(c, OptionKind::cap);
    require_dims(vs, band);
    return bounds_from(band, price_cap_sigma(curve, vs, band.lower(), c.schedule, c.strike_rate),
                       price_cap_sigma(curve, vs, band.upper(), c.schedule, c.strike_rate),
                       c.notional, {{"method", "closed-form lognormal put"}});
}

PriceBounds price_floor(const DiscountCurve& curve, const VolStructure& vs,
                        const UncertaintyBand& band, const OptionContract& c)
{
    require_kind(c, OptionKind::floor);
    require_dims(vs, band);
    return bounds_from(band,
                       price_floor_sigma(curve, vs, band.lower(), c.schedule, c.strike_rate),
                       price_floor_sigma(curve, vs, band.upper(), c.schedule, c.strike_rate),
                       c.notional, {{"method", "closed-form lognormal call"}});
}

PriceBounds price_in_arrears_swap(const DiscountCurve& curve, const VolStructure& vs,
                                  const UncertaintyBand& band, const OptionContract& c)
{
    require_kind(c, OptionKind::in_arrears_payer_swap);
    require_dims(vs, band);
    return bounds_from(
        band, price_in_arrears_sigma(curve, vs, band.lower(), c.schedule, c.strike_rate),
        price_in_arrears_sigma(curve, vs, band.upper(), c.schedule, c.strike_rate), c.notional,
        {{"method", "closed-form lognormal second moment"}});
}

PriceBounds price_swaption(const DiscountCurve& curve, const VolStructure& vs,
                           const UncertaintyBand& band, const OptionContract& c,
                           SwaptionMethod method, const McConfig& mc)
{
    require_kind(c, OptionKind::swaption_payer);
    require_dims(vs, band);
    if (method == SwaptionMethod::automatic) {
        method = vs.dimension() == 1 && vs.factor(0).separable() ? SwaptionMethod::quadrature_1f
                                                                  : SwaptionMethod::monte_carlo;
    }
    if (method == SwaptionMethod::quadrature_1f) {
        return bounds_from(
            band, swaption_sigma_1f(curve, vs, band.lower(), c.schedule, c.strike_rate),
            swaption_sigma_1f(curve, vs, band.upper(), c.schedule, c.strike_rate), c.notional,
            {{"method", "quadrature-1f"}});
    }
    const auto lo = swaption_sigma_mc(curve, vs, band.lower(), c.schedule, c.strike_rate, mc);
    const auto hi = swaption_sigma_mc(curve, vs, band.upper(), c.schedule, c.strike_rate, mc);
    Diagnostics diag{{"method", "monte-carlo"},
                     {"paths", std::to_string(mc.paths)},
                     {"seed", std::to_string(mc.seed)},
                     {"antithetic", mc.antithetic ? "true" : "false"},
                     {"se_lower", diag_number(c.notional * lo.standard_error)},
                     {"se_upper", diag_number(c.notional * hi.standard_error)}};
    // Common random numbers across the two sigmas; the payoff is convex in
    // the Gaussian vector so the estimates are ordered path by path only in
    // expectation. Guard the invariant explicitly.
    const double lower = std::min(lo.mean, hi.mean);
    const double upper = std::max(lo.mean, hi.mean);
    return bounds_from(band, lower, upper, c.notional, std::move(diag));
}

PriceBounds price_option(const DiscountCurve& curve, const VolStructure& vs,
                         const UncertaintyBand& band, const OptionContract& c,
                         SwaptionMethod method, const McConfig& mc)
{
    switch (c.kind) {
    case OptionKind::cap: return price_cap(curve, vs, band, c);
    case OptionKind::floor: return price_floor(curve, vs, band, c);
    case OptionKind::in_arrears_payer_swap: return price_in_arrears_swap(curve, vs, band, c);
    case OptionKind::swaption_payer: return price_swaption(curve, vs, band, c, method, mc);
    }
    throw ValidationError("unknown option kind");
}

} // namespace rr
