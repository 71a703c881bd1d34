#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "rr/numerics.hpp"
#include "rr/schedule.hpp"
#include "rr/uncertainty.hpp"

namespace rr {

class DiscountCurve;
class VolStructure;

enum class OptionKind { cap, floor, swaption_payer, in_arrears_payer_swap };

std::string_view to_string(OptionKind kind);

struct OptionContract {
    OptionKind kind;
    TenorSchedule schedule;
    double strike_rate;
    double notional = 1.0;

    void validate() const;
};

/// Monte Carlo settings shared by every simulation in the library.
struct McConfig {
    std::size_t paths = 100000;
    std::uint64_t seed = 20240607;
    bool antithetic = true;
    unsigned threads = 1;
};

enum class SwaptionMethod { automatic, quadrature_1f, monte_carlo };

SwaptionMethod parse_swaption_method(std::string_view name);
std::string_view to_string(SwaptionMethod m);

/// K_i = 1 / (1 + delta_i K).
double transformed_strike(double accrual, double strike_rate);

// Classical (single constant sigma) values per unit notional. Period index
// i runs over [1, N].
double price_caplet_sigma(const DiscountCurve& curve, const VolStructure& vs,
                          std::span<const double> sigma, std::size_t i,
                          const TenorSchedule& schedule, double strike_rate);
double price_floorlet_sigma(const DiscountCurve& curve, const VolStructure& vs,
                            std::span<const double> sigma, std::size_t i,
                            const TenorSchedule& schedule, double strike_rate);
double price_in_arrears_period_sigma(const DiscountCurve& curve, const VolStructure& vs,
                                     std::span<const double> sigma, std::size_t i,
                                     const TenorSchedule& schedule, double strike_rate);
double price_cap_sigma(const DiscountCurve& curve, const VolStructure& vs,
                       std::span<const double> sigma, const TenorSchedule& schedule,
                       double strike_rate);
double price_floor_sigma(const DiscountCurve& curve, const VolStructure& vs,
                         std::span<const double> sigma, const TenorSchedule& schedule,
                         double strike_rate);
double price_in_arrears_sigma(const DiscountCurve& curve, const VolStructure& vs,
                              std::span<const double> sigma, const TenorSchedule& schedule,
                              double strike_rate);

/// One-factor swaption value P0(T0) E[(1 - sum_i c_i X^i)^+]: the payoff is
/// monotone in the common Gaussian driver, so the expectation splits at the
/// exercise boundary into normal CDFs. Throws UnsupportedError unless d = 1
/// and all forward prices load on one Gaussian variable.
double swaption_sigma_1f(const DiscountCurve& curve, const VolStructure& vs,
                         std::span<const double> sigma, const TenorSchedule& schedule,
                         double strike_rate);
/// Same expectation by an n-point Gauss-Hermite rule (cross-check only).
double swaption_sigma_gauss_hermite(const DiscountCurve& curve, const VolStructure& vs,
                                    std::span<const double> sigma,
                                    const TenorSchedule& schedule, double strike_rate,
                                    int nodes = 200);
/// Monte Carlo over the joint lognormal vector (X^1..X^N) at T0.
SampleStats swaption_sigma_mc(const DiscountCurve& curve, const VolStructure& vs,
                              std::span<const double> sigma, const TenorSchedule& schedule,
                              double strike_rate, const McConfig& mc);

PriceBounds price_cap(const DiscountCurve& curve, const VolStructure& vs,
                      const UncertaintyBand& band, const OptionContract& c);
PriceBounds price_floor(const DiscountCurve& curve, const VolStructure& vs,
                        const UncertaintyBand& band, const OptionContract& c);
PriceBounds price_in_arrears_swap(const DiscountCurve& curve, const VolStructure& vs,
                                  const UncertaintyBand& band, const OptionContract& c);
/// `automatic` picks quadrature-1f when d = 1 and the factor is
/// separable, Monte Carlo otherwise.
PriceBounds price_swaption(const DiscountCurve& curve, const VolStructure& vs,
                           const UncertaintyBand& band, const OptionContract& c,
                           SwaptionMethod method = SwaptionMethod::automatic,
                           const McConfig& mc = {});
/// Dispatches on c.kind.
PriceBounds price_option(const DiscountCurve& curve, const VolStructure& vs,
                         const UncertaintyBand& band, const OptionContract& c,
                         SwaptionMethod method = SwaptionMethod::automatic,
                         const McConfig& mc = {});

} // namespace rr
