#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rr/payoff.hpp"
#include "rr/robust_options.hpp"
#include "rr/uncertainty.hpp"

namespace rr {

class DiscountCurve;
class VolStructure;
struct LinearContract;

// ---------------------------------------------------------------- lattice

struct LatticeResult {
    double forward_value = 0.0;  // under the forward expectation at T
    double price = 0.0;          // P0(T) * forward_value
    double dy = 0.0;
};

/// Upper value of phi(X_{t1}^{T,T_i}) on a recombining trinomial lattice in
/// ln X (d = 1). Each step takes the larger of the two one-step expectations
/// under sigma_lower and sigma_upper. Branch probabilities match the first
/// two moments of X exactly, so X is a lattice martingale.
LatticeResult lattice_price(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band, double T, double t1, double T_i,
                            const PayoffSpec& payoff, int steps);
/// -upper(-phi).
LatticeResult lattice_lower(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band, double T, double t1, double T_i,
                            const PayoffSpec& payoff, int steps);

// --------------------------------------------------------------- scenario

/// Bond prices P_t(T) available at a fixing date t of the simulation.
class BondState {
public:
    BondState(double t, std::span<const double> maturities, std::span<const double> log_x)
        : t_(t), maturities_(maturities), log_x_(log_x)
    {}
    double time() const noexcept { return t_; }
    /// P_t(T); T must be one of the simulated maturities and T >= t.
    double bond(double T) const;
    /// X_t^{T*,T} = P_t(T) / P_t(T*).
    double numeraire_ratio(double T) const;

private:
    double t_;
    std::span<const double> maturities_;
    std::span<const double> log_x_;
};

/// Cash amount fixed at `fix` (a function of the bond prices then) and
/// paid at `pay >= fix`. `maturities` lists every T whose P_fix(T) the
/// amount reads.
struct ScenarioCashflow {
    double fix;
    double pay;
    std::vector<double> maturities;
    std::function<double(const BondState&)> amount;
};

std::vector<ScenarioCashflow> scenario_cashflows(const OptionContract& c);
std::vector<ScenarioCashflow> scenario_cashflows(const LinearContract& c);

/// Deterministic volatility scenarios sigma(t) = lower + lambda(t) (upper -
/// lower). With no switch dates every level is a constant control; with
/// switch dates every assignment of levels to the segments they cut is a
/// control (levels^segments controls, at most 4096).
struct ScenarioControls {
    std::vector<double> levels{0.0, 0.5, 1.0};
    std::vector<double> switch_dates;
};

struct ScenarioResult {
    double sup = 0.0;
    double sup_se = 0.0;
    double inf = 0.0;
    double inf_se = 0.0;
    std::size_t argmax = 0;
    std::size_t argmin = 0;
    /// Per control: lambda per segment, value and standard error.
    std::vector<std::vector<double>> controls;
    std::vector<double> values;
    std::vector<double> standard_errors;
};

/// Prices the cashflows under every control by Monte Carlo on the Gaussian
/// HJM model in the T*-forward measure (T* the latest simulated maturity),
/// with common random numbers across controls. The max is a lower estimate
/// of the robust upper bound, the min an upper estimate of the lower bound.
ScenarioResult scenario_sup(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band,
                            const std::vector<ScenarioCashflow>& cashflows,
                            const ScenarioControls& controls, const McConfig& mc);

// --------------------------------------------------- expectations hypothesis

enum class EhMeasure {
    forward,  // driftless f_t(T) under the T-forward measure
    spot      // spot-measure simulation reweighted by exp(-int r) / P0(T)
};

EhMeasure parse_eh_measure(std::string_view name);

struct EhResult {
    double mean = 0.0;
    double forward_rate = 0.0;
    double gap = 0.0;
    double standard_error = 0.0;
};

EhResult expectations_hypothesis_check(const DiscountCurve& curve, const VolStructure& vs,
                                       std::span<const double> sigma, double T,
                                       const McConfig& mc, EhMeasure measure = EhMeasure::forward);

} // namespace rr
