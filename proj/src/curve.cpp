#include "rr/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csv.hpp"
#include "rr/errors.hpp"

namespace rr {

Interpolation parse_interpolation(std::string_view name)
{
    if (name == "linear") return Interpolation::linear;
    if (name == "flat-left" || name == "flat_left") return Interpolation::flat_left;
    throw ValidationError("unknown interpolation '" + std::string(name) + "'");
}

std::string_view to_string(Interpolation interp)
{
    return interp == Interpolation::linear ? "linear" : "flat-left";
}

DiscountCurve::DiscountCurve(double horizon, std::vector<CurveKnot> knots, Interpolation interp)
    : horizon_(horizon)
    , knots_(std::move(knots))
    , interp_(interp)
{
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw ValidationError("curve horizon must be positive and finite");
    }
    if (knots_.empty()) {
        throw ValidationError("curve needs at least one knot");
    }
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const auto& kn = knots_[k];
        if (!std::isfinite(kn.maturity) || !std::isfinite(kn.rate)) {
            throw ValidationError("curve knot " + std::to_string(k) + " is not finite");
        }
        if (kn.maturity < 0.0 || kn.maturity > horizon_) {
            throw ValidationError("curve knot maturity " + std::to_string(kn.maturity) +
                                  " outside [0, horizon]");
        }
        if (k > 0 && !(kn.maturity > knots_[k - 1].maturity)) {
            throw ValidationError("curve knot maturities must be strictly increasing (duplicate or "
                                  "unsorted maturity " + std::to_string(kn.maturity) + ")");
        }
    }

    // cumulative_[k] = int_0^{knots_[k].maturity} f0
    cumulative_.resize(knots_.size());
    cumulative_[0] = knots_[0].rate * knots_[0].maturity;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        const double h = knots_[k].maturity - knots_[k - 1].maturity;
        const double area = interp_ == Interpolation::linear
                                ? 0.5 * (knots_[k - 1].rate + knots_[k].rate) * h
                                : knots_[k - 1].rate * h;
        cumulative_[k] = cumulative_[k - 1] + area;
    }
}

DiscountCurve DiscountCurve::flat(double rate, double horizon)
{
    return DiscountCurve(horizon, {{0.0, rate}}, Interpolation::flat_left);
}

void DiscountCurve::check_maturity(double T, const char* what) const
{
    const double slack = 1e-12 * std::max(1.0, horizon_);
    if (!(T >= -slack && T <= horizon_ + slack)) {
        throw DomainError(std::string(what) + ": maturity " + std::to_string(T) +
                          " outside curve horizon [0, " + std::to_string(horizon_) + "]");
    }
}

double DiscountCurve::forward_rate(double T) const
{
    check_maturity(T, "forward_rate");
    if (T <= knots_.front().maturity) return knots_.front().rate;
    if (T >= knots_.back().maturity) return knots_.back().rate;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), T,
                                     [](double t, const CurveKnot& k) { return t < k.maturity; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (interp_ == Interpolation::flat_left) return lo.rate;
    const double w = (T - lo.maturity) / (hi.maturity - lo.maturity);
    return lo.rate + w * (hi.rate - lo.rate);
}

double DiscountCurve::integrated_rate(double T) const
{
    check_maturity(T, "bond_price");
    T = std::clamp(T, 0.0, horizon_);
    if (T <= knots_.front().maturity) return knots_.front().rate * T;
    if (T >= knots_.back().maturity) {
        return cumulative_.back() + knots_.back().rate * (T - knots_.back().maturity);
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), T,
                                     [](double t, const CurveKnot& k) { return t < k.maturity; });
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const auto& lo = knots_[k];
    const double h = T - lo.maturity;
    if (interp_ == Interpolation::flat_left) return cumulative_[k] + lo.rate * h;
    const double slope = (knots_[k + 1].rate - lo.rate) / (knots_[k + 1].maturity - lo.maturity);
    return cumulative_[k] + lo.rate * h + 0.5 * slope * h * h;
}

double DiscountCurve::bond_price(double T) const { return std::exp(-integrated_rate(T)); }

double DiscountCurve::forward_price(double T, double T_tilde) const
{
    return std::exp(integrated_rate(T) - integrated_rate(T_tilde));
}

double forward_rate(const DiscountCurve& curve, double T) { return curve.forward_rate(T); }
double bond_price_0(const DiscountCurve& curve, double T) { return curve.bond_price(T); }
double forward_price_0(const DiscountCurve& curve, double T, double T_tilde)
{
    return curve.forward_price(T, T_tilde);
}

DiscountCurve parse_curve_csv(std::string_view text, Interpolation interp)
{
    const auto rows = detail::parse_numeric_csv(text, 2);
    if (rows.empty()) throw ParseError("curve file has no data lines", 0);
    std::vector<CurveKnot> knots;
    knots.reserve(rows.size());
    for (const auto& r : rows) {
        if (!knots.empty() && !(r.values[0] > knots.back().maturity)) {
            throw ValidationError("curve maturities must be strictly increasing: line " +
                                  std::to_string(r.line) + " has maturity " +
                                  std::to_string(r.values[0]));
        }
        knots.push_back({r.values[0], r.values[1]});
    }
    const double horizon = knots.back().maturity;
    return DiscountCurve(horizon, std::move(knots), interp);
}

DiscountCurve load_curve(const std::filesystem::path& path, Interpolation interp)
{
    return parse_curve_csv(detail::read_file(path), interp);
}

} // namespace rr
