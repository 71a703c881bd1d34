#include "rr/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rr/errors.hpp"

namespace rr {

UncertaintyBand::UncertaintyBand(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower))
    , upper_(std::move(upper))
{
    if (lower_.empty()) throw ValidationError("band needs at least one factor");
    if (lower_.size() != upper_.size()) {
        throw ValidationError("sigma_lower and sigma_upper differ in length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] > 0.0) ||
            !(upper_[i] >= lower_[i])) {
            throw ValidationError("band requires sigma_upper >= sigma_lower > 0 (factor " +
                                  std::to_string(i) + ")");
        }
    }
}

UncertaintyBand UncertaintyBand::point(std::vector<double> sigma)
{
    auto copy = sigma;
    return UncertaintyBand(std::move(sigma), std::move(copy));
}

UncertaintyBand UncertaintyBand::stress(std::size_t d, double eps)
{
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
    return UncertaintyBand(std::vector<double>(d, 1.0 - eps), std::vector<double>(d, 1.0 + eps));
}

std::vector<double> UncertaintyBand::interpolate(double lambda) const
{
    std::vector<double> out(lower_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lambda == 1.0 ? upper_[i] : lower_[i] + lambda * (upper_[i] - lower_[i]);
    }
    return out;
}

bool UncertaintyBand::contains(std::span<const double> sigma) const
{
    if (sigma.size() != lower_.size()) return false;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] < lower_[i] || sigma[i] > upper_[i]) return false;
    }
    return true;
}

double g_generator(const UncertaintyBand& band, std::span<const double> diagonal)
{
    if (diagonal.size() != band.dimension()) {
        throw ValidationError("g_generator: dimension mismatch (" + std::to_string(diagonal.size()) +
                              " vs " + std::to_string(band.dimension()) + ")");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < diagonal.size(); ++i) {
        const double a = diagonal[i];
        const double hi = band.upper()[i];
        const double lo = band.lower()[i];
        acc += a > 0.0 ? hi * hi * a : lo * lo * a;
    }
    return 0.5 * acc;
}

bool degenerate(const UncertaintyBand& band) { return band.lower() == band.upper(); }

PriceBounds PriceBounds::make(double lower, double upper, bool symmetric, Diagnostics diag,
                              double tolerance)
{
    if (!std::isfinite(lower) || !std::isfinite(upper)) {
        throw std::logic_error("price bounds are not finite");
    }
    const double scale = std::max({1.0, std::abs(lower), std::abs(upper)});
    if (upper < lower - tolerance * scale) {
        throw std::logic_error("price bounds inverted: upper " + diag_number(upper) + " < lower " +
                               diag_number(lower));
    }
    if (symmetric && std::abs(upper - lower) > kSymmetricTolerance) {
        throw std::logic_error("symmetric contract with distinct bounds");
    }
    return PriceBounds{lower, std::max(lower, upper), symmetric, std::move(diag)};
}

PriceBounds PriceBounds::single(double price, Diagnostics diag)
{
    return make(price, price, true, std::move(diag));
}

PriceBounds PriceBounds::scaled(double factor) const
{
    PriceBounds out = *this;
    out.lower = factor >= 0.0 ? lower * factor : upper * factor;
    out.upper = factor >= 0.0 ? upper * factor : lower * factor;
    return out;
}

std::string diag_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace rr
