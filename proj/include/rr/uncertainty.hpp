#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace rr {

/// Diagonal volatility uncertainty band: each factor's multiplier ranges
/// over [lower_i, upper_i] with upper_i >= lower_i > 0.
class UncertaintyBand {
public:
    UncertaintyBand(std::vector<double> lower, std::vector<double> upper);

    /// Band collapsed to the single point `sigma`.
    static UncertaintyBand point(std::vector<double> sigma);
    /// The stress band [1 - eps, 1 + eps]^d around unit volatility.
    static UncertaintyBand stress(std::size_t d, double eps);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    /// lower + lambda (upper - lower), lambda in [0, 1].
    std::vector<double> interpolate(double lambda) const;
    bool contains(std::span<const double> sigma) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// G(a) = 1/2 sum_i (upper_i^2 max(a_ii, 0) - lower_i^2 max(-a_ii, 0)).
double g_generator(const UncertaintyBand& band, std::span<const double> diagonal);
bool degenerate(const UncertaintyBand& band);

/// Default absolute tolerance for the symmetric-contract collapse.
inline constexpr double kSymmetricTolerance = 1e-9;

using Diagnostics = std::map<std::string, std::string>;

/// Lower/upper price pair. `symmetric` is set by the pricer from the
/// structure of the contract, never inferred from the numbers.
struct PriceBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool symmetric = false;
    Diagnostics diagnostics;

    /// Throws std::logic_error when upper < lower - tolerance, or when a
    /// symmetric result has bounds further apart than kSymmetricTolerance.
    static PriceBounds make(double lower, double upper, bool symmetric, Diagnostics diag = {},
                            double tolerance = 1e-12);
    static PriceBounds single(double price, Diagnostics diag = {});

    double mid() const noexcept { return 0.5 * (lower + upper); }
    double half_spread() const noexcept { return 0.5 * (upper - lower); }
    PriceBounds scaled(double factor) const;
};

/// Formats a double with 17 significant digits for diagnostics.
std::string diag_number(double v);

} // namespace rr
