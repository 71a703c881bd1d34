#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace rr {

enum class Interpolation { flat_left, linear };

Interpolation parse_interpolation(std::string_view name);
std::string_view to_string(Interpolation interp);

struct CurveKnot {
    double maturity;
    double rate;
};

/// Initial instantaneous forward curve f0 on [0, horizon] and the bond
/// prices P0(T) = exp(-int_0^T f0). Both interpolation kinds integrate in
/// closed form; the cumulative integral at each knot is cached at
/// construction. Left of the first knot and right of the last knot the
/// curve is flat at the nearest knot rate.
class DiscountCurve {
public:
    DiscountCurve(double horizon, std::vector<CurveKnot> knots,
                  Interpolation interp = Interpolation::linear);

    /// Flat curve at `rate` out to `horizon`.
    static DiscountCurve flat(double rate, double horizon);

    double horizon() const noexcept { return horizon_; }
    Interpolation interpolation() const noexcept { return interp_; }
    const std::vector<CurveKnot>& knots() const noexcept { return knots_; }

    double forward_rate(double T) const;
    /// int_0^T f0(s) ds
    double integrated_rate(double T) const;
    double bond_price(double T) const;
    /// P0(T_tilde) / P0(T)
    double forward_price(double T, double T_tilde) const;

private:
    void check_maturity(double T, const char* what) const;

    double horizon_;
    std::vector<CurveKnot> knots_;
    Interpolation interp_;
    std::vector<double> cumulative_;
};

double forward_rate(const DiscountCurve& curve, double T);
double bond_price_0(const DiscountCurve& curve, double T);
double forward_price_0(const DiscountCurve& curve, double T, double T_tilde);

/// Reads header-free `maturity,rate` lines. Horizon is the last maturity.
DiscountCurve load_curve(const std::filesystem::path& path,
                         Interpolation interp = Interpolation::linear);
DiscountCurve parse_curve_csv(std::string_view text,
                              Interpolation interp = Interpolation::linear);

} // namespace rr
