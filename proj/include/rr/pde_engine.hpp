#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "rr/payoff.hpp"
#include "rr/uncertainty.hpp"

namespace rr {

class DiscountCurve;
class VolStructure;

enum class PdeScheme { explicit_euler, implicit_policy_iteration };

PdeScheme parse_pde_scheme(std::string_view name);
std::string_view to_string(PdeScheme s);

/// Finite-difference grid. The solver works on a uniform grid in ln x;
/// x_min/x_max of zero mean "x0 e^{-/+ width_sd * v}" with v the total
/// upper-band log volatility over [0, t1].
struct PDEGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t nx = 400;
    std::size_t nt = 400;
    PdeScheme scheme = PdeScheme::implicit_policy_iteration;
    double width_sd = 6.0;

    void validate() const;
};

struct PdeOptions {
    /// Valuation time of the returned slice (0 for time-0 prices).
    double t_start = 0.0;
    /// When set, every time slice is appended as `t,x,u` rows.
    std::optional<std::filesystem::path> surface_csv;
};

struct PdeResult {
    /// u(t_start, X0^{T,T_i}) under the forward expectation at T.
    double forward_value = 0.0;
    /// P0(T) * forward_value.
    double price = 0.0;
    /// Value slice at t_start on the spatial grid (x increasing).
    std::vector<double> x;
    std::vector<double> u;
    std::size_t max_policy_iterations = 0;
    Diagnostics diagnostics;
};

/// Upper value sup-expectation of phi(X_{t1}^{T,T_i}) for one forward price:
/// backward Euler in time (or explicit Euler) on
///   u_t + 1/2 (A_hi(t) Gamma^+ - A_lo(t) Gamma^-) = 0,  Gamma = u_yy - u_y,
/// where A_hi/A_lo are the band-scaled instantaneous variances of ln X.
/// The implicit scheme resolves the sign switch by policy iteration.
PdeResult solve_single_option(const DiscountCurve& curve, const VolStructure& vs,
                              const UncertaintyBand& band, double T, double t1, double T_i,
                              const PayoffSpec& payoff, const PDEGrid& grid = {},
                              const PdeOptions& options = {});

/// Lower value -E[-phi], solved as the upper value of the negated payoff.
PdeResult solve_lower(const DiscountCurve& curve, const VolStructure& vs,
                      const UncertaintyBand& band, double T, double t1, double T_i,
                      const PayoffSpec& payoff, const PDEGrid& grid = {},
                      const PdeOptions& options = {});

/// Quadratic interpolation through the three grid nodes nearest to `at`.
double interp_quadratic(const std::vector<double>& x, const std::vector<double>& u, double at);

} // namespace rr
