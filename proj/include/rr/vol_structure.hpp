#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace rr {

/// Composite Simpson panel count used wherever a factor has no closed form.
inline constexpr int kSimpsonPanels = 64;

enum class FactorKind { ho_lee, hull_white, tabulated };

std::string_view to_string(FactorKind kind);

/// Rectangular grid of beta(t, T) values, bilinear in between, flat
/// outside the grid.
struct BetaTable {
    std::vector<double> t;          // strictly increasing
    std::vector<double> T;          // strictly increasing
    std::vector<double> beta;       // row-major, beta[a * T.size() + b] = beta(t[a], T[b])

    double operator()(double t_, double T_) const;
};

/// One deterministic diffusion factor beta(t, T) of the forward curve.
class VolFactor {
public:
    static VolFactor ho_lee(double level);
    static VolFactor hull_white(double level, double mean_reversion);
    static VolFactor tabulated(BetaTable table);

    FactorKind kind() const noexcept { return kind_; }
    double level() const noexcept { return level_; }
    double mean_reversion() const noexcept { return kappa_; }
    const BetaTable& table() const noexcept { return table_; }

    double beta(double t, double s) const;
    /// int_t^T beta(t, s) ds, closed form where available.
    double b(double t, double T) const;
    /// Same integral by composite Simpson regardless of kind.
    double b_quadrature(double t, double T) const;
    /// int_{t0}^{t1} sigma_u(T, T~) sigma_u(S, S~) du with sigma_u(T, T~) = b(u, T~) - b(u, T).
    double covariance(double t0, double t1, double T, double T_tilde, double S, double S_tilde) const;
    double covariance_quadrature(double t0, double t1, double T, double T_tilde, double S,
                                 double S_tilde) const;
    /// True when sigma_u(T, T~) = alpha(T, T~) * g(u) for one time profile g.
    bool separable() const noexcept { return kind_ != FactorKind::tabulated; }
    /// alpha(T, T~) of the separable form, normalised so that g(0) = 1.
    double separable_alpha(double T, double T_tilde) const;
    /// int_{t0}^{t1} g(u)^2 du of the separable form.
    double separable_clock(double t0, double t1) const;

private:
    VolFactor(FactorKind kind, double level, double kappa, BetaTable table);

    FactorKind kind_;
    double level_ = 0.0;
    double kappa_ = 0.0;
    BetaTable table_;
};

/// d-factor deterministic volatility structure. Factor indices are 0-based.
class VolStructure {
public:
    explicit VolStructure(std::vector<VolFactor> factors);

    std::size_t dimension() const noexcept { return factors_.size(); }
    const VolFactor& factor(std::size_t i) const;
    const std::vector<VolFactor>& factors() const noexcept { return factors_; }

    double b(std::size_t i, double t, double T) const;
    double sigma_fp(std::size_t i, double t, double T, double T_tilde) const;

    /// Sum_j scale_j^2 int_{t0}^{t1} sigma_u^j(T, T~)^2 du.
    double integrated_variance(std::span<const double> scale, double t0, double t1, double T,
                               double T_tilde) const;
    /// Sum_j scale_j^2 int_{t0}^{t1} sigma_u^j(T, T~) sigma_u^j(S, S~) du.
    double integrated_covariance(std::span<const double> scale, double t0, double t1, double T,
                                 double T_tilde, double S, double S_tilde) const;
    /// Per-factor unscaled variance int_{t0}^{t1} sigma_u^i(T, T~)^2 du.
    double factor_variance(std::size_t i, double t0, double t1, double T, double T_tilde) const;

private:
    std::vector<VolFactor> factors_;
};

double b(const VolStructure& vs, std::size_t i, double t, double T);
double sigma_fp(const VolStructure& vs, std::size_t i, double t, double T, double T_tilde);
double integrated_variance(const VolStructure& vs, std::span<const double> scale, double t0,
                           double t1, double T, double T_tilde);

/// Reads `t,T,beta` lines forming a complete rectangular grid.
BetaTable load_beta_table(const std::filesystem::path& path);
BetaTable parse_beta_table_csv(std::string_view text);

/// Composite Simpson over [a, b] with `panels` (even) sub-intervals.
template <class F>
double simpson(F&& f, double a, double b, int panels = kSimpsonPanels)
{
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int k = 1; k < panels; ++k) {
        acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    }
    return acc * h / 3.0;
}

} // namespace rr
