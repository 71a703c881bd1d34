#include "rr/vol_structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "csv.hpp"
#include "rr/errors.hpp"

namespace rr {

namespace {

constexpr double kOrderSlack = 1e-12;

void require_order(double lo, double hi, const char* what)
{
    if (!(lo <= hi + kOrderSlack * std::max(1.0, std::abs(hi)))) {
        throw DomainError(std::string(what) + ": maturity ordering violated (" + std::to_string(lo) +
                          " > " + std::to_string(hi) + ")");
    }
}

// Index of the cell [x[k], x[k+1]] containing v, plus the weight of x[k+1].
std::pair<std::size_t, double> locate(const std::vector<double>& x, double v)
{
    if (x.size() == 1 || v <= x.front()) return {0, 0.0};
    if (v >= x.back()) return {x.size() - 2, 1.0};
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const auto k = static_cast<std::size_t>(it - x.begin()) - 1;
    return {k, (v - x[k]) / (x[k + 1] - x[k])};
}

} // namespace

std::string_view to_string(FactorKind kind)
{
    switch (kind) {
    case FactorKind::ho_lee: return "ho-lee";
    case FactorKind::hull_white: return "hull-white";
    case FactorKind::tabulated: return "tabulated";
    }
    return "?";
}

double BetaTable::operator()(double t_, double T_) const
{
    const auto [a, wa] = locate(t, t_);
    const auto [b, wb] = locate(T, T_);
    const std::size_t nT = T.size();
    const std::size_t a1 = std::min(a + 1, t.size() - 1);
    const std::size_t b1 = std::min(b + 1, nT - 1);
    const double v00 = beta[a * nT + b];
    const double v01 = beta[a * nT + b1];
    const double v10 = beta[a1 * nT + b];
    const double v11 = beta[a1 * nT + b1];
    return (1 - wa) * ((1 - wb) * v00 + wb * v01) + wa * ((1 - wb) * v10 + wb * v11);
}

VolFactor::VolFactor(FactorKind kind, double level, double kappa, BetaTable table)
    : kind_(kind)
    , level_(level)
    , kappa_(kappa)
    , table_(std::move(table))
{}

VolFactor VolFactor::ho_lee(double level)
{
    if (!(level > 0.0) || !std::isfinite(level)) {
        throw ValidationError("ho-lee level must be positive");
    }
    return VolFactor(FactorKind::ho_lee, level, 0.0, {});
}

VolFactor VolFactor::hull_white(double level, double mean_reversion)
{
    if (!(level > 0.0) || !std::isfinite(level)) {
        throw ValidationError("hull-white level must be positive");
    }
    if (!(mean_reversion > 0.0) || !std::isfinite(mean_reversion)) {
        throw ValidationError("hull-white mean reversion must be positive");
    }
    return VolFactor(FactorKind::hull_white, level, mean_reversion, {});
}

VolFactor VolFactor::tabulated(BetaTable table)
{
    if (table.t.empty() || table.T.empty()) {
        throw ValidationError("tabulated factor needs a non-empty grid");
    }
    if (table.beta.size() != table.t.size() * table.T.size()) {
        throw ValidationError("tabulated factor grid is not rectangular");
    }
    auto increasing = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!increasing(table.t) || !increasing(table.T)) {
        throw ValidationError("tabulated factor axes must be strictly increasing");
    }
    for (double v : table.beta) {
        if (!std::isfinite(v)) throw ValidationError("tabulated factor has non-finite beta");
    }
    return VolFactor(FactorKind::tabulated, 0.0, 0.0, std::move(table));
}

double VolFactor::beta(double t, double s) const
{
    switch (kind_) {
    case FactorKind::ho_lee: return level_;
    case FactorKind::hull_white: return level_ * std::exp(-kappa_ * (s - t));
    case FactorKind::tabulated: return table_(t, s);
    }
    return 0.0;
}

double VolFactor::b(double t, double T) const
{
    require_order(t, T, "b");
    if (T <= t) return 0.0;
    switch (kind_) {
    case FactorKind::ho_lee: return level_ * (T - t);
    case FactorKind::hull_white: return -(level_ / kappa_) * std::expm1(-kappa_ * (T - t));
    case FactorKind::tabulated: return b_quadrature(t, T);
    }
    return 0.0;
}

double VolFactor::separable_alpha(double T, double T_tilde) const
{
    switch (kind_) {
    case FactorKind::ho_lee: return level_ * (T_tilde - T);
    case FactorKind::hull_white:
        return (level_ / kappa_) * (std::exp(-kappa_ * T) - std::exp(-kappa_ * T_tilde));
    case FactorKind::tabulated: break;
    }
    throw UnsupportedError("tabulated factor has no separable form");
}

double VolFactor::separable_clock(double t0, double t1) const
{
    require_order(t0, t1, "separable_clock");
    switch (kind_) {
    case FactorKind::ho_lee: return t1 - t0;
    case FactorKind::hull_white:
        return (std::exp(2.0 * kappa_ * t1) - std::exp(2.0 * kappa_ * t0)) / (2.0 * kappa_);
    case FactorKind::tabulated: break;
    }
    throw UnsupportedError("tabulated factor has no separable form");
}

double VolFactor::b_quadrature(double t, double T) const
{
    require_order(t, T, "b");
    if (T <= t) return 0.0;
    return simpson([&](double s) { return beta(t, s); }, t, T);
}

double VolFactor::covariance(double t0, double t1, double T, double T_tilde, double S,
                             double S_tilde) const
{
    require_order(t0, t1, "integrated_variance");
    require_order(t1, std::min({T, T_tilde, S, S_tilde}), "integrated_variance");
    if (t1 <= t0) return 0.0;
    switch (kind_) {
    case FactorKind::ho_lee:
        return level_ * level_ * (T_tilde - T) * (S_tilde - S) * (t1 - t0);
    case FactorKind::hull_white: {
        // sigma_u(T, T~) = (c/k) e^{k (u - t1)} (e^{-k (T - t1)} - e^{-k (T~ - t1)})
        const double k = kappa_;
        const double a = std::exp(-k * (T - t1)) - std::exp(-k * (T_tilde - t1));
        const double c = std::exp(-k * (S - t1)) - std::exp(-k * (S_tilde - t1));
        const double scale = level_ / k;
        return scale * scale * a * c * (-std::expm1(-2.0 * k * (t1 - t0)) / (2.0 * k));
    }
    case FactorKind::tabulated: return covariance_quadrature(t0, t1, T, T_tilde, S, S_tilde);
    }
    return 0.0;
}

double VolFactor::covariance_quadrature(double t0, double t1, double T, double T_tilde, double S,
                                        double S_tilde) const
{
    require_order(t0, t1, "integrated_variance");
    if (t1 <= t0) return 0.0;
    const bool same = T == S && T_tilde == S_tilde;
    return simpson(
        [&](double u) {
            const double x = b_quadrature(u, T_tilde) - b_quadrature(u, T);
            const double y = same ? x : b_quadrature(u, S_tilde) - b_quadrature(u, S);
            return x * y;
        },
        t0, t1);
}

VolStructure::VolStructure(std::vector<VolFactor> factors)
    : factors_(std::move(factors))
{
    if (factors_.empty()) throw ValidationError("vol structure needs at least one factor");
}

const VolFactor& VolStructure::factor(std::size_t i) const
{
    if (i >= factors_.size()) {
        throw DomainError("factor index " + std::to_string(i) + " out of range (d = " +
                          std::to_string(factors_.size()) + ")");
    }
    return factors_[i];
}

double VolStructure::b(std::size_t i, double t, double T) const { return factor(i).b(t, T); }

double VolStructure::sigma_fp(std::size_t i, double t, double T, double T_tilde) const
{
    require_order(t, std::min(T, T_tilde), "sigma_fp");
    const auto& f = factor(i);
    return f.b(t, T_tilde) - f.b(t, T);
}

double VolStructure::factor_variance(std::size_t i, double t0, double t1, double T,
                                     double T_tilde) const
{
    return factor(i).covariance(t0, t1, T, T_tilde, T, T_tilde);
}

double VolStructure::integrated_covariance(std::span<const double> scale, double t0, double t1,
                                           double T, double T_tilde, double S,
                                           double S_tilde) const
{
    if (scale.size() != factors_.size()) {
        throw ValidationError("band scale has " + std::to_string(scale.size()) +
                              " entries, vol structure has " + std::to_string(factors_.size()));
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        acc += scale[j] * scale[j] * factors_[j].covariance(t0, t1, T, T_tilde, S, S_tilde);
    }
    return acc;
}

double VolStructure::integrated_variance(std::span<const double> scale, double t0, double t1,
                                         double T, double T_tilde) const
{
    return std::max(0.0, integrated_covariance(scale, t0, t1, T, T_tilde, T, T_tilde));
}

double b(const VolStructure& vs, std::size_t i, double t, double T) { return vs.b(i, t, T); }

double sigma_fp(const VolStructure& vs, std::size_t i, double t, double T, double T_tilde)
{
    return vs.sigma_fp(i, t, T, T_tilde);
}

double integrated_variance(const VolStructure& vs, std::span<const double> scale, double t0,
                           double t1, double T, double T_tilde)
{
    return vs.integrated_variance(scale, t0, t1, T, T_tilde);
}

BetaTable parse_beta_table_csv(std::string_view text)
{
    const auto rows = detail::parse_numeric_csv(text, 3);
    if (rows.empty()) throw ParseError("tabulated factor file has no data lines", 0);
    std::map<std::pair<double, double>, double> cells;
    std::vector<double> ts, Ts;
    for (const auto& r : rows) {
        if (!cells.emplace(std::make_pair(r.values[0], r.values[1]), r.values[2]).second) {
            throw ValidationError("duplicate grid point on line " + std::to_string(r.line));
        }
        ts.push_back(r.values[0]);
        Ts.push_back(r.values[1]);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(ts);
    uniq(Ts);
    if (cells.size() != ts.size() * Ts.size()) {
        throw ValidationError("tabulated factor grid is not complete rectangular: " +
                              std::to_string(cells.size()) + " points for a " +
                              std::to_string(ts.size()) + "x" + std::to_string(Ts.size()) + " grid");
    }
    BetaTable table{ts, Ts, {}};
    table.beta.reserve(cells.size());
    for (double t : ts) {
        for (double T : Ts) table.beta.push_back(cells.at({t, T}));
    }
    return table;
}

BetaTable load_beta_table(const std::filesystem::path& path)
{
    return parse_beta_table_csv(detail::read_file(path));
}

} // namespace rr
