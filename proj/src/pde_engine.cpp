#include "rr/pde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "rr/curve.hpp"
#include "rr/errors.hpp"
#include "rr/numerics.hpp"
#include "rr/vol_structure.hpp"

namespace rr {

PdeScheme parse_pde_scheme(std::string_view name)
{
    if (name == "explicit") return PdeScheme::explicit_euler;
    if (name == "implicit" || name == "implicit-policy-iteration") {
        return PdeScheme::implicit_policy_iteration;
    }
    throw ValidationError("unknown pde scheme '" + std::string(name) + "'");
}

std::string_view to_string(PdeScheme s)
{
    return s == PdeScheme::explicit_euler ? "explicit" : "implicit-policy-iteration";
}

void PDEGrid::validate() const
{
    if (nx < 3) throw ValidationError("pde grid needs nx >= 3");
    if (nt < 1) throw ValidationError("pde grid needs nt >= 1");
    if (x_min < 0.0 || x_max < 0.0) throw ValidationError("pde grid bounds must be positive");
    if ((x_min > 0.0) != (x_max > 0.0)) {
        throw ValidationError("pde grid: give both x_min and x_max or neither");
    }
    if (x_min > 0.0 && !(x_max > x_min)) throw ValidationError("pde grid needs x_max > x_min");
    if (!(width_sd > 0.0)) throw ValidationError("pde grid needs width_sd > 0");
}

double interp_quadratic(const std::vector<double>& x, const std::vector<double>& u, double at)
{
    const std::size_t n = x.size();
    if (n < 3) return interp_linear(x, u, at);
    std::size_t k = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), at) - x.begin());
    // three consecutive nodes k-1, k, k+1 with x[k] closest to `at`
    if (k > 0 && (k == n || at - x[k - 1] < x[k] - at)) --k;
    k = std::clamp<std::size_t>(k, 1, n - 2);
    const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
    const double l0 = (at - x1) * (at - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (at - x0) * (at - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (at - x0) * (at - x1) / ((x2 - x0) * (x2 - x1));
    return l0 * u[k - 1] + l1 * u[k] + l2 * u[k + 1];
}

namespace {

constexpr int kMaxPolicyIterations = 50;
constexpr double kPolicyTolerance = 1e-12;

struct StepVariance {
    double lo;
    double hi;
};

// Band-scaled variance of ln X^{T,T_i} accumulated over each time step.
std::vector<StepVariance> step_variances(const VolStructure& vs, const UncertaintyBand& band,
                                         double t0, double t1, std::size_t nt, double T,
                                         double T_i)
{
    std::vector<StepVariance> out(nt);
    const double dt = (t1 - t0) / static_cast<double>(nt);
    for (std::size_t n = 0; n < nt; ++n) {
        const double a = t0 + dt * static_cast<double>(n);
        const double b = n + 1 == nt ? t1 : t0 + dt * static_cast<double>(n + 1);
        for (std::size_t j = 0; j < vs.dimension(); ++j) {
            const double v = vs.factor_variance(j, a, b, T, T_i);
            out[n].lo += band.lower()[j] * band.lower()[j] * v;
            out[n].hi += band.upper()[j] * band.upper()[j] * v;
        }
    }
    return out;
}

// Discrete Gamma = u_yy - u_y at interior node i (central differences).
inline double gamma_at(const std::vector<double>& u, std::size_t i, double inv_dy2, double inv_2dy)
{
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dy2 - (u[i + 1] - u[i - 1]) * inv_2dy;
}

// Interior cells whose log-width window contains a payoff kink take the
// cell average of phi instead of the point value; this removes the
// grid-alignment oscillation of the kink without touching smooth payoffs.
void smooth_kink_cells(const PayoffSpec& payoff, double y_lo, double dy, std::vector<double>& u)
{
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto f = [&](double y) { return payoff(std::exp(y)); };
    const std::size_t n = u.size();
    for (double k : payoff.kinks) {
        if (!(k > 0.0)) continue;
        const double yk = std::log(k);
        const double pos = (yk - y_lo) / dy;
        if (pos < 0.5 || pos > static_cast<double>(n) - 1.5) continue;
        const std::size_t i = static_cast<std::size_t>(std::floor(pos + 0.5));
        const double a = y_lo + dy * (static_cast<double>(i) - 0.5);
        const double b = a + dy;
        std::vector<double> cuts{a, b};
        for (double k2 : payoff.kinks) {
            if (k2 > 0.0 && std::log(k2) > a && std::log(k2) < b) cuts.push_back(std::log(k2));
        }
        std::sort(cuts.begin(), cuts.end());
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) acc += Rule::integrate(f, cuts[c], cuts[c + 1]);
        u[i] = acc / dy;
    }
}

class SurfaceWriter {
public:
    explicit SurfaceWriter(const std::optional<std::filesystem::path>& path)
    {
        if (path) {
            out_.open(*path);
            if (!out_) throw ValidationError("cannot open surface file " + path->string());
            out_ << "t,x,u\n";
        }
    }
    void write(double t, const std::vector<double>& x, const std::vector<double>& u)
    {
        if (!out_.is_open()) return;
        char buf[96];
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g\n", t, x[i], u[i]);
            out_ << buf;
        }
    }

private:
    std::ofstream out_;
};

} // namespace

PdeResult solve_single_option(const DiscountCurve& curve, const VolStructure& vs,
                              const UncertaintyBand& band, double T, double t1, double T_i,
                              const PayoffSpec& payoff, const PDEGrid& grid,
                              const PdeOptions& options)
{
    grid.validate();
    payoff.require_certificate();
    if (vs.dimension() != band.dimension()) {
        throw ValidationError("band dimension does not match vol structure dimension");
    }
    if (!(t1 <= std::min(T, T_i))) {
        throw DomainError("option expiry t1 must not exceed min(T, T_i)");
    }
    const double t0 = options.t_start;
    if (!(t0 >= 0.0 && t0 <= t1)) throw DomainError("pde start time must lie in [0, t1]");

    const double x0 = curve.forward_price(T, T_i);
    const double v_total = std::sqrt(vs.integrated_variance(band.upper(), 0.0, t1, T, T_i));

    PdeResult res;
    res.diagnostics = {{"method", "pde"},
                       {"scheme", std::string(to_string(grid.scheme))},
                       {"nx", std::to_string(grid.nx)},
                       {"nt", std::to_string(grid.nt)}};

    if (v_total == 0.0 && grid.x_min == 0.0) {
        // No diffusion: the forward price is frozen.
        res.x = {x0};
        res.u = {payoff(x0)};
        res.forward_value = res.u[0];
        res.price = curve.bond_price(T) * res.forward_value;
        res.diagnostics["note"] = "zero variance";
        return res;
    }

    const double y_lo = grid.x_min > 0.0 ? std::log(grid.x_min) : std::log(x0) - grid.width_sd * v_total;
    const double y_hi = grid.x_max > 0.0 ? std::log(grid.x_max) : std::log(x0) + grid.width_sd * v_total;
    const std::size_t n = grid.nx;
    const double dy = (y_hi - y_lo) / static_cast<double>(n - 1);
    const double inv_dy2 = 1.0 / (dy * dy);
    const double inv_2dy = 0.5 / dy;
    if (dy >= 2.0) throw ValidationError("pde grid too coarse: log spacing must be below 2");

    res.x.resize(n);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.x[i] = std::exp(y_lo + dy * static_cast<double>(i));
        u[i] = payoff(res.x[i]);
        if (!std::isfinite(u[i])) throw ValidationError("payoff evaluation failed at x = " + diag_number(res.x[i]));
    }
    smooth_kink_cells(payoff, y_lo, dy, u);
    const double left = u.front();
    const double right = u.back();

    const auto var = step_variances(vs, band, t0, t1, grid.nt, T, T_i);
    const double dt = (t1 - t0) / static_cast<double>(grid.nt);
    SurfaceWriter surface(options.surface_csv);
    surface.write(t1, res.x, u);

    if (grid.scheme == PdeScheme::explicit_euler) {
        double a_max = 0.0;
        for (const auto& s : var) a_max = std::max(a_max, s.hi);
        // explicit monotone scheme: 1 - A/dy^2 >= 0 on the diagonal
        if (a_max > dy * dy) {
            const double need = std::ceil(static_cast<double>(grid.nt) * a_max / (dy * dy));
            throw StabilityError("explicit scheme unstable: step variance " + diag_number(a_max) +
                                 " exceeds dy^2 = " + diag_number(dy * dy) + "; use nt >= " +
                                 diag_number(need));
        }
        std::vector<double> next(n);
        for (std::size_t step = grid.nt; step-- > 0;) {
            next.front() = left;
            next.back() = right;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double g = gamma_at(u, i, inv_dy2, inv_2dy);
                next[i] = u[i] + 0.5 * (g > 0.0 ? var[step].hi : var[step].lo) * g;
            }
            u.swap(next);
            surface.write(t0 + dt * static_cast<double>(step), res.x, u);
        }
    } else {
        std::vector<double> sub(n), diag(n), sup(n), rhs(n), prev(n);
        std::vector<char> policy(n, 1);
        for (std::size_t step = grid.nt; step-- > 0;) {
            const auto& sv = var[step];
            std::vector<double> cur = u;
            int it = 0;
            for (;; ++it) {
                if (it == kMaxPolicyIterations) {
                    throw ConvergenceError("policy iteration did not converge within " +
                                           std::to_string(kMaxPolicyIterations) + " iterations");
                }
                // choose the maximising control from the current iterate
                bool changed = false;
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const char p = gamma_at(cur, i, inv_dy2, inv_2dy) > 0.0 ? 1 : 0;
                    if (it == 0 || p != policy[i]) changed = true;
                    policy[i] = p;
                }
                if (!changed) break;
                diag.front() = diag.back() = 1.0;
                sup.front() = sub.back() = 0.0;
                rhs.front() = left;
                rhs.back() = right;
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const double a = 0.5 * (policy[i] ? sv.hi : sv.lo);
                    sub[i] = -a * (inv_dy2 + inv_2dy);
                    sup[i] = -a * (inv_dy2 - inv_2dy);
                    diag[i] = 1.0 + 2.0 * a * inv_dy2;
                    rhs[i] = u[i];
                }
                solve_tridiagonal(sub, diag, sup, rhs);
                double change = 0.0, scale = 1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    change = std::max(change, std::abs(rhs[i] - cur[i]));
                    scale = std::max(scale, std::abs(rhs[i]));
                }
                cur.swap(rhs);
                if (it > 0 && change <= kPolicyTolerance * scale) break;
            }
            res.max_policy_iterations = std::max<std::size_t>(res.max_policy_iterations, it);
            u.swap(cur);
            surface.write(t0 + dt * static_cast<double>(step), res.x, u);
        }
        res.diagnostics["max_policy_iterations"] = std::to_string(res.max_policy_iterations);
    }

    res.u = std::move(u);
    res.forward_value = interp_quadratic(res.x, res.u, x0);
    res.price = curve.bond_price(T) * res.forward_value;
    return res;
}

PdeResult solve_lower(const DiscountCurve& curve, const VolStructure& vs,
                      const UncertaintyBand& band, double T, double t1, double T_i,
                      const PayoffSpec& payoff, const PDEGrid& grid, const PdeOptions& options)
{
    auto res = solve_single_option(curve, vs, band, T, t1, T_i, payoffs::negate(payoff), grid,
                                   options);
    res.forward_value = -res.forward_value;
    res.price = -res.price;
    for (double& v : res.u) v = -v;
    res.diagnostics["bound"] = "lower";
    return res;
}

} // namespace rr
