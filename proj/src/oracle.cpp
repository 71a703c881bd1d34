#include "rr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rr/curve.hpp"
#include "rr/errors.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/numerics.hpp"
#include "rr/parallel.hpp"
#include "rr/random.hpp"
#include "rr/vol_structure.hpp"

namespace rr {

// ---------------------------------------------------------------- lattice

namespace {

LatticeResult lattice_core(const DiscountCurve& curve, const VolStructure& vs,
                           const UncertaintyBand& band, double T, double t1, double T_i,
                           const PayoffSpec& payoff, int steps)
{
    if (vs.dimension() != 1 || band.dimension() != 1) {
        throw UnsupportedError("lattice_price supports one-factor structures only");
    }
    if (steps < 10) throw ValidationError("lattice needs at least 10 steps");
    if (!(t1 <= std::min(T, T_i))) throw DomainError("lattice expiry t1 must not exceed min(T, T_i)");
    payoff.require_certificate();

    const double x0 = curve.forward_price(T, T_i);
    LatticeResult res;
    const std::size_t n = static_cast<std::size_t>(steps);
    std::vector<double> var(n);
    double var_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = t1 * static_cast<double>(k) / static_cast<double>(n);
        const double b = k + 1 == n ? t1 : t1 * static_cast<double>(k + 1) / static_cast<double>(n);
        var[k] = vs.factor_variance(0, a, b, T, T_i);
        var_max = std::max(var_max, var[k]);
    }
    const double s_lo = band.lower()[0];
    const double s_hi = band.upper()[0];
    const double dy = 1.2 * s_hi * std::sqrt(var_max);
    if (dy == 0.0) {
        res.forward_value = payoff(x0);
        res.price = curve.bond_price(T) * res.forward_value;
        return res;
    }
    res.dy = dy;
    const double up = std::exp(dy);
    const double down = std::exp(-dy);
    const double spread = 4.0 * std::sinh(0.5 * dy) * std::sinh(0.5 * dy);  // e^dy + e^-dy - 2
    struct Probs {
        double u, m, d;
    };
    const auto probs = [&](double v) {
        // matches E[X'] = X and E[X'^2] = X^2 e^v exactly
        const double s = std::expm1(v) / spread;
        if (s > 1.0) {
            // Per-step variance below 0.5 always keeps s < 1 at stretch 1.2.
            const double need = std::ceil(static_cast<double>(steps) * s_hi * s_hi * var_max / 0.5);
            throw DomainError("lattice step too large for the branch geometry; use at least " +
                              std::to_string(static_cast<long long>(need)) + " steps");
        }
        return Probs{s * (1.0 - down) / (up - down), 1.0 - s, s * (up - 1.0) / (up - down)};
    };

    std::vector<double> values(2 * n + 1), next(2 * n + 1);
    const double y0 = std::log(x0);
    for (std::size_t k = 0; k <= 2 * n; ++k) {
        values[k] = payoff(std::exp(y0 + dy * (static_cast<double>(k) - static_cast<double>(n))));
    }
    for (std::size_t step = n; step-- > 0;) {
        const Probs lo = probs(s_lo * s_lo * var[step]);
        const Probs hi = probs(s_hi * s_hi * var[step]);
        // nodes at this step: offsets -step..step, stored at index (n - step) + k
        const std::size_t first = n - step;
        for (std::size_t k = first; k <= n + step; ++k) {
            const double vl = lo.d * values[k - 1] + lo.m * values[k] + lo.u * values[k + 1];
            const double vh = hi.d * values[k - 1] + hi.m * values[k] + hi.u * values[k + 1];
            next[k] = std::max(vl, vh);
        }
        std::swap(values, next);
    }
    res.forward_value = values[n];
    res.price = curve.bond_price(T) * res.forward_value;
    return res;
}

} // namespace

LatticeResult lattice_price(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band, double T, double t1, double T_i,
                            const PayoffSpec& payoff, int steps)
{
    return lattice_core(curve, vs, band, T, t1, T_i, payoff, steps);
}

LatticeResult lattice_lower(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band, double T, double t1, double T_i,
                            const PayoffSpec& payoff, int steps)
{
    auto r = lattice_core(curve, vs, band, T, t1, T_i, payoffs::negate(payoff), steps);
    r.forward_value = -r.forward_value;
    r.price = -r.price;
    return r;
}

// --------------------------------------------------------------- scenario

namespace {

std::size_t locate(std::span<const double> grid, double T)
{
    auto it = std::lower_bound(grid.begin(), grid.end(), T - 1e-12);
    if (it == grid.end() || std::abs(*it - T) > 1e-12) {
        throw DomainError("maturity " + diag_number(T) + " is not simulated");
    }
    return static_cast<std::size_t>(it - grid.begin());
}

} // namespace

double BondState::bond(double T) const
{
    if (T < t_ - 1e-12) throw DomainError("bond maturity before the fixing date");
    return std::exp(log_x_[locate(maturities_, T)] - log_x_[locate(maturities_, t_)]);
}

double BondState::numeraire_ratio(double T) const
{
    return std::exp(log_x_[locate(maturities_, T)]);
}

std::vector<ScenarioCashflow> scenario_cashflows(const OptionContract& c)
{
    c.validate();
    const auto& s = c.schedule;
    const double K = c.strike_rate;
    const double N = c.notional;
    std::vector<ScenarioCashflow> out;
    switch (c.kind) {
    case OptionKind::cap:
    case OptionKind::floor:
    case OptionKind::in_arrears_payer_swap:
        for (std::size_t i = 1; i <= s.periods(); ++i) {
            const double a = s.date(i - 1), b = s.date(i);
            const double inv_k = 1.0 + (b - a) * K;
            if (c.kind == OptionKind::cap) {
                out.push_back({a, b, {b}, [=](const BondState& st) {
                                   return N * std::max(1.0 / st.bond(b) - inv_k, 0.0);
                               }});
            } else if (c.kind == OptionKind::floor) {
                out.push_back({a, b, {b}, [=](const BondState& st) {
                                   return N * std::max(inv_k - 1.0 / st.bond(b), 0.0);
                               }});
            } else {
                out.push_back({a, a, {b}, [=](const BondState& st) {
                                   return N * (1.0 / st.bond(b) - inv_k);
                               }});
            }
        }
        break;
    case OptionKind::swaption_payer: {
        const auto dates = s.dates();
        out.push_back({s.first(), s.first(), dates, [=](const BondState& st) {
                           double acc = 1.0 - st.bond(dates.back());
                           for (std::size_t i = 1; i < dates.size(); ++i) {
                               acc -= (dates[i] - dates[i - 1]) * K * st.bond(dates[i]);
                           }
                           return N * std::max(acc, 0.0);
                       }});
        break;
    }
    }
    return out;
}

std::vector<ScenarioCashflow> scenario_cashflows(const LinearContract& c)
{
    c.validate();
    const auto& s = c.schedule;
    const double N = c.notional;
    const double K = c.fixed_rate.value_or(0.0);
    std::vector<ScenarioCashflow> out;
    const auto constant = [&](double t, double amount) {
        out.push_back({t, t, {}, [=](const BondState&) { return N * amount; }});
    };
    for (std::size_t i = 1; i <= s.periods(); ++i) {
        const double a = s.date(i - 1), b = s.date(i);
        const double delta = b - a;
        switch (c.kind) {
        case LinearKind::fixed_coupon_bond: constant(b, delta * K); break;
        case LinearKind::floating_rate_note:
            out.push_back({a, b, {b}, [=](const BondState& st) { return N * (1.0 / st.bond(b) - 1.0); }});
            break;
        case LinearKind::payer_swap:
            out.push_back({a, b, {b}, [=](const BondState& st) {
                               return N * (1.0 / st.bond(b) - 1.0 - delta * K);
                           }});
            break;
        }
    }
    if (c.kind != LinearKind::payer_swap) constant(s.last(), 1.0);
    return out;
}

ScenarioResult scenario_sup(const DiscountCurve& curve, const VolStructure& vs,
                            const UncertaintyBand& band,
                            const std::vector<ScenarioCashflow>& cashflows,
                            const ScenarioControls& controls, const McConfig& mc)
{
    if (controls.levels.empty()) throw ValidationError("scenario control family is empty");
    if (cashflows.empty()) throw ValidationError("scenario_sup needs at least one cashflow");
    if (vs.dimension() != band.dimension()) {
        throw ValidationError("band dimension does not match vol structure dimension");
    }
    for (double l : controls.levels) {
        if (!(l >= 0.0 && l <= 1.0)) throw ValidationError("control levels must lie in [0, 1]");
    }
    if (mc.paths < 2) throw ValidationError("mc.paths must be at least 2");
    const std::size_t d = vs.dimension();

    // simulated maturities and dates
    std::vector<double> mats;
    std::vector<double> dates;
    for (const auto& cf : cashflows) {
        if (!(cf.pay >= cf.fix) || cf.fix < 0.0) throw DomainError("cashflow needs 0 <= fix <= pay");
        mats.push_back(cf.fix);
        mats.push_back(cf.pay);
        mats.insert(mats.end(), cf.maturities.begin(), cf.maturities.end());
        if (cf.fix > 0.0) dates.push_back(cf.fix);
    }
    std::sort(mats.begin(), mats.end());
    mats.erase(std::unique(mats.begin(), mats.end()), mats.end());
    const double t_star = mats.back();
    if (t_star > curve.horizon()) throw DomainError("cashflow maturity beyond curve horizon");
    std::vector<double> switches = controls.switch_dates;
    std::sort(switches.begin(), switches.end());
    switches.erase(std::unique(switches.begin(), switches.end()), switches.end());
    const double last_fix = dates.empty() ? 0.0 : *std::max_element(dates.begin(), dates.end());
    for (double s : switches) {
        if (s > 0.0 && s < last_fix) dates.push_back(s);
    }
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    const std::size_t segments = switches.size() + 1;

    // enumerate controls: one level per segment
    std::size_t count = 1;
    for (std::size_t s = 0; s < segments; ++s) {
        count *= controls.levels.size();
        if (count > 4096) throw ValidationError("scenario control family exceeds 4096 members");
    }
    ScenarioResult res;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> lam(segments);
        std::size_t code = c;
        for (std::size_t s = 0; s < segments; ++s) {
            lam[s] = controls.levels[code % controls.levels.size()];
            code /= controls.levels.size();
        }
        res.controls.push_back(std::move(lam));
    }

    // per interval: live maturities (index range) and per-factor Cholesky factors
    struct Interval {
        double a, b;
        std::size_t first_live;  // mats[first_live..] are >= b
        std::size_t segment;
        std::vector<std::vector<double>> chol;  // per factor, n x n
        std::vector<std::vector<double>> var;   // per factor, diagonal
        std::vector<std::size_t> fixing;        // cashflow indices fixed at b
    };
    std::vector<Interval> intervals;
    std::vector<std::size_t> fixing_at_zero;
    for (std::size_t k = 0; k < cashflows.size(); ++k) {
        if (cashflows[k].fix == 0.0) fixing_at_zero.push_back(k);
    }
    double prev = 0.0;
    for (double b : dates) {
        Interval iv{prev, b, 0, 0, {}, {}, {}};
        iv.first_live = static_cast<std::size_t>(
            std::lower_bound(mats.begin(), mats.end(), b - 1e-12) - mats.begin());
        iv.segment = static_cast<std::size_t>(std::upper_bound(switches.begin(), switches.end(), prev) -
                                              switches.begin());
        const std::size_t n = mats.size() - iv.first_live;
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> cov(n * n);
            std::vector<double> diag(n);
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = 0; q <= p; ++q) {
                    const double v = vs.factor(j).covariance(prev, b, t_star, mats[iv.first_live + p],
                                                             t_star, mats[iv.first_live + q]);
                    cov[p * n + q] = cov[q * n + p] = v;
                }
                diag[p] = cov[p * n + p];
            }
            iv.chol.push_back(psd_cholesky(cov, n));
            iv.var.push_back(std::move(diag));
        }
        for (std::size_t k = 0; k < cashflows.size(); ++k) {
            if (cashflows[k].fix == b) iv.fixing.push_back(k);
        }
        intervals.push_back(std::move(iv));
        prev = b;
    }

    std::vector<double> log_x0(mats.size());
    for (std::size_t m = 0; m < mats.size(); ++m) {
        log_x0[m] = curve.integrated_rate(t_star) - curve.integrated_rate(mats[m]);
    }
    const double p_star = curve.bond_price(t_star);

    const std::size_t samples = mc.antithetic ? mc.paths / 2 : mc.paths;
    std::vector<double> values(count * samples);
    parallel_for(samples, mc.threads, [&](std::size_t begin, std::size_t end) {
        // shocks[k][j] = L z for interval k, factor j
        std::vector<std::vector<std::vector<double>>> shocks(intervals.size());
        std::vector<double> z, log_x(mats.size());
        for (std::size_t p = begin; p < end; ++p) {
            Philox rng(mc.seed, p);
            for (std::size_t k = 0; k < intervals.size(); ++k) {
                const auto& iv = intervals[k];
                const std::size_t n = mats.size() - iv.first_live;
                shocks[k].resize(d);
                for (std::size_t j = 0; j < d; ++j) {
                    z.resize(n);
                    for (auto& zi : z) zi = rng.normal();
                    auto& y = shocks[k][j];
                    y.assign(n, 0.0);
                    for (std::size_t a = 0; a < n; ++a) {
                        for (std::size_t b = 0; b <= a; ++b) y[a] += iv.chol[j][a * n + b] * z[b];
                    }
                }
            }
            for (std::size_t c = 0; c < count; ++c) {
                const auto& lam = res.controls[c];
                double acc = 0.0;
                for (double sign : {1.0, -1.0}) {
                    if (sign < 0.0 && !mc.antithetic) break;
                    log_x = log_x0;
                    double v = 0.0;
                    const auto pay = [&](std::size_t k, double t) {
                        const auto& cf = cashflows[k];
                        const BondState st(t, mats, log_x);
                        v += p_star * cf.amount(st) * st.numeraire_ratio(cf.pay);
                    };
                    for (std::size_t k : fixing_at_zero) pay(k, 0.0);
                    for (std::size_t k = 0; k < intervals.size(); ++k) {
                        const auto& iv = intervals[k];
                        const std::size_t n = mats.size() - iv.first_live;
                        for (std::size_t j = 0; j < d; ++j) {
                            const double lo = band.lower()[j], hi = band.upper()[j];
                            const double sg = lo + lam[iv.segment] * (hi - lo);
                            for (std::size_t a = 0; a < n; ++a) {
                                log_x[iv.first_live + a] +=
                                    -sign * sg * shocks[k][j][a] - 0.5 * sg * sg * iv.var[j][a];
                            }
                        }
                        for (std::size_t cf : iv.fixing) pay(cf, iv.b);
                    }
                    acc += v;
                }
                values[c * samples + p] = mc.antithetic ? 0.5 * acc : acc;
            }
        }
    });

    for (std::size_t c = 0; c < count; ++c) {
        const auto st = sample_stats(std::span<const double>(values).subspan(c * samples, samples));
        res.values.push_back(st.mean);
        res.standard_errors.push_back(st.standard_error);
    }
    res.argmax = static_cast<std::size_t>(std::max_element(res.values.begin(), res.values.end()) -
                                          res.values.begin());
    res.argmin = static_cast<std::size_t>(std::min_element(res.values.begin(), res.values.end()) -
                                          res.values.begin());
    res.sup = res.values[res.argmax];
    res.sup_se = res.standard_errors[res.argmax];
    res.inf = res.values[res.argmin];
    res.inf_se = res.standard_errors[res.argmin];
    return res;
}

// --------------------------------------------------- expectations hypothesis

EhMeasure parse_eh_measure(std::string_view name)
{
    if (name == "forward") return EhMeasure::forward;
    if (name == "spot") return EhMeasure::spot;
    throw ValidationError("unknown measure '" + std::string(name) + "'");
}

EhResult expectations_hypothesis_check(const DiscountCurve& curve, const VolStructure& vs,
                                       std::span<const double> sigma, double T,
                                       const McConfig& mc, EhMeasure measure)
{
    if (sigma.size() != vs.dimension()) throw ValidationError("sigma dimension mismatch");
    if (!(T > 0.0) || T > curve.horizon()) throw DomainError("T must lie in (0, horizon]");
    if (mc.paths < 2) throw ValidationError("mc.paths must be at least 2");
    const std::size_t d = vs.dimension();
    const double f0 = curve.forward_rate(T);

    // Per factor second moments of (int b(u,T) dW, int beta(u,T) dW) over [0, T].
    struct Factor {
        double bb, bbeta, betabeta;
        double l11, l21, l22;
    };
    std::vector<Factor> fac(d);
    double drift = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const auto& f = vs.factor(j);
        auto& q = fac[j];
        q.bb = simpson([&](double u) { return f.b(u, T) * f.b(u, T); }, 0.0, T);
        q.bbeta = simpson([&](double u) { return f.b(u, T) * f.beta(u, T); }, 0.0, T);
        q.betabeta = simpson([&](double u) { return f.beta(u, T) * f.beta(u, T); }, 0.0, T);
        q.l11 = std::sqrt(q.bb);
        q.l21 = q.l11 > 0.0 ? q.bbeta / q.l11 : 0.0;
        q.l22 = std::sqrt(std::max(q.betabeta - q.l21 * q.l21, 0.0));
        drift += sigma[j] * sigma[j] * q.bbeta;
    }

    const std::size_t samples = mc.antithetic ? mc.paths / 2 : mc.paths;
    std::vector<double> values(samples);
    parallel_for(samples, mc.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> z1(d), z2(d);
        for (std::size_t p = begin; p < end; ++p) {
            Philox rng(mc.seed, p);
            for (std::size_t j = 0; j < d; ++j) {
                z1[j] = rng.normal();
                z2[j] = rng.normal();
            }
            double acc = 0.0;
            for (double sign : {1.0, -1.0}) {
                if (sign < 0.0 && !mc.antithetic) break;
                if (measure == EhMeasure::forward) {
                    double r = f0;
                    for (std::size_t j = 0; j < d; ++j) {
                        r += sign * sigma[j] * std::sqrt(fac[j].betabeta) * z2[j];
                    }
                    acc += r;
                } else {
                    double r = f0 + drift;
                    double log_density = 0.0;
                    for (std::size_t j = 0; j < d; ++j) {
                        const double y1 = sign * fac[j].l11 * z1[j];
                        const double y2 = sign * (fac[j].l21 * z1[j] + fac[j].l22 * z2[j]);
                        r += sigma[j] * y2;
                        log_density += -0.5 * sigma[j] * sigma[j] * fac[j].bb - sigma[j] * y1;
                    }
                    acc += std::exp(log_density) * r;
                }
            }
            values[p] = mc.antithetic ? 0.5 * acc : acc;
        }
    });
    const auto st = sample_stats(values);
    return {st.mean, f0, std::abs(st.mean - f0), st.standard_error};
}

} // namespace rr
