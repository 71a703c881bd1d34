#include "rr/config.hpp"

#include <json.hpp>

#include "csv.hpp"
#include "rr/errors.hpp"

namespace rr {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& path, const char* key)
{
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(at(path, key), "missing required field");
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
}

double number(const json& obj, const std::string& path, const char* key)
{
    return number(require(obj, path, key), at(path, key));
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback)
{
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, at(path, key));
}

std::string text(const json& obj, const std::string& path, const char* key)
{
    const auto& v = require(obj, path, key);
    if (!v.is_string()) throw ConfigError(at(path, key), "expected a string");
    return v.get<std::string>();
}

std::string text_or(const json& obj, const std::string& path, const char* key, std::string fallback)
{
    return obj.contains(key) ? text(obj, path, key) : fallback;
}

std::size_t count(const json& obj, const std::string& path, const char* key, std::size_t fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 0) {
        throw ConfigError(at(path, key), "expected a non-negative integer");
    }
    return it->get<std::size_t>();
}

std::vector<double> numbers(const json& v, const std::string& path)
{
    if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], at(path, i)));
    return out;
}

// Runs a domain constructor, re-labelling its validation errors with the field.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const ParseError& e) {
        throw ConfigError(path, e.what());
    } catch (const ValidationError& e) {
        throw ConfigError(path, e.what());
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    } catch (const UnsupportedError& e) {
        throw ConfigError(path, e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file)
{
    std::filesystem::path p(file);
    return p.is_absolute() ? p : base / p;
}

DiscountCurve parse_curve(const json& j, const std::string& path, const std::filesystem::path& base)
{
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const auto interp = guarded(at(path, "interpolation"), [&] {
        return parse_interpolation(text_or(j, path, "interpolation", "linear"));
    });
    if (j.contains("file")) {
        const auto file = resolve(base, text(j, path, "file"));
        return guarded(at(path, "file"), [&] { return load_curve(file, interp); });
    }
    if (j.contains("flat")) {
        const double rate = number(j, path, "flat");
        const double horizon = number(j, path, "horizon");
        return guarded(path, [&] { return DiscountCurve::flat(rate, horizon); });
    }
    const auto& knots = require(j, path, "knots");
    if (!knots.is_array()) throw ConfigError(at(path, "knots"), "expected an array of [maturity, rate]");
    std::vector<CurveKnot> ks;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto p = numbers(knots[i], at(at(path, "knots"), i));
        if (p.size() != 2) throw ConfigError(at(at(path, "knots"), i), "expected [maturity, rate]");
        ks.push_back({p[0], p[1]});
    }
    const double horizon =
        j.contains("horizon") ? number(j, path, "horizon") : (ks.empty() ? 0.0 : ks.back().maturity);
    return guarded(path, [&] { return DiscountCurve(horizon, std::move(ks), interp); });
}

VolStructure parse_vol(const json& j, const std::string& path, const std::filesystem::path& base)
{
    const auto& fs = require(j, path, "factors");
    const std::string fpath = at(path, "factors");
    if (!fs.is_array() || fs.empty()) throw ConfigError(fpath, "expected a non-empty array");
    std::vector<VolFactor> factors;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto p = at(fpath, i);
        const auto kind = text(fs[i], p, "kind");
        if (kind == "ho-lee") {
            const double c = number(fs[i], p, "level");
            factors.push_back(guarded(p, [&] { return VolFactor::ho_lee(c); }));
        } else if (kind == "hull-white") {
            const double c = number(fs[i], p, "level");
            const double k = number(fs[i], p, "mean_reversion");
            factors.push_back(guarded(p, [&] { return VolFactor::hull_white(c, k); }));
        } else if (kind == "tabulated") {
            const auto file = resolve(base, text(fs[i], p, "file"));
            factors.push_back(guarded(at(p, "file"), [&] { return VolFactor::tabulated(load_beta_table(file)); }));
        } else {
            throw ConfigError(at(p, "kind"), "unknown factor kind '" + kind + "'");
        }
    }
    return VolStructure(std::move(factors));
}

PayoffSpec parse_payoff(const json& j, const std::string& path)
{
    const auto type = text(j, path, "type");
    PayoffSpec p = guarded(path, [&]() -> PayoffSpec {
        if (type == "put") return payoffs::put(number(j, path, "strike"), number_or(j, path, "scale", 1.0));
        if (type == "call") return payoffs::call(number(j, path, "strike"), number_or(j, path, "scale", 1.0));
        if (type == "capped-call-spread") {
            return payoffs::capped_call_spread(number(j, path, "strike"), number(j, path, "cap"));
        }
        if (type == "affine") return payoffs::affine(number(j, path, "slope"), number_or(j, path, "intercept", 0.0));
        if (type == "quadratic") {
            return payoffs::quadratic(number(j, path, "a"), number_or(j, path, "b", 0.0),
                                      number_or(j, path, "c", 0.0));
        }
        if (type == "piecewise-linear") {
            const auto& pts = require(j, path, "points");
            if (!pts.is_array()) throw ConfigError(at(path, "points"), "expected an array of [x, y]");
            std::vector<std::pair<double, double>> xy;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto v = numbers(pts[i], at(at(path, "points"), i));
                if (v.size() != 2) throw ConfigError(at(at(path, "points"), i), "expected [x, y]");
                xy.emplace_back(v[0], v[1]);
            }
            return payoffs::piecewise_linear(std::move(xy));
        }
        throw ConfigError(at(path, "type"), "unknown payoff type '" + type + "'");
    });
    if (j.contains("growth")) {
        const auto& g = j["growth"];
        const auto gp = at(path, "growth");
        const double C = number(g, gp, "C");
        const double m = number(g, gp, "m");
        if (!(C > 0.0) || m < 1.0 || m != std::floor(m)) {
            throw ConfigError(gp, "growth certificate needs C > 0 and integer m >= 1");
        }
        p.growth = GrowthCertificate{C, static_cast<int>(m)};
    }
    if (j.contains("scale") && type != "put" && type != "call") {
        p = payoffs::scale(p, number(j, path, "scale"));
    }
    return p;
}

StreamLeg parse_leg(const json& j, const std::string& path)
{
    const auto type = text(j, path, "type");
    if (type == "constant") return StreamLeg::constant(number(j, path, "amount"));
    if (type == "linear") return StreamLeg::linear(number(j, path, "a"), number_or(j, path, "b", 0.0));
    if (type == "option") {
        auto payoff = parse_payoff(require(j, path, "payoff"), at(path, "payoff"));
        const auto tag = guarded(at(path, "convexity"), [&] {
            return parse_convexity(text_or(j, path, "convexity", "general"));
        });
        return StreamLeg::option(std::move(payoff), tag);
    }
    throw ConfigError(at(path, "type"), "unknown leg type '" + type + "'");
}

ContractEntry parse_contract(const json& j, const std::string& path, const DiscountCurve& curve)
{
    const auto kind_name = text(j, path, "kind");
    const auto name = text_or(j, path, "name", kind_name);
    auto swaption_method = SwaptionMethod::automatic;
    auto stream_method = StreamMethod::automatic;
    const auto entry = [&](auto&& c) {
        return ContractEntry{name, kind_name, std::forward<decltype(c)>(c), swaption_method, stream_method};
    };
    const double notional = number_or(j, path, "notional", 1.0);
    if (!(notional > 0.0)) throw ConfigError(at(path, "notional"), "must be positive");

    const auto schedule = [&] {
        const auto dates = numbers(require(j, path, "schedule"), at(path, "schedule"));
        auto s = guarded(at(path, "schedule"), [&] { return TenorSchedule(dates); });
        guarded(at(path, "schedule"), [&] {
            s.check_horizon(curve);
            return 0;
        });
        return s;
    };

    static const std::pair<const char*, LinearKind> linear_kinds[] = {
        {"fixed-coupon-bond", LinearKind::fixed_coupon_bond},
        {"floating-rate-note", LinearKind::floating_rate_note},
        {"payer-swap", LinearKind::payer_swap}};
    static const std::pair<const char*, OptionKind> option_kinds[] = {
        {"cap", OptionKind::cap},
        {"floor", OptionKind::floor},
        {"swaption-payer", OptionKind::swaption_payer},
        {"in-arrears-payer-swap", OptionKind::in_arrears_payer_swap}};

    for (const auto& [name, kind] : linear_kinds) {
        if (kind_name != name) continue;
        std::optional<double> rate;
        if (j.contains("fixed_rate")) rate = number(j, path, "fixed_rate");
        LinearContract c{kind, schedule(), rate, notional};
        guarded(path, [&] {
            c.validate();
            return 0;
        });
        return entry(std::move(c));
    }
    for (const auto& [name, kind] : option_kinds) {
        if (kind_name != name) continue;
        OptionContract c{kind, schedule(), number(j, path, "strike_rate"), notional};
        guarded(at(path, "strike_rate"), [&] {
            c.validate();
            return 0;
        });
        if (kind == OptionKind::swaption_payer) {
            swaption_method = guarded(at(path, "method"), [&] {
                return parse_swaption_method(text_or(j, path, "method", "auto"));
            });
        }
        return entry(std::move(c));
    }
    if (kind_name == "stream") {
        const auto& legs = require(j, path, "legs");
        if (!legs.is_array()) throw ConfigError(at(path, "legs"), "expected an array");
        CashflowStream st{schedule(), {}, notional};
        for (std::size_t i = 0; i < legs.size(); ++i) {
            st.legs.push_back(parse_leg(legs[i], at(at(path, "legs"), i)));
        }
        guarded(at(path, "legs"), [&] {
            st.validate();
            return 0;
        });
        stream_method = guarded(at(path, "method"), [&] {
            return parse_stream_method(text_or(j, path, "method", "auto"));
        });
        return entry(std::move(st));
    }
    if (kind_name == "forward-option") {
        ForwardOption f{number(j, path, "T"), number(j, path, "t1"), number(j, path, "underlying"),
                        parse_payoff(require(j, path, "payoff"), at(path, "payoff")), notional};
        if (!(f.t1 >= 0.0 && f.t1 <= std::min(f.T, f.underlying))) {
            throw ConfigError(at(path, "t1"), "requires 0 <= t1 <= min(T, underlying)");
        }
        if (std::max(f.T, f.underlying) > curve.horizon()) {
            throw ConfigError(path, "maturity beyond curve horizon");
        }
        return entry(std::move(f));
    }
    throw ConfigError(at(path, "kind"), "unknown contract kind '" + kind_name + "'");
}

} // namespace

double ContractEntry::notional() const
{
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ForwardOption> || std::is_same_v<T, CashflowStream> ||
                          std::is_same_v<T, LinearContract> || std::is_same_v<T, OptionContract>) {
                return c.notional;
            }
        },
        contract);
}

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config", "expected a JSON object");

    auto curve = parse_curve(require(root, "config", "curve"), "curve", base_dir);
    auto vs = parse_vol(require(root, "config", "vol_structure"), "vol_structure", base_dir);
    const auto& b = require(root, "config", "band");
    auto lower = numbers(require(b, "band", "sigma_lower"), "band.sigma_lower");
    auto upper = numbers(require(b, "band", "sigma_upper"), "band.sigma_upper");
    auto band = guarded("band", [&] { return UncertaintyBand(lower, upper); });
    if (band.dimension() != vs.dimension()) {
        throw ConfigError("band", "has " + std::to_string(band.dimension()) +
                                      " factors but vol_structure has " + std::to_string(vs.dimension()));
    }

    McConfig mc;
    if (root.contains("mc")) {
        const auto& m = root["mc"];
        mc.paths = count(m, "mc", "paths", mc.paths);
        if (mc.paths < 2) throw ConfigError("mc.paths", "must be at least 2");
        if (m.contains("seed")) {
            if (!m["seed"].is_number_unsigned()) throw ConfigError("mc.seed", "expected a non-negative integer");
            mc.seed = m["seed"].get<std::uint64_t>();
        }
        if (m.contains("antithetic")) {
            if (!m["antithetic"].is_boolean()) throw ConfigError("mc.antithetic", "expected a boolean");
            mc.antithetic = m["antithetic"].get<bool>();
        }
    }
    PDEGrid pde;
    StateGrid state;
    if (root.contains("pde")) {
        const auto& p = root["pde"];
        pde.nx = count(p, "pde", "nx", pde.nx);
        pde.nt = count(p, "pde", "nt", pde.nt);
        pde.scheme = guarded("pde.scheme", [&] {
            return parse_pde_scheme(text_or(p, "pde", "scheme", "implicit"));
        });
        state.nm = count(p, "pde", "state_nm", state.nm);
        state.nr = count(p, "pde", "state_nr", state.nr);
        guarded("pde", [&] {
            pde.validate();
            state.validate();
            return 0;
        });
    }

    const auto& cs = require(root, "config", "contracts");
    if (!cs.is_array()) throw ConfigError("contracts", "expected an array");
    std::vector<ContractEntry> contracts;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        contracts.push_back(parse_contract(cs[i], at(std::string("contracts"), i), curve));
    }
    return Config{std::move(curve), std::move(vs), std::move(band), mc, pde, state, std::move(contracts)};
}

Config load_config(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = detail::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("config", e.what());
    }
    return parse_config(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

PriceBounds price_entry(const Config& cfg, const ContractEntry& entry, const UncertaintyBand& band,
                        const McConfig& mc)
{
    return std::visit(
        [&](const auto& c) -> PriceBounds {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LinearContract>) {
                return price_linear(cfg.curve, c);
            } else if constexpr (std::is_same_v<T, OptionContract>) {
                return price_option(cfg.curve, cfg.vs, band, c, entry.swaption_method, mc);
            } else if constexpr (std::is_same_v<T, CashflowStream>) {
                StreamOptions opt;
                opt.method = entry.stream_method;
                opt.grid = cfg.pde;
                opt.state = cfg.state;
                return price_stream(cfg.curve, cfg.vs, band, c, opt);
            } else {
                const auto hi = solve_single_option(cfg.curve, cfg.vs, band, c.T, c.t1, c.underlying,
                                                    c.payoff, cfg.pde);
                const auto lo = solve_lower(cfg.curve, cfg.vs, band, c.T, c.t1, c.underlying,
                                            c.payoff, cfg.pde);
                auto diag = hi.diagnostics;
                diag["method"] = std::string("pde (") + std::string(to_string(cfg.pde.scheme)) + ")";
                return PriceBounds::make(c.notional * lo.price, c.notional * hi.price,
                                         degenerate(band), std::move(diag));
            }
        },
        entry.contract);
}

} // namespace rr
