#include "rr/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rr/errors.hpp"
#include "rr/parallel.hpp"

namespace rr {

using nlohmann::ordered_json;

namespace {

std::string fmt12(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// JSON carries the 12-digit value itself so the report and the parsed
// numbers agree exactly.
ordered_json json_number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(fmt12(v).c_str(), nullptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

using Row = std::vector<std::string>;

std::string render_table(const Row& header, const std::vector<Row>& rows)
{
    std::vector<std::size_t> w(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        w[c] = header[c].size();
        for (const auto& r : rows) w[c] = std::max(w[c], r[c].size());
    }
    std::ostringstream os;
    const auto line = [&](const Row& r) {
        std::string s;
        for (std::size_t c = 0; c < r.size(); ++c) {
            s += r[c];
            if (c + 1 < r.size()) s += std::string(w[c] - r[c].size() + 2, ' ');
        }
        os << s << '\n';
    };
    line(header);
    Row rule;
    for (auto n : w) rule.push_back(std::string(n, '-'));
    line(rule);
    for (const auto& r : rows) line(r);
    return os.str();
}

std::string render_csv(const Row& header, const std::vector<Row>& rows)
{
    std::ostringstream os;
    for (const auto* r : {&header}) {
        for (std::size_t c = 0; c < r->size(); ++c) os << (c ? "," : "") << csv_field((*r)[c]);
        os << '\n';
    }
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_field(r[c]);
        os << '\n';
    }
    return os.str();
}

std::string method_of(const PriceBounds& b)
{
    auto it = b.diagnostics.find("method");
    return it == b.diagnostics.end() ? "" : it->second;
}

ordered_json diagnostics_json(const Diagnostics& d)
{
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : d) j[k] = v;
    return j;
}

McConfig mc_for(const Config& cfg, const RunOptions& opt, unsigned threads)
{
    McConfig mc = cfg.mc;
    if (opt.seed) mc.seed = *opt.seed;
    mc.threads = threads;
    return mc;
}

// Prices every contract under `band`, parallel across contracts. The first
// failure in config order is reported.
std::vector<PriceBounds> price_under(const Config& cfg, const UncertaintyBand& band, const RunOptions& opt)
{
    const std::size_t n = cfg.contracts.size();
    const unsigned threads = std::max(1u, opt.threads);
    const auto mc = mc_for(cfg, opt, n > 1 ? 1u : threads);
    std::vector<PriceBounds> out(n);
    std::vector<std::exception_ptr> errors(n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const auto& e = cfg.contracts[i];
                out[i] = price_entry(cfg, e, band, mc).scaled(1.0 / e.notional());
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        const auto where = "contracts[" + std::to_string(i) + "] (" + cfg.contracts[i].name + ")";
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& ex) {
            throw PricingError(where + ": " + ex.what());
        }
    }
    return out;
}

} // namespace

OutputFormat parse_output_format(std::string_view name)
{
    if (name == "table") return OutputFormat::table;
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    throw ValidationError("unknown format '" + std::string(name) + "' (expected table, json or csv)");
}

std::vector<PriceBounds> price_all(const Config& cfg, const RunOptions& opt)
{
    return price_under(cfg, cfg.band, opt);
}

std::string price_report(const Config& cfg, const RunOptions& opt)
{
    const auto res = price_all(cfg, opt);
    if (opt.format == OutputFormat::json) {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < res.size(); ++i) {
            arr.push_back({{"name", cfg.contracts[i].name},
                           {"kind", cfg.contracts[i].kind},
                           {"lower", json_number(res[i].lower)},
                           {"upper", json_number(res[i].upper)},
                           {"symmetric", res[i].symmetric},
                           {"diagnostics", diagnostics_json(res[i].diagnostics)}});
        }
        return ordered_json{{"contracts", arr}}.dump(2) + "\n";
    }
    const Row header{"contract", "kind", "lower", "upper", "symmetric", "method"};
    std::vector<Row> rows;
    for (std::size_t i = 0; i < res.size(); ++i) {
        rows.push_back({cfg.contracts[i].name, cfg.contracts[i].kind, fmt12(res[i].lower), fmt12(res[i].upper),
                        res[i].symmetric ? "true" : "false", method_of(res[i])});
    }
    if (opt.format == OutputFormat::csv) return render_csv(header, rows);
    std::string out = render_table(header, rows);
    std::string notes;
    for (std::size_t i = 0; i < res.size(); ++i) {
        for (const auto& [k, v] : res[i].diagnostics) {
            if (k != "method") notes += "  " + cfg.contracts[i].name + ": " + k + " = " + v + "\n";
        }
    }
    if (!notes.empty()) out += "\ndiagnostics:\n" + notes;
    return out;
}

std::string stress_report(const Config& cfg, double eps, const RunOptions& opt)
{
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("--epsilon", "must lie in (0, 1), got " + fmt12(eps));
    const std::size_t d = cfg.vs.dimension();
    const auto classical = price_under(cfg, UncertaintyBand::point(std::vector<double>(d, 1.0)), opt);
    const auto stressed = price_under(cfg, UncertaintyBand::stress(d, eps), opt);

    std::vector<double> rel(classical.size());
    for (std::size_t i = 0; i < rel.size(); ++i) {
        const double half = stressed[i].half_spread();
        const double base = std::abs(classical[i].mid());
        rel[i] = half == 0.0 ? 0.0 : (base > 0.0 ? half / base : std::numeric_limits<double>::infinity());
    }
    if (opt.format == OutputFormat::json) {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < rel.size(); ++i) {
            arr.push_back({{"name", cfg.contracts[i].name},
                           {"kind", cfg.contracts[i].kind},
                           {"classical", json_number(classical[i].mid())},
                           {"lower", json_number(stressed[i].lower)},
                           {"upper", json_number(stressed[i].upper)},
                           {"relative_half_spread", json_number(rel[i])}});
        }
        return ordered_json{{"epsilon", json_number(eps)}, {"contracts", arr}}.dump(2) + "\n";
    }
    const Row header{"contract", "kind", "classical", "lower", "upper", "rel_half_spread"};
    std::vector<Row> rows;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        rows.push_back({cfg.contracts[i].name, cfg.contracts[i].kind, fmt12(classical[i].mid()),
                        fmt12(stressed[i].lower), fmt12(stressed[i].upper), fmt12(rel[i])});
    }
    if (opt.format == OutputFormat::csv) return render_csv(header, rows);
    return "stress band [1 - " + fmt12(eps) + ", 1 + " + fmt12(eps) + "]\n" + render_table(header, rows);
}

std::string verify_report(std::string_view suite, const std::vector<Check>& checks, OutputFormat format)
{
    const auto passed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    if (format == OutputFormat::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks) {
            arr.push_back({{"check", c.name},
                           {"value", json_number(c.value)},
                           {"reference", json_number(c.reference)},
                           {"error", json_number(c.error)},
                           {"tolerance", json_number(c.tolerance)},
                           {"margin", json_number(c.margin())},
                           {"pass", c.pass}});
        }
        return ordered_json{{"suite", std::string(suite)},
                            {"passed", passed},
                            {"total", checks.size()},
                            {"checks", arr}}
                   .dump(2) +
               "\n";
    }
    const Row header{"check", "value", "reference", "error", "tolerance", "margin", "status"};
    std::vector<Row> rows;
    for (const auto& c : checks) {
        rows.push_back({c.name, fmt12(c.value), fmt12(c.reference), fmt12(c.error), fmt12(c.tolerance),
                        fmt12(c.margin()), c.pass ? "PASS" : "FAIL"});
    }
    if (format == OutputFormat::csv) return render_csv(header, rows);
    return "suite " + std::string(suite) + "\n" + render_table(header, rows) + std::to_string(passed) + "/" +
           std::to_string(checks.size()) + " checks passed\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Robust interest-rate pricing under volatility uncertainty", "robust_rates"};
    app.require_subcommand(1);
    std::string format = "table";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "Monte Carlo seed (overrides the config)");
    app.add_option("--threads", threads, "Worker threads (default: ROBUST_RATES_THREADS, else 1)")
        ->check(CLI::PositiveNumber);

    std::string config_path;
    auto* price = app.add_subcommand("price", "Price every contract in a config");
    price->add_option("config", config_path, "Config file (JSON)")->required();

    double eps = 0.0;
    auto* stress = app.add_subcommand("stress", "Reprice under the band [1 - eps, 1 + eps] around unit volatility");
    stress->add_option("config", config_path, "Config file (JSON)")->required();
    stress->add_option("--epsilon", eps, "Band half-width, 0 < eps < 1")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a property suite over the built-in fixtures");
    verify->add_option("suite", suite, "parity | sublinearity | oracle | expectations-hypothesis | convergence")
        ->required();

    for (auto* sub : {price, stress, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    RunOptions opt;
    try {
        opt.format = parse_output_format(format);
        opt.seed = seed;
        opt.threads = resolve_threads(threads);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (verify->parsed()) {
        const auto& names = verify_suites();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
            err << "error: unknown suite '" << suite << "'\n";
            return 2;
        }
        McConfig mc;
        if (seed) mc.seed = *seed;
        mc.threads = opt.threads;
        try {
            const auto checks = run_suite(suite, mc);
            out << verify_report(suite, checks, opt.format);
            return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }) ? 0 : 1;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 3;
        }
    }

    std::optional<Config> cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        if (stress->parsed()) {
            out << stress_report(*cfg, eps, opt);
        } else {
            out << price_report(*cfg, opt);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "pricing error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace rr
