#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rr/config.hpp"
#include "rr/verify.hpp"

namespace rr {

enum class OutputFormat { table, json, csv };

OutputFormat parse_output_format(std::string_view name);

struct RunOptions {
    OutputFormat format = OutputFormat::table;
    std::optional<std::uint64_t> seed;  // overrides mc.seed
    unsigned threads = 1;
};

/// Pricing failure for one contract; the message names the contract.
class PricingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-unit-notional bounds for every contract, in config order.
std::vector<PriceBounds> price_all(const Config& cfg, const RunOptions& opt);

std::string price_report(const Config& cfg, const RunOptions& opt);
/// Reprices under [1 - eps, 1 + eps]^d. eps outside (0, 1) throws ConfigError.
std::string stress_report(const Config& cfg, double eps, const RunOptions& opt);
std::string verify_report(std::string_view suite, const std::vector<Check>& checks, OutputFormat format);

/// Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 pricing error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rr
