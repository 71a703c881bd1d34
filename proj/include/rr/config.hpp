#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rr/curve.hpp"
#include "rr/linear_pricing.hpp"
#include "rr/pde_engine.hpp"
#include "rr/robust_options.hpp"
#include "rr/stream_engine.hpp"
#include "rr/uncertainty.hpp"
#include "rr/vol_structure.hpp"

namespace rr {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what)
        , field_(field)
    {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Single option on one forward price: phi(X_{t1}^{T,T_i}) under the
/// forward expectation at T, priced by the pde engine.
struct ForwardOption {
    double T;
    double t1;
    double underlying;
    PayoffSpec payoff;
    double notional = 1.0;
};

struct ContractEntry {
    std::string name;
    std::string kind;
    std::variant<LinearContract, OptionContract, CashflowStream, ForwardOption> contract;
    SwaptionMethod swaption_method = SwaptionMethod::automatic;
    StreamMethod stream_method = StreamMethod::automatic;

    double notional() const;
};

struct Config {
    DiscountCurve curve;
    VolStructure vs;
    UncertaintyBand band;
    McConfig mc;
    PDEGrid pde;
    StateGrid state;
    std::vector<ContractEntry> contracts;
};

/// Relative file references inside the config resolve against `base_dir`.
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir = ".");
Config load_config(const std::filesystem::path& path);

/// Prices one entry under `band` (contract notional applied).
PriceBounds price_entry(const Config& cfg, const ContractEntry& entry, const UncertaintyBand& band,
                        const McConfig& mc);

} // namespace rr
