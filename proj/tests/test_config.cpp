#include <doctest.h>

#include <string>

#include "rr/config.hpp"

using namespace rr;

namespace {

std::string with_contracts(const std::string& contracts, const std::string& band = R"({"sigma_lower": [0.5], "sigma_upper": [1.5]})")
{
    return R"({"curve": {"flat": 0.02, "horizon": 30},
               "vol_structure": {"factors": [{"kind": "ho-lee", "level": 0.01}]},
               "band": )" +
           band + R"(, "contracts": )" + contracts + "}";
}

std::string field_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("example configs load")
    {
        const auto cfg = load_config(RR_DATA_DIR "/example.json");
        CHECK(cfg.contracts.size() == 9);
        CHECK(cfg.curve.horizon() == 30.0);
        CHECK(cfg.contracts[0].notional() == 100.0);
        CHECK(cfg.contracts[7].kind == "stream");
        CHECK(std::holds_alternative<ForwardOption>(cfg.contracts[8].contract));
        CHECK(cfg.mc.seed == 20240607u);
        CHECK_NOTHROW(load_config(RR_DATA_DIR "/frn_flat.json"));
    }

    TEST_CASE("errors name the offending field")
    {
        CHECK(field_of(R"({"curve": 1})") == "curve");
        CHECK(field_of("{not json") == "config");
        CHECK(field_of(with_contracts(R"([{"kind": "cap", "schedule": [1, 2, 1.5], "strike_rate": 0.04}])")) ==
              "contracts[0].schedule");
        CHECK(field_of(with_contracts(R"([{"kind": "cap", "schedule": [1, 2]}])")) == "contracts[0].strike_rate");
        CHECK(field_of(with_contracts(R"([{"kind": "frn", "schedule": [1, 2]}])")) == "contracts[0].kind");
        CHECK(field_of(with_contracts(R"([{"kind": "payer-swap", "schedule": [1, 40], "fixed_rate": 0.01}])")) ==
              "contracts[0].schedule");
        CHECK(field_of(with_contracts("[]", R"({"sigma_lower": [1.5], "sigma_upper": [0.5]})")) == "band");
        CHECK(field_of(with_contracts("[]", R"({"sigma_lower": [1, 1], "sigma_upper": [1, 1]})")) == "band");
        CHECK(field_of(with_contracts(
                  R"([{"kind": "stream", "schedule": [1, 2], "legs": [{"type": "option", "payoff": {"type": "put"}}]}])")) ==
              "contracts[0].legs[0].payoff.strike");
        CHECK(field_of(with_contracts(
                  R"([{"kind": "swaption-payer", "schedule": [1, 2], "strike_rate": 0.03, "method": "lsm"}])")) ==
              "contracts[0].method");
    }

    TEST_CASE("error message cites the schedule invariant")
    {
        try {
            parse_config(with_contracts(R"([{"kind": "cap", "schedule": [1, 2, 1.5], "strike_rate": 0.04}])"));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("strictly increasing") != std::string::npos);
        }
    }

    TEST_CASE("optional sections")
    {
        const auto cfg = parse_config(R"({"curve": {"knots": [[0, 0.01], [10, 0.03]], "horizon": 20},
            "vol_structure": {"factors": [{"kind": "hull-white", "level": 0.01, "mean_reversion": 0.1}]},
            "band": {"sigma_lower": [0.8], "sigma_upper": [1.2]},
            "mc": {"paths": 5000, "seed": 7, "antithetic": false},
            "pde": {"nx": 201, "nt": 101, "scheme": "explicit", "state_nm": 101, "state_nr": 41},
            "contracts": [{"kind": "forward-option", "T": 1, "t1": 1, "underlying": 2,
                           "payoff": {"type": "piecewise-linear", "points": [[0.9, 0], [1, 0.1], [1.1, 0.1]]}}]})");
        CHECK(cfg.mc.paths == 5000);
        CHECK_FALSE(cfg.mc.antithetic);
        CHECK(cfg.pde.scheme == PdeScheme::explicit_euler);
        CHECK(cfg.state.nm == 101);
        CHECK(cfg.curve.horizon() == 20.0);
    }
}
