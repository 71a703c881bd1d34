#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rr/robust_options.hpp"

namespace rr {

/// One numerical check: `error` is compared against `tolerance`. For
/// ordering checks `error` is the violation (<= 0 passes with tolerance 0).
struct Check {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    double margin() const { return tolerance - error; }
};

inline const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> names{"parity", "sublinearity", "oracle",
                                                "expectations-hypothesis", "convergence"};
    return names;
}

/// Runs a named property suite over the built-in fixtures. Unknown names
/// throw ValidationError. Monte Carlo checks use `mc` (seed, threads).
std::vector<Check> run_suite(std::string_view suite, const McConfig& mc);

std::vector<Check> verify_parity();
std::vector<Check> verify_sublinearity();
std::vector<Check> verify_oracle(const McConfig& mc);
std::vector<Check> verify_expectations_hypothesis(const McConfig& mc);
std::vector<Check> verify_convergence();

} // namespace rr
