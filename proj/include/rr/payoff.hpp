#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rr {

/// Constants (C, m) of |phi(x) - phi(y)| <= C (1 + |x|^m + |y|^m) |x - y|.
struct GrowthCertificate {
    double C = 1.0;
    int m = 1;
};

enum class Convexity { convex, concave, general };

Convexity parse_convexity(std::string_view name);
std::string_view to_string(Convexity c);

/// Scalar payoff of a single forward price with its growth certificate.
/// `kinks` lists points where phi is not smooth so quadrature can split
/// there; `shape` is what the payoff constructor knows about curvature.
struct PayoffSpec {
    std::function<double(double)> evaluator;
    std::optional<GrowthCertificate> growth;
    std::vector<double> kinks;
    Convexity shape = Convexity::general;
    std::string description;

    double operator()(double x) const { return evaluator(x); }
    /// Throws ValidationError when the certificate is missing or malformed.
    void require_certificate() const;
};

namespace payoffs {

/// scale * (K - x)^+
PayoffSpec put(double strike, double scale = 1.0);
/// scale * (x - K)^+
PayoffSpec call(double strike, double scale = 1.0);
/// min((x - K)^+, cap)
PayoffSpec capped_call_spread(double strike, double cap);
PayoffSpec affine(double slope, double intercept);
PayoffSpec quadratic(double a, double b, double c);
/// Linear interpolation through (x, y) points, linear extrapolation beyond.
PayoffSpec piecewise_linear(std::vector<std::pair<double, double>> points);
PayoffSpec negate(const PayoffSpec& p);
PayoffSpec scale(const PayoffSpec& p, double factor);

} // namespace payoffs

/// Three-point chord test on random triples in [lo, hi]. Returns false if
/// any triple contradicts the declared tag. `general` always passes.
bool chord_check(const PayoffSpec& p, Convexity declared, double lo, double hi,
                 std::uint64_t seed = 7, int triples = 3);

} // namespace rr
