#include "rr/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rr/errors.hpp"

namespace rr {

Convexity parse_convexity(std::string_view name)
{
    if (name == "convex") return Convexity::convex;
    if (name == "concave") return Convexity::concave;
    if (name == "general") return Convexity::general;
    throw ValidationError("unknown convexity tag '" + std::string(name) + "'");
}

std::string_view to_string(Convexity c)
{
    switch (c) {
    case Convexity::convex: return "convex";
    case Convexity::concave: return "concave";
    case Convexity::general: return "general";
    }
    return "?";
}

void PayoffSpec::require_certificate() const
{
    if (!evaluator) throw ValidationError("payoff has no evaluator");
    if (!growth) {
        throw ValidationError("payoff '" + description + "' has no growth certificate");
    }
    if (!(growth->C > 0.0) || growth->m < 1) {
        throw ValidationError("payoff '" + description + "' growth certificate needs C > 0, m >= 1");
    }
}

namespace payoffs {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

constexpr double kMinC = 1e-12;

} // namespace

PayoffSpec put(double strike, double scale)
{
    return {[strike, scale](double x) { return scale * std::max(strike - x, 0.0); },
            GrowthCertificate{std::max(std::abs(scale), kMinC), 1},
            {strike},
            scale >= 0.0 ? Convexity::convex : Convexity::concave,
            fmt("%.12g*put(%.12g)", scale, strike)};
}

PayoffSpec call(double strike, double scale)
{
    return {[strike, scale](double x) { return scale * std::max(x - strike, 0.0); },
            GrowthCertificate{std::max(std::abs(scale), kMinC), 1},
            {strike},
            scale >= 0.0 ? Convexity::convex : Convexity::concave,
            fmt("%.12g*call(%.12g)", scale, strike)};
}

PayoffSpec capped_call_spread(double strike, double cap)
{
    if (!(cap > 0.0)) throw ValidationError("capped call spread needs cap > 0");
    return {[strike, cap](double x) { return std::min(std::max(x - strike, 0.0), cap); },
            GrowthCertificate{1.0, 1},
            {strike, strike + cap},
            Convexity::general,
            fmt("min((x-%.12g)^+, %.12g)", strike, cap)};
}

PayoffSpec affine(double slope, double intercept)
{
    return {[slope, intercept](double x) { return slope * x + intercept; },
            GrowthCertificate{std::max(std::abs(slope), kMinC), 1},
            {},
            Convexity::convex,  // also concave; either decoupling is exact
            fmt("%.12g*x%+.12g", slope, intercept)};
}

PayoffSpec quadratic(double a, double b, double c)
{
    return {[a, b, c](double x) { return (a * x + b) * x + c; },
            GrowthCertificate{std::max({std::abs(a), std::abs(b), kMinC}), 1},
            {},
            a >= 0.0 ? Convexity::convex : Convexity::concave,
            fmt("%.12g*x^2%+.12g*x", a, b) + fmt("%+.12g", c)};
}

PayoffSpec piecewise_linear(std::vector<std::pair<double, double>> points)
{
    if (points.size() < 2) throw ValidationError("piecewise-linear payoff needs two points");
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (!(points[k].first > points[k - 1].first)) {
            throw ValidationError("piecewise-linear payoff abscissae must increase");
        }
    }
    double max_slope = kMinC;
    bool convex = true, concave = true;
    double prev_slope = 0.0;
    std::vector<double> kinks;
    for (std::size_t k = 1; k < points.size(); ++k) {
        const double s = (points[k].second - points[k - 1].second) / (points[k].first - points[k - 1].first);
        max_slope = std::max(max_slope, std::abs(s));
        if (k > 1) {
            if (s < prev_slope) convex = false;
            if (s > prev_slope) concave = false;
            kinks.push_back(points[k - 1].first);
        }
        prev_slope = s;
    }
    Convexity shape = convex ? Convexity::convex : concave ? Convexity::concave : Convexity::general;
    auto eval = [pts = std::move(points)](double x) {
        std::size_t k = 0;
        if (x >= pts.back().first) {
            k = pts.size() - 2;
        } else if (x > pts.front().first) {
            k = static_cast<std::size_t>(
                    std::upper_bound(pts.begin(), pts.end(), x,
                                     [](double v, const auto& p) { return v < p.first; }) -
                    pts.begin()) - 1;
        }
        const auto& [x0, y0] = pts[k];
        const auto& [x1, y1] = pts[k + 1];
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
    };
    return {std::move(eval), GrowthCertificate{max_slope, 1}, std::move(kinks), shape,
            "piecewise-linear"};
}

PayoffSpec negate(const PayoffSpec& p)
{
    PayoffSpec out = p;
    out.evaluator = [f = p.evaluator](double x) { return -f(x); };
    out.shape = p.shape == Convexity::convex    ? Convexity::concave
                : p.shape == Convexity::concave ? Convexity::convex
                                                : Convexity::general;
    out.description = "-(" + p.description + ")";
    return out;
}

PayoffSpec scale(const PayoffSpec& p, double factor)
{
    if (factor < 0.0) return scale(negate(p), -factor);
    PayoffSpec out = p;
    out.evaluator = [f = p.evaluator, factor](double x) { return factor * f(x); };
    if (out.growth) out.growth->C = std::max(out.growth->C * factor, kMinC);
    out.description = fmt("%.12g*", factor) + "(" + p.description + ")";
    return out;
}

} // namespace payoffs

bool chord_check(const PayoffSpec& p, Convexity declared, double lo, double hi, std::uint64_t seed,
                 int triples)
{
    if (declared == Convexity::general) return true;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    for (int k = 0; k < triples; ++k) {
        double xs[3] = {u(gen), u(gen), u(gen)};
        std::sort(std::begin(xs), std::end(xs));
        const auto [a, m, b] = xs;
        if (!(b > a)) continue;
        const double w = (m - a) / (b - a);
        const double chord = (1.0 - w) * p(a) + w * p(b);
        const double mid = p(m);
        const double tol = 1e-12 * std::max({1.0, std::abs(chord), std::abs(mid)});
        if (declared == Convexity::convex && mid > chord + tol) return false;
        if (declared == Convexity::concave && mid < chord - tol) return false;
    }
    return true;
}

} // namespace rr
