#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rr {

double normal_cdf(double x);
double normal_pdf(double x);

/// Undiscounted lognormal put E[(K - X)^+], X = x exp(v Z - v^2 / 2).
/// `stdev` is the total log standard deviation v; v = 0 gives intrinsic.
double lognormal_put(double forward, double strike, double stdev);
double lognormal_call(double forward, double strike, double stdev);

/// E[f(x exp(v Z - v^2/2))] by composite Gauss-Legendre on z in [-12, 12],
/// with panel edges placed at the images of `kinks` so piecewise smooth
/// payoffs integrate to near machine precision.
double lognormal_expectation(const std::function<double(double)>& f, double forward, double stdev,
                             std::span<const double> kinks = {});

/// Nodes/weights for E[f(Z)], Z ~ N(0,1): sum_k w_k f(z_k).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    double expectation(F&& f) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
        return acc;
    }
};

/// n-point Gauss-Hermite rule in probabilists' normalisation (cached per n).
const GaussHermiteRule& gauss_hermite(int n);

/// Solves a tridiagonal system in place (Thomas). sub[0] and sup[n-1] unused.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<double> rhs);

/// Lower-triangular factor L with L L' = A for symmetric positive
/// semidefinite A (row-major n x n). Non-positive pivots are zeroed so
/// rank-deficient covariances factor cleanly.
std::vector<double> psd_cholesky(std::span<const double> a, std::size_t n);

/// Pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);

/// Mean and standard error of the mean.
struct SampleStats {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};
SampleStats sample_stats(std::span<const double> v);

/// Linear interpolation on an increasing grid, linear extrapolation beyond.
double interp_linear(std::span<const double> x, std::span<const double> y, double at);

} // namespace rr
