#include "rr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "rr/errors.hpp"

namespace rr {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double lognormal_put(double forward, double strike, double stdev)
{
    if (stdev <= 0.0) return std::max(strike - forward, 0.0);
    const double d1 = (std::log(forward / strike) + 0.5 * stdev * stdev) / stdev;
    const double d2 = d1 - stdev;
    return strike * normal_cdf(-d2) - forward * normal_cdf(-d1);
}

double lognormal_call(double forward, double strike, double stdev)
{
    if (stdev <= 0.0) return std::max(forward - strike, 0.0);
    const double d1 = (std::log(forward / strike) + 0.5 * stdev * stdev) / stdev;
    const double d2 = d1 - stdev;
    return forward * normal_cdf(d1) - strike * normal_cdf(d2);
}

double lognormal_expectation(const std::function<double(double)>& f, double forward, double stdev,
                             std::span<const double> kinks)
{
    if (stdev <= 0.0) return f(forward);
    constexpr double zmax = 12.0;
    std::vector<double> edges{-zmax, zmax};
    for (double k : kinks) {
        if (k <= 0.0) continue;
        const double z = (std::log(k / forward) + 0.5 * stdev * stdev) / stdev;
        if (z > -zmax && z < zmax) edges.push_back(z);
    }
    std::sort(edges.begin(), edges.end());
    const auto integrand = [&](double z) {
        return f(forward * std::exp(stdev * z - 0.5 * stdev * stdev)) * normal_pdf(z);
    };
    double acc = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e];
        const double b = edges[e + 1];
        if (b - a <= 0.0) continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.75)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            acc += boost::math::quadrature::gauss<double, 20>::integrate(integrand, a + p * h,
                                                                          a + (p + 1) * h);
        }
    }
    return acc;
}

namespace {

GaussHermiteRule build_gauss_hermite(int n)
{
    // Golub-Welsch: the Jacobi matrix of the probabilists' Hermite
    // recurrence has off-diagonal sqrt(k); nodes are its eigenvalues and
    // weights the squared first eigenvector components.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("gauss-hermite eigen solve failed");
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = v * v;
    }
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite(int n)
{
    static std::mutex mu;
    static std::map<int, GaussHermiteRule> cache;
    if (n < 1) throw DomainError("gauss-hermite order must be positive");
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_hermite(n)).first;
    return it->second;
}

void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<double> rhs)
{
    const std::size_t n = diag.size();
    std::vector<double> c(n);
    double beta = diag[0];
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
}

std::vector<double> psd_cholesky(std::span<const double> a, std::size_t n)
{
    std::vector<double> l(n * n, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
    const double tiny = 1e-13 * scale;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (d <= tiny) continue;  // column stays zero
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    return l;
}

double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SampleStats sample_stats(std::span<const double> v)
{
    SampleStats s;
    s.count = v.size();
    if (v.empty()) return s;
    s.mean = pairwise_sum(v) / static_cast<double>(v.size());
    if (v.size() < 2) return s;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
    s.standard_error = std::sqrt(var / static_cast<double>(v.size()));
    return s;
}

double interp_linear(std::span<const double> x, std::span<const double> y, double at)
{
    const std::size_t n = x.size();
    if (n == 1) return y[0];
    std::size_t k;
    if (at <= x[0]) {
        k = 0;
    } else if (at >= x[n - 1]) {
        k = n - 2;
    } else {
        k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin()) - 1;
    }
    const double w = (at - x[k]) / (x[k + 1] - x[k]);
    return y[k] + w * (y[k + 1] - y[k]);
}

} // namespace rr
