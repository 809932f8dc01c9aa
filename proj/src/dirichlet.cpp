#include "gcrm/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcrm/specfun.hpp"

namespace gcrm {

DirichletMeanSpec::DirichletMeanSpec(double theta_, BaseDistribution base_)
    : theta(theta_), base(std::move(base_)) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::domain_error("DirichletMeanSpec: theta must be positive");
    if (!base.in_unit_interval())
        throw std::domain_error("DirichletMeanSpec: base support must lie in [0,1]");
}

namespace detail {

// Recursion without the public n_max cap; the series machinery in kernels
// needs moments past 64.
std::vector<double> mean_moments_unchecked(const DirichletMeanSpec& spec, int n_max) {
    const double theta = spec.theta;
    std::vector<double> base_moments(n_max + 1, 1.0);
    for (int j = 1; j <= n_max; ++j)
        base_moments[j] = spec.base.moment(j);

    // moments[0] = 1; weight of the j-th term is n!/(n-j)! (theta)_{n-j} / (1+theta)_n
    std::vector<double> moments(n_max + 1, 1.0);
    for (int n = 1; n <= n_max; ++n) {
        double acc = 0.0;
        double log_denom = log_pochhammer(1.0 + theta, n);
        for (int j = 1; j <= n; ++j) {
            double logw = std::lgamma(n + 1.0) - std::lgamma(n - j + 1.0)
                        + log_pochhammer(theta, n - j) - log_denom;
            acc += std::exp(logw) * base_moments[j] * moments[n - j];
        }
        moments[n] = acc * (theta + n) / n;
    }
    return std::vector<double>(moments.begin() + 1, moments.end());
}

} // namespace detail

std::vector<double> mean_moments(const DirichletMeanSpec& spec, int n_max) {
    if (n_max < 1 || n_max > 64)
        throw std::domain_error("mean_moments: n_max must be in [1, 64]");
    return detail::mean_moments_unchecked(spec, n_max);
}

std::vector<double> mean_moments_bell(const DirichletMeanSpec& spec, int n_max,
                                      BellWeighting weighting) {
    if (n_max < 1 || n_max > 64)
        throw std::domain_error("mean_moments_bell: n_max must be in [1, 64]");
    const double theta = spec.theta;
    std::vector<double> moments(n_max);
    for (int n = 1; n <= n_max; ++n) {
        // arguments x_j for j = 1 .. n
        std::vector<double> args(n);
        for (int j = 1; j <= n; ++j) {
            double fac = (weighting == BellWeighting::Cyclic) ? std::lgamma(static_cast<double>(j))
                                                              : std::lgamma(j + 1.0);
            args[j - 1] = std::exp(fac) * theta * spec.base.moment(j);
        }
        double acc = 0.0;
        for (int k = 1; k <= n; ++k)
            acc += bell_partial(n, k, std::span<const double>(args.data(), n - k + 1));
        moments[n - 1] = acc / pochhammer(theta, n);
    }
    return moments;
}

double sample_dirichlet_mean(const DirichletMeanSpec& spec, double eps, RandomStream& rng) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::domain_error("sample_dirichlet_mean: eps must be in (0,1)");
    // GEM(theta) sticks: V ~ Beta(1, theta) by inverse transform. The residual
    // mass at truncation is assigned to one last base draw, so the weights are
    // an exact convex combination.
    double value = 0.0;
    double residual = 1.0;
    const double inv_theta = 1.0 / spec.theta;
    while (residual >= eps) {
        double v = 1.0 - std::pow(1.0 - draw_uniform(rng), inv_theta);
        double weight = residual * v;
        value += weight * spec.base.sample(rng);
        residual -= weight;
    }
    value += residual * spec.base.sample(rng);
    return value;
}

StieltjesGap stieltjes_identity_gap(const DirichletMeanSpec& spec, double lambda,
                                    RandomStream& rng, long long draws) {
    if (draws < 1)
        throw std::domain_error("stieltjes_identity_gap: need at least one draw");
    double log_rhs = 0.0;
    for (const Atom& a : spec.base.atoms()) {
        double arg = 1.0 - lambda * a.location;
        if (!(arg > 0.0))
            throw std::domain_error("stieltjes_identity_gap: 1 - lambda s <= 0 on support");
        log_rhs -= spec.theta * a.weight * std::log(arg);
    }

    long double sum = 0.0L, sumsq = 0.0L;
    for (long long i = 0; i < draws; ++i) {
        double m = sample_dirichlet_mean(spec, 1e-10, rng);
        double s = std::pow(1.0 - lambda * m, -spec.theta);
        sum += s;
        sumsq += static_cast<long double>(s) * s;
    }
    double mean = static_cast<double>(sum / draws);
    double var = draws > 1
        ? static_cast<double>((sumsq - sum * sum / draws) / (draws - 1))
        : 0.0;
    double se = std::sqrt(std::max(var, 0.0) / draws);
    return {mean, se, std::exp(log_rhs)};
}

} // namespace gcrm
