#ifndef GCRM_DIRICHLET_HPP
#define GCRM_DIRICHLET_HPP

#include <vector>

#include "gcrm/base_distribution.hpp"
#include "gcrm/rng.hpp"

namespace gcrm {

/// Law of the random mean M = int s p(ds) of a Dirichlet process p with total
/// mass theta and finite-support base measure on [0,1].
struct DirichletMeanSpec {
    double theta;
    BaseDistribution base;

    DirichletMeanSpec(double theta_, BaseDistribution base_);
};

/// Exact moments E[M^1], ..., E[M^n_max] via the self-similarity recursion
///   E[M^n] * n / (theta + n)
///     = sum_{j=1}^{n} C(n,j) * j! (theta)_{n-j} / (1+theta)_n * m_j * E[M^{n-j}]
/// with m_j the j-th base moment. Requires 1 <= n_max <= 64.
std::vector<double> mean_moments(const DirichletMeanSpec& spec, int n_max);

/// Which Bell-polynomial argument weighting to use in mean_moments_bell.
/// Cyclic, x_j = (j-1)! theta m_j, reproduces the recursion exactly.
/// Factorial, x_j = j! theta m_j, is kept only so reports can show how far the
/// alternative normalisation drifts; it fails the point-mass consistency check.
enum class BellWeighting { Cyclic, Factorial };

/// Moments via the combinatorial route
///   E[M^n] = (theta)_n^{-1} sum_{k=1}^{n} B_{n,k}(x_1, ..., x_{n-k+1}).
std::vector<double> mean_moments_bell(const DirichletMeanSpec& spec, int n_max,
                                      BellWeighting weighting = BellWeighting::Cyclic);

/// One stick-breaking draw of M, truncated once the residual stick mass drops
/// below eps (0 < eps < 1); the residual is assigned to a final base draw, so
/// the result is an exact convex combination and the truncation bias is <= eps.
double sample_dirichlet_mean(const DirichletMeanSpec& spec, double eps, RandomStream& rng);

namespace detail {
/// Moment recursion without the public n_max cap; the Laplace-ratio series
/// needs cell moments past order 64.
std::vector<double> mean_moments_unchecked(const DirichletMeanSpec& spec, int n_max);
}

struct StieltjesGap {
    double lhs;       // Monte Carlo estimate of E[(1 - lambda M)^(-theta)]
    double lhs_se;    // standard error of the estimate
    double rhs;       // exp(-theta int log(1 - lambda s) base(ds)), exact
};

/// Both sides of the Markov-Krein identity E[(1-lambda M)^(-theta)] =
/// exp(-theta int log(1-lambda s) base(ds)). Requires 1 - lambda s > 0 on the
/// whole support.
StieltjesGap stieltjes_identity_gap(const DirichletMeanSpec& spec, double lambda,
                                    RandomStream& rng, long long draws = 100000);

} // namespace gcrm

#endif
