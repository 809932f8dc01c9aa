#ifndef GCRM_SPECFUN_HPP
#define GCRM_SPECFUN_HPP

#include <cstdint>
#include <span>

namespace gcrm {

/// Degree/shape index of a monic Laguerre polynomial orthogonal under the
/// Gamma(alpha, 1) probability measure.
struct PolyIndex {
    int n;        // degree, n >= 0
    double alpha; // gamma shape, alpha > 0

    PolyIndex(int n_, double alpha_);
};

/// log (alpha)_n, the ascending factorial in log space. alpha > 0.
double log_pochhammer(double alpha, int n);

/// (alpha)_n = Gamma(alpha + n) / Gamma(alpha). Throws std::range_error when
/// the value exceeds double range.
double pochhammer(double alpha, int n);

/// Monic Laguerre polynomial value by the three-term recurrence
///   p_{k+1}(x) = (x - (2k + alpha)) p_k(x) - k (k + alpha - 1) p_{k-1}(x).
double laguerre_tilde(const PolyIndex& idx, double x);

/// Squared norm n! (alpha)_n of the monic polynomial under Gamma(alpha, 1).
double laguerre_norm(const PolyIndex& idx);
double log_laguerre_norm(const PolyIndex& idx);

/// Laplace transform of the monic polynomial against Gamma(alpha, 1):
///   (alpha)_n (-t / (t+1))^n (1+t)^(-alpha),  t >= 0.
double laguerre_laplace(const PolyIndex& idx, double t);

/// Partial sum sum_{k<=n_terms} p_k(x) r^k / k! of the Laguerre generating
/// function; the full series equals (1+r)^(-alpha) exp(x r / (1+r)) for |r|<1.
double laguerre_genfun_partial(double alpha, double r, double x, int n_terms);

/// Modified Bessel function I_nu(x) by power series, nu > -1, 0 <= x <= 700.
/// Terms are accumulated until below 1e-16 of the running sum.
double bessel_i(double nu, double x);

/// Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}),
/// 1 <= k <= n, computed by the recurrence
///   B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i, k-1}.
double bell_partial(int n, int k, std::span<const double> args);

} // namespace gcrm

#endif
