#include "gcrm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gcrm {

PolyIndex::PolyIndex(int n_, double alpha_) : n(n_), alpha(alpha_) {
    if (n < 0)
        throw std::domain_error("PolyIndex: degree must be nonnegative");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("PolyIndex: alpha must be positive");
}

double log_pochhammer(double alpha, int n) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("log_pochhammer: alpha must be positive");
    if (n < 0)
        throw std::domain_error("log_pochhammer: n must be nonnegative");
    if (n == 0)
        return 0.0;
    return std::lgamma(alpha + n) - std::lgamma(alpha);
}

double pochhammer(double alpha, int n) {
    double lp = log_pochhammer(alpha, n);
    if (lp > std::log(std::numeric_limits<double>::max()))
        throw std::range_error("pochhammer: value exceeds double range");
    return std::exp(lp);
}

double laguerre_tilde(const PolyIndex& idx, double x) {
    if (idx.n == 0)
        return 1.0;
    double pm = 1.0;            // p_0
    double p = x - idx.alpha;   // p_1
    for (int k = 1; k < idx.n; ++k) {
        double next = (x - (2.0 * k + idx.alpha)) * p - k * (k + idx.alpha - 1.0) * pm;
        pm = p;
        p = next;
    }
    return p;
}

double log_laguerre_norm(const PolyIndex& idx) {
    return std::lgamma(idx.n + 1.0) + log_pochhammer(idx.alpha, idx.n);
}

double laguerre_norm(const PolyIndex& idx) {
    double lc = log_laguerre_norm(idx);
    if (lc > std::log(std::numeric_limits<double>::max()))
        throw std::range_error("laguerre_norm: value exceeds double range");
    return std::exp(lc);
}

double laguerre_laplace(const PolyIndex& idx, double t) {
    if (t < 0.0 || !std::isfinite(t))
        throw std::domain_error("laguerre_laplace: t must be nonnegative");
    if (idx.n == 0)
        return std::pow(1.0 + t, -idx.alpha);
    if (t == 0.0)
        return 0.0;
    // sign (-1)^n tracked apart from the log-space magnitude
    double logmag = log_pochhammer(idx.alpha, idx.n)
                  + idx.n * (std::log(t) - std::log1p(t))
                  - idx.alpha * std::log1p(t);
    double sign = (idx.n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(logmag);
}

double laguerre_genfun_partial(double alpha, double r, double x, int n_terms) {
    if (!(alpha > 0.0))
        throw std::domain_error("laguerre_genfun_partial: alpha must be positive");
    if (n_terms < 0)
        throw std::domain_error("laguerre_genfun_partial: n_terms must be nonnegative");
    // t_k = p_k(x) r^k / k!, accumulated through the scaled recurrence so the
    // factorially large polynomial values never appear explicitly.
    double sum = 1.0; // t_0
    if (n_terms == 0)
        return sum;
    double tm = 1.0;
    double t = (x - alpha) * r;
    sum += t;
    for (int k = 1; k < n_terms; ++k) {
        double next = ((x - (2.0 * k + alpha)) * r * t - (k + alpha - 1.0) * r * r * tm) / (k + 1.0);
        tm = t;
        t = next;
        sum += t;
    }
    return sum;
}

double bessel_i(double nu, double x) {
    if (!(nu > -1.0))
        throw std::domain_error("bessel_i: order must exceed -1");
    if (x < 0.0 || !std::isfinite(x))
        throw std::domain_error("bessel_i: argument must be nonnegative");
    if (x > 700.0)
        throw std::range_error("bessel_i: argument too large for series evaluation");
    if (x == 0.0) {
        if (nu == 0.0)
            return 1.0;
        if (nu > 0.0)
            return 0.0;
        throw std::domain_error("bessel_i: negative order at x = 0 diverges");
    }
    double half = 0.5 * x;
    double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
    double sum = term;
    double q = half * half;
    for (int k = 1; k < 20000; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (term < 1e-16 * sum)
            return sum;
    }
    return sum;
}

double bell_partial(int n, int k, std::span<const double> args) {
    if (n < 1 || k < 1 || k > n)
        throw std::domain_error("bell_partial: require 1 <= k <= n");
    if (args.size() != static_cast<std::size_t>(n - k + 1))
        throw std::domain_error("bell_partial: expected n - k + 1 arguments");
    // B[m][j] over 0 <= j <= m <= n with B[0][0] = 1; only args up to index
    // n - k are ever touched, matching the supplied span.
    std::vector<std::vector<double>> table(n + 1);
    for (int m = 0; m <= n; ++m)
        table[m].assign(std::min(m, k) + 1, 0.0);
    table[0][0] = 1.0;
    std::vector<double> binom(n, 0.0);
    for (int m = 1; m <= n; ++m) {
        // C(m-1, i-1) for i = 1..m
        binom[0] = 1.0;
        for (int i = 1; i < m; ++i)
            binom[i] = binom[i - 1] * (m - i) / i;
        for (int j = 1; j <= std::min(m, k); ++j) {
            if (m - j > n - k)
                continue; // never feeds B_{n,k}; its args lie past the span
            double acc = 0.0;
            for (int i = 1; i <= m - j + 1; ++i)
                acc += binom[i - 1] * args[i - 1] * table[m - i][j - 1];
            table[m][j] = acc;
        }
    }
    return table[n][k];
}

} // namespace gcrm
