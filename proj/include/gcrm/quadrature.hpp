#ifndef GCRM_QUADRATURE_HPP
#define GCRM_QUADRATURE_HPP

#include <vector>

namespace gcrm {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss rule for the Gamma(alpha, 1) probability measure (weights sum to 1).
/// Exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_laguerre(int n, double alpha);

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre rule: [a, b] split into `panels` equal panels with
/// `points` nodes each.
QuadratureRule composite_legendre(double a, double b, int panels, int points);

} // namespace gcrm

#endif
