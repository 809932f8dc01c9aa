#include "gcrm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gcrm {

namespace {

// Symmetric tridiagonal eigensolver (implicit-shift QL, the classical tql2
// routine) tracking only the first component of each eigenvector, which is
// all Golub-Welsch needs for the quadrature weights.
void tridiag_eigen_first_components(std::vector<double>& diag, std::vector<double>& sub,
                                    std::vector<double>& first) {
    const int n = static_cast<int>(diag.size());
    first.assign(n, 0.0);
    if (n == 0)
        return;
    first[0] = 1.0;
    if (n == 1)
        return;

    std::vector<double> e(sub); // e[0..n-2] subdiagonal, e[n-1] spare
    e.push_back(0.0);

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(e[m]) <= 1e-15 * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("tridiag_eigen: too many iterations");
                double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    // rotate the tracked eigenvector row
                    f = first[i + 1];
                    first[i + 1] = s * first[i] + c * f;
                    first[i] = c * first[i] - s * f;
                }
                if (underflow)
                    continue;
                diag[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

QuadratureRule gauss_laguerre(int n, double alpha) {
    if (n < 1)
        throw std::domain_error("gauss_laguerre: need at least one node");
    if (!(alpha > 0.0))
        throw std::domain_error("gauss_laguerre: alpha must be positive");
    // Jacobi matrix of the monic Laguerre recurrence for weight x^(alpha-1)e^-x
    std::vector<double> diag(n), sub(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k)
        diag[k] = 2.0 * k + alpha;
    for (int k = 1; k < n; ++k)
        sub[k - 1] = std::sqrt(k * (k + alpha - 1.0));

    std::vector<double> first;
    tridiag_eigen_first_components(diag, sub, first);

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // normalised to the Gamma(alpha,1) probability measure: mu_0 = 1
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = diag[order[i]];
        rule.weights[i] = first[order[i]] * first[order[i]];
    }
    return rule;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1)
        throw std::domain_error("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule base = gauss_legendre(n);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * base.nodes[i];
        rule.weights[i] = half * base.weights[i];
    }
    return rule;
}

QuadratureRule composite_legendre(double a, double b, int panels, int points) {
    if (panels < 1)
        throw std::domain_error("composite_legendre: need at least one panel");
    QuadratureRule base = gauss_legendre(points);
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * points);
    rule.weights.reserve(static_cast<std::size_t>(panels) * points);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h, half = 0.5 * h;
        for (int i = 0; i < points; ++i) {
            rule.nodes.push_back(mid + half * base.nodes[i]);
            rule.weights.push_back(half * base.weights[i]);
        }
    }
    return rule;
}

} // namespace gcrm
