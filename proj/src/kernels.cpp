#include "gcrm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcrm/dirichlet.hpp"
#include "gcrm/specfun.hpp"

namespace gcrm {

PartitionSpec::PartitionSpec(std::vector<double> alphas_, double total_mass_)
    : alphas(std::move(alphas_)), total_mass(total_mass_) {
    if (alphas.empty())
        throw std::domain_error("PartitionSpec: needs at least one cell");
    if (!(total_mass > 0.0) || !std::isfinite(total_mass))
        throw std::domain_error("PartitionSpec: total mass must be positive");
    double sum = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::domain_error("PartitionSpec: every cell mass must be positive");
        sum += a;
    }
    if (sum > total_mass * (1.0 + 1e-12))
        throw std::domain_error("PartitionSpec: cell masses exceed total mass");
}

CorrelationIndex::CorrelationIndex(std::vector<int> n_) : n(std::move(n_)) {
    for (int v : n)
        if (v < 0)
            throw std::domain_error("CorrelationIndex: entries must be nonnegative");
}

int CorrelationIndex::total() const {
    int t = 0;
    for (int v : n)
        t += v;
    return t;
}

namespace {

double checked_unit(double v, const char* what) {
    if (!(v >= 0.0) || !(v <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
    return v;
}

// E[Z^m] of the shared constant for a RandomConstant kernel.
double random_constant_moment(const RandomConstant& rc, int m) {
    if (const auto* beta = std::get_if<BetaLaw>(&rc.law))
        return std::exp(log_pochhammer(beta->a, m) - log_pochhammer(beta->a + beta->b, m));
    return std::get<BaseDistribution>(rc.law).moment(m);
}

} // namespace

void validate_kernel(const PartitionSpec& part, const DirectingKernel& kernel) {
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, DegenerateConstant>) {
                checked_unit(k.z, "DegenerateConstant: z");
            } else if constexpr (std::is_same_v<T, PerCellDistribution>) {
                if (k.cell_bases.size() != part.dim())
                    throw std::domain_error("PerCellDistribution: one base per cell required");
                for (const auto& base : k.cell_bases)
                    if (!base.in_unit_interval())
                        throw std::domain_error("PerCellDistribution: support must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, RandomConstant>) {
                if (const auto* beta = std::get_if<BetaLaw>(&k.law)) {
                    if (!(beta->a > 0.0) || !(beta->b > 0.0))
                        throw std::domain_error("RandomConstant: beta parameters must be positive");
                } else if (!std::get<BaseDistribution>(k.law).in_unit_interval()) {
                    throw std::domain_error("RandomConstant: support must lie in [0,1]");
                }
            } else if constexpr (std::is_same_v<T, CommonComponent>) {
                if (!(k.eta > 0.0) || !(k.eta < 1.0))
                    throw std::domain_error("CommonComponent: eta must lie in (0,1)");
            }
        },
        kernel);
}

double canonical_corr_exact(const PartitionSpec& part, const DirectingKernel& kernel,
                            const CorrelationIndex& n) {
    if (n.dim() != part.dim())
        throw std::domain_error("canonical_corr_exact: index/partition dimension mismatch");
    validate_kernel(part, kernel);

    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, DegenerateConstant>) {
                int total = n.total();
                return total == 0 ? 1.0 : std::pow(k.z, total);
            } else if constexpr (std::is_same_v<T, PerCellDistribution>) {
                double prod = 1.0;
                for (std::size_t i = 0; i < part.dim(); ++i) {
                    if (n.n[i] == 0)
                        continue;
                    DirichletMeanSpec spec(part.alphas[i], k.cell_bases[i]);
                    prod *= detail::mean_moments_unchecked(spec, n.n[i])[n.n[i] - 1];
                }
                return prod;
            } else if constexpr (std::is_same_v<T, RandomConstant>) {
                return random_constant_moment(k, n.total());
            } else {
                double prod = 1.0;
                for (std::size_t i = 0; i < part.dim(); ++i) {
                    if (n.n[i] == 0)
                        continue;
                    prod *= std::exp(log_pochhammer(k.eta * part.alphas[i], n.n[i])
                                     - log_pochhammer(part.alphas[i], n.n[i]));
                }
                return prod;
            }
        },
        kernel);
}

double merge_corr(const PartitionSpec& part, const DirectingKernel& kernel, int n,
                  std::size_t i, std::size_t j) {
    if (i == j || i >= part.dim() || j >= part.dim())
        throw std::domain_error("merge_corr: need two distinct valid cells");
    if (n < 0)
        throw std::domain_error("merge_corr: degree must be nonnegative");
    const double ai = part.alphas[i];
    const double aj = part.alphas[j];
    const double log_denom = log_pochhammer(ai + aj, n);
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        CorrelationIndex idx(std::vector<int>(part.dim(), 0));
        idx.n[i] = k;
        idx.n[j] = n - k;
        double logw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)
                    + log_pochhammer(ai, k) + log_pochhammer(aj, n - k) - log_denom;
        acc += std::exp(logw) * canonical_corr_exact(part, kernel, idx);
    }
    return acc;
}

std::pair<PartitionSpec, DirectingKernel> merged_cell(const PartitionSpec& part,
                                                      const DirectingKernel& kernel,
                                                      std::size_t i, std::size_t j) {
    if (i == j || i >= part.dim() || j >= part.dim())
        throw std::domain_error("merged_cell: need two distinct valid cells");
    validate_kernel(part, kernel);
    const double ai = part.alphas[i];
    const double aj = part.alphas[j];
    PartitionSpec merged({ai + aj}, part.total_mass);

    DirectingKernel merged_kernel = std::visit(
        [&](const auto& k) -> DirectingKernel {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PerCellDistribution>) {
                // base of the union cell is the mass-weighted mixture
                std::vector<Atom> atoms;
                for (const Atom& a : k.cell_bases[i].atoms())
                    atoms.push_back({a.location, a.weight * ai / (ai + aj)});
                for (const Atom& a : k.cell_bases[j].atoms())
                    atoms.push_back({a.location, a.weight * aj / (ai + aj)});
                return PerCellDistribution{{BaseDistribution(std::move(atoms))}};
            } else {
                return k;
            }
        },
        kernel);
    return {std::move(merged), std::move(merged_kernel)};
}

namespace {

// Coefficients a_n = (alpha)_n theta^n / n! for n = 0..trunc.
std::vector<double> cell_series_coeffs(double alpha, double theta, int trunc) {
    std::vector<double> a(trunc + 1, 0.0);
    a[0] = 1.0;
    for (int n = 1; n <= trunc; ++n)
        a[n] = a[n - 1] * (alpha + n - 1.0) * theta / n;
    return a;
}

} // namespace

LaplaceRatio joint_laplace_ratio_with_bound(const PartitionSpec& part,
                                            const DirectingKernel& kernel,
                                            std::span<const double> s,
                                            std::span<const double> t, int trunc) {
    const std::size_t d = part.dim();
    if (s.size() != d || t.size() != d)
        throw std::domain_error("joint_laplace_ratio: argument dimension mismatch");
    if (trunc < 0 || trunc > 200)
        throw std::domain_error("joint_laplace_ratio: trunc must be in [0, 200]");
    validate_kernel(part, kernel);

    std::vector<double> theta(d);
    double full_dominating = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (s[i] < 0.0 || t[i] < 0.0)
            throw std::domain_error("joint_laplace_ratio: s and t must be nonnegative");
        theta[i] = s[i] * t[i] / ((1.0 + s[i]) * (1.0 + t[i]));
        if (!(theta[i] < 1.0))
            throw std::domain_error("joint_laplace_ratio: theta >= 1, series diverges");
        full_dominating *= std::pow(1.0 - theta[i], -part.alphas[i]);
    }

    std::vector<std::vector<double>> coeffs(d);
    for (std::size_t i = 0; i < d; ++i)
        coeffs[i] = cell_series_coeffs(part.alphas[i], theta[i], trunc);

    if (const auto* rc = std::get_if<RandomConstant>(&kernel)) {
        // rho depends only on |n|: convolve the cell coefficient arrays over
        // the simplex |n| <= trunc, then weight by the shared moments.
        std::vector<double> conv = coeffs[0];
        for (std::size_t i = 1; i < d; ++i) {
            std::vector<double> next(trunc + 1, 0.0);
            for (int m = 0; m <= trunc; ++m) {
                if (conv[m] == 0.0)
                    continue;
                for (int nn = 0; m + nn <= trunc; ++nn)
                    next[m + nn] += conv[m] * coeffs[i][nn];
            }
            conv = std::move(next);
        }
        double value = 0.0, truncated_dominating = 0.0;
        for (int m = 0; m <= trunc; ++m) {
            value += random_constant_moment(*rc, m) * conv[m];
            truncated_dominating += conv[m];
        }
        return {value, std::max(0.0, full_dominating - truncated_dominating)};
    }

    // remaining kernels factorise across cells
    double value = 1.0, truncated_dominating = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> rho(trunc + 1, 1.0);
        if (const auto* deg = std::get_if<DegenerateConstant>(&kernel)) {
            for (int nn = 1; nn <= trunc; ++nn)
                rho[nn] = rho[nn - 1] * deg->z;
        } else if (const auto* pc = std::get_if<PerCellDistribution>(&kernel)) {
            DirichletMeanSpec spec(part.alphas[i], pc->cell_bases[i]);
            std::vector<double> mom = detail::mean_moments_unchecked(spec, trunc);
            for (int nn = 1; nn <= trunc; ++nn)
                rho[nn] = mom[nn - 1];
        } else {
            const auto& cc = std::get<CommonComponent>(kernel);
            for (int nn = 1; nn <= trunc; ++nn)
                rho[nn] = std::exp(log_pochhammer(cc.eta * part.alphas[i], nn)
                                   - log_pochhammer(part.alphas[i], nn));
        }
        double cell_sum = 0.0, cell_dom = 0.0;
        for (int nn = 0; nn <= trunc; ++nn) {
            cell_sum += rho[nn] * coeffs[i][nn];
            cell_dom += coeffs[i][nn];
        }
        value *= cell_sum;
        truncated_dominating *= cell_dom;
    }
    return {value, std::max(0.0, full_dominating - truncated_dominating)};
}

double joint_laplace_ratio(const PartitionSpec& part, const DirectingKernel& kernel,
                           std::span<const double> s, std::span<const double> t, int trunc) {
    return joint_laplace_ratio_with_bound(part, kernel, s, t, trunc).value;
}

double extreme_pair_density(double x, double y, double z, double alpha) {
    if (!(x > 0.0) || !(y > 0.0))
        throw std::domain_error("extreme_pair_density: x and y must be positive");
    if (!(z > 0.0) || !(z < 1.0))
        throw std::domain_error("extreme_pair_density: z must lie in (0,1)");
    if (!(alpha > 0.0))
        throw std::domain_error("extreme_pair_density: alpha must be positive");
    const double omz = 1.0 - z;
    const double w = 2.0 * std::sqrt(x * y * z) / omz;
    const double log_bessel = std::log(bessel_i(alpha - 1.0, w));
    const double log_pref = 0.5 * (alpha - 1.0) * (std::log(x) + std::log(y) - std::log(z))
                          - std::lgamma(alpha) - std::log(omz) - (x + y) / omz;
    return std::exp(log_pref + log_bessel);
}

double conditional_laplace_extreme(double s, double x, double z, double alpha) {
    if (s < 0.0 || x < 0.0)
        throw std::domain_error("conditional_laplace_extreme: s and x must be nonnegative");
    checked_unit(z, "conditional_laplace_extreme: z");
    if (!(alpha > 0.0))
        throw std::domain_error("conditional_laplace_extreme: alpha must be positive");
    const double denom = 1.0 + s * (1.0 - z);
    return std::pow(denom, -alpha) * std::exp(-x * s * z / denom);
}

} // namespace gcrm
