#ifndef GCRM_KERNELS_HPP
#define GCRM_KERNELS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gcrm/base_distribution.hpp"

namespace gcrm {

/// Finite disjoint partition observed through its gamma parameter masses
/// alpha_i, together with the total mass c. sum alpha_i <= c; a strict
/// inequality means the partition does not exhaust the space.
struct PartitionSpec {
    std::vector<double> alphas;
    double total_mass;

    PartitionSpec(std::vector<double> alphas_, double total_mass_);
    std::size_t dim() const { return alphas.size(); }
};

/// Per-cell polynomial degrees of a canonical correlation coefficient.
struct CorrelationIndex {
    std::vector<int> n;

    CorrelationIndex() = default;
    explicit CorrelationIndex(std::vector<int> n_);
    int total() const;
    std::size_t dim() const { return n.size(); }
};

/// Directing kernel variants. Each one fixes the joint law of the per-cell
/// correlation variables (Z_1, ..., Z_d) in [0,1]^d:
///  - DegenerateConstant: Z_i = z for every cell.
///  - PerCellDistribution: Z_i independent Dirichlet means, cell i having
///    total mass alpha_i and the given base.
///  - RandomConstant: one shared random Z, either finite-support or Beta(a,b)
///    (the Beta case is kept exact through Pochhammer ratios).
///  - CommonComponent: Z_i independent Beta(eta alpha_i, (1-eta) alpha_i);
///    equivalently the additive model with a shared gamma component of
///    fractional mass eta.
struct DegenerateConstant {
    double z; // in [0,1]
};

struct PerCellDistribution {
    std::vector<BaseDistribution> cell_bases;
};

struct BetaLaw {
    double a;
    double b;
};

struct RandomConstant {
    std::variant<BaseDistribution, BetaLaw> law;
};

struct CommonComponent {
    double eta; // in (0,1)
};

using DirectingKernel =
    std::variant<DegenerateConstant, PerCellDistribution, RandomConstant, CommonComponent>;

void validate_kernel(const PartitionSpec& part, const DirectingKernel& kernel);

/// Exact canonical correlation rho_n for the given kernel.
double canonical_corr_exact(const PartitionSpec& part, const DirectingKernel& kernel,
                            const CorrelationIndex& n);

/// Beta-binomial mixture
///   sum_{k=0}^{n} C(n,k) (a_i)_k (a_j)_{n-k} / (a_i + a_j)_n rho_{k,n-k}
/// over cells i != j; consistency requires it to equal the degree-n
/// correlation of the merged cell.
double merge_corr(const PartitionSpec& part, const DirectingKernel& kernel, int n,
                  std::size_t i, std::size_t j);

/// Single-cell partition and kernel describing the union of cells i and j.
std::pair<PartitionSpec, DirectingKernel> merged_cell(const PartitionSpec& part,
                                                      const DirectingKernel& kernel,
                                                      std::size_t i, std::size_t j);

struct LaplaceRatio {
    double value;
    double tail_bound; // truncation tail of the dominating rho == 1 series
};

/// Joint Laplace transform ratio phi(f,g) / (phi(f) phi(g)) evaluated on the
/// partition, as the truncated series
///   sum_n rho_n prod_i (alpha_i)_{n_i} theta_i^{n_i} / n_i!
/// with theta_i = s_i t_i / ((1+s_i)(1+t_i)). trunc <= 200.
LaplaceRatio joint_laplace_ratio_with_bound(const PartitionSpec& part,
                                            const DirectingKernel& kernel,
                                            std::span<const double> s,
                                            std::span<const double> t, int trunc);

double joint_laplace_ratio(const PartitionSpec& part, const DirectingKernel& kernel,
                           std::span<const double> s, std::span<const double> t, int trunc);

/// Bivariate density of a gamma pair with extreme correlation sequence z^n,
/// normalised so it integrates to 1 (Kibble form):
///   (xy)^{(alpha-1)/2} z^{-(alpha-1)/2} / (Gamma(alpha)(1-z))
///     * exp(-(x+y)/(1-z)) * I_{alpha-1}(2 sqrt(xyz)/(1-z)).
/// Requires x, y > 0 and z in (0,1).
double extreme_pair_density(double x, double y, double z, double alpha);

/// Conditional Laplace transform E[e^{-sY} | X = x] of the extreme pair:
///   (1 + s(1-z))^(-alpha) exp(-x s z / (1 + s(1-z))).
double conditional_laplace_extreme(double s, double x, double z, double alpha);

} // namespace gcrm

#endif
