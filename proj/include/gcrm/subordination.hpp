#ifndef GCRM_SUBORDINATION_HPP
#define GCRM_SUBORDINATION_HPP

#include <span>
#include <vector>

#include "gcrm/base_distribution.hpp"
#include "gcrm/kernels.hpp"
#include "gcrm/rng.hpp"

namespace gcrm {

/// Drift plus finite-activity compound Poisson subordinator. The jump law has
/// finite support on (0, inf), so the Laplace exponent is exact.
struct SubordinatorSpec {
    double drift;
    double jump_rate;
    BaseDistribution jump_law;

    SubordinatorSpec(double drift_, double jump_rate_, BaseDistribution jump_law_);

    static SubordinatorSpec pure_drift(double drift_);
};

/// psi(u) = drift u + jump_rate sum_j w_j (1 - e^{-u h_j}); nonnegative,
/// nondecreasing, concave, psi(0) = 0.
double laplace_exponent(const SubordinatorSpec& spec, double u);

/// Increment over a window of length t: drift t plus a compound Poisson sum.
double sample_increment(const SubordinatorSpec& spec, double t, RandomStream& rng);

/// Canonical autocorrelation of the subordinated Dawson-Watanabe process under
/// the convention z_t = e^{-S_t/2} (criticality 1):
///   rho_n(t) = e^{-t psi(|n|/2)}.
/// Satisfies the semigroup identity rho(t+s) = rho(t) rho(s) exactly.
double markov_corr(const SubordinatorSpec& spec, const CorrelationIndex& n, double t);
double markov_corr_total(const SubordinatorSpec& spec, int total_degree, double t);

/// One subordinated transition: S ~ increment(spec, t), then a
/// Dawson-Watanabe step with z = e^{-S/2} (S = 0 copies m unchanged).
std::vector<double> subordinated_dw_step(std::span<const double> m, const PartitionSpec& part,
                                         const SubordinatorSpec& spec, double t,
                                         RandomStream& rng);

/// Poisson continuous-time embedding of a discrete reversible chain whose
/// one-step correlations are extreme with parameter rho1:
///   rho_n(t) = exp(-t gamma_rate (1 - rho1^n)).
double poissonized_corr(double gamma_rate, double rho1, int n, double t);

} // namespace gcrm

#endif
