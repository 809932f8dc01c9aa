#include "gcrm/subordination.hpp"

#include <cmath>
#include <stdexcept>

#include "gcrm/samplers.hpp"

namespace gcrm {

SubordinatorSpec::SubordinatorSpec(double drift_, double jump_rate_, BaseDistribution jump_law_)
    : drift(drift_), jump_rate(jump_rate_), jump_law(std::move(jump_law_)) {
    if (drift < 0.0 || !std::isfinite(drift))
        throw std::domain_error("SubordinatorSpec: drift must be finite and nonnegative");
    if (jump_rate < 0.0 || !std::isfinite(jump_rate))
        throw std::domain_error("SubordinatorSpec: jump rate must be finite and nonnegative");
    if (jump_rate > 0.0 && !jump_law.strictly_positive())
        throw std::domain_error("SubordinatorSpec: jump locations must be positive");
}

SubordinatorSpec SubordinatorSpec::pure_drift(double drift_) {
    return SubordinatorSpec(drift_, 0.0, BaseDistribution::point_mass(1.0));
}

double laplace_exponent(const SubordinatorSpec& spec, double u) {
    if (u < 0.0 || !std::isfinite(u))
        throw std::domain_error("laplace_exponent: u must be finite and nonnegative");
    double jumps = 0.0;
    for (const Atom& a : spec.jump_law.atoms())
        jumps += a.weight * (1.0 - std::exp(-u * a.location));
    return spec.drift * u + spec.jump_rate * jumps;
}

double sample_increment(const SubordinatorSpec& spec, double t, RandomStream& rng) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("sample_increment: t must be positive");
    double s = spec.drift * t;
    if (spec.jump_rate > 0.0) {
        long long jumps = draw_poisson(spec.jump_rate * t, rng);
        for (long long k = 0; k < jumps; ++k)
            s += spec.jump_law.sample(rng);
    }
    return s;
}

double markov_corr_total(const SubordinatorSpec& spec, int total_degree, double t) {
    if (total_degree < 0)
        throw std::domain_error("markov_corr: degree must be nonnegative");
    if (t < 0.0 || !std::isfinite(t))
        throw std::domain_error("markov_corr: t must be finite and nonnegative");
    return std::exp(-t * laplace_exponent(spec, 0.5 * total_degree));
}

double markov_corr(const SubordinatorSpec& spec, const CorrelationIndex& n, double t) {
    return markov_corr_total(spec, n.total(), t);
}

std::vector<double> subordinated_dw_step(std::span<const double> m, const PartitionSpec& part,
                                         const SubordinatorSpec& spec, double t,
                                         RandomStream& rng) {
    double s = sample_increment(spec, t, rng);
    if (s <= 0.0)
        return std::vector<double>(m.begin(), m.end()); // z = 1, exact copy
    double z = std::exp(-0.5 * s);
    if (z <= 0.0)
        return algorithm_a3(0.0, m, part, rng); // z underflowed: fresh stationary draw
    double total = 0.0;
    for (double v : m)
        total += v;
    if (z / (1.0 - z) * total > 1e7)
        return std::vector<double>(m.begin(), m.end()); // weak limit past the Poisson guard
    return dw_transition_step(m, z, part, rng);
}

double poissonized_corr(double gamma_rate, double rho1, int n, double t) {
    if (!(gamma_rate > 0.0))
        throw std::domain_error("poissonized_corr: rate must be positive");
    if (rho1 < 0.0 || rho1 > 1.0)
        throw std::domain_error("poissonized_corr: rho1 must lie in [0,1]");
    if (n < 0)
        throw std::domain_error("poissonized_corr: degree must be nonnegative");
    if (t < 0.0 || !std::isfinite(t))
        throw std::domain_error("poissonized_corr: t must be finite and nonnegative");
    double rho_n = (n == 0) ? 1.0 : std::pow(rho1, n);
    return std::exp(-t * gamma_rate * (1.0 - rho_n));
}

} // namespace gcrm
