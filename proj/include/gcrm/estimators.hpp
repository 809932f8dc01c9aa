#ifndef GCRM_ESTIMATORS_HPP
#define GCRM_ESTIMATORS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gcrm/kernels.hpp"
#include "gcrm/samplers.hpp"

namespace gcrm {

struct ReportEntry {
    std::vector<int> index;
    double estimate;
    double exact;
    double std_error;
    double z_score;
};

/// Comparison table with a |z| gate. Monte Carlo reports use gate 5, widened
/// to 6 when more than 50 comparisons run at once; analytic reports encode
/// their tolerance in std_error and gate at 1.
struct CorrelationReport {
    std::vector<ReportEntry> entries;
    long long sample_count = 0;
    std::uint64_t seed = 0;
    double gate = 5.0;

    bool passes() const;
    double max_abs_z() const;
};

double z_score(double estimate, double exact, double std_error);

/// Gate for a Monte Carlo report with the given number of comparisons.
double mc_gate(std::size_t comparisons);

struct EstimateResult {
    double estimate;
    double std_error;
};

/// Sample-mean estimator of rho_n:
///   mean over rows of prod_i L~_{n_i}(X_i) L~_{n_i}(Y_i) / prod_i c_{n_i,alpha_i},
/// standard error from the sample standard deviation of the summand.
EstimateResult estimate_canonical_corr(const PairBatch& batch, const PartitionSpec& part,
                                       const CorrelationIndex& n);

/// Normalised cross moment E[L~_n(X_c) L~_m(Y_c)] / sqrt(c_n c_m) on cell `cell`.
EstimateResult estimate_cross_moment(const PairBatch& batch, const PartitionSpec& part,
                                     std::size_t cell, int n, int m);

/// rho estimates for a family of indices against supplied exact values.
CorrelationReport correlation_report(const PairBatch& batch, const PartitionSpec& part,
                                     std::span<const CorrelationIndex> indices,
                                     std::span<const double> exact);

/// All off-diagonal normalised cross moments n != m up to max_degree (<= 6)
/// per cell; exact value 0 when the batch is canonically correlated. Entry
/// index layout is {cell, n, m}.
CorrelationReport orthogonality_scan(const PairBatch& batch, const PartitionSpec& part,
                                     int max_degree);

/// Per-order sample moments of [0,1]-valued draws against exact moments.
CorrelationReport moment_match_report(std::span<const double> samples,
                                      std::span<const double> exact_moments, int n_max);

} // namespace gcrm

#endif
