#include "gcrm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcrm/specfun.hpp"

namespace gcrm {

double z_score(double estimate, double exact, double std_error) {
    double dev = estimate - exact;
    if (std_error > 0.0)
        return dev / std_error;
    if (dev == 0.0)
        return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), dev);
}

double mc_gate(std::size_t comparisons) {
    return comparisons > 50 ? 6.0 : 5.0;
}

bool CorrelationReport::passes() const {
    for (const ReportEntry& e : entries)
        if (!(std::fabs(e.z_score) <= gate))
            return false;
    return true;
}

double CorrelationReport::max_abs_z() const {
    double m = 0.0;
    for (const ReportEntry& e : entries)
        m = std::max(m, std::fabs(e.z_score));
    return m;
}

namespace {

void check_batch(const PairBatch& batch, const PartitionSpec& part) {
    if (batch.rows == 0)
        throw std::domain_error("estimator: empty batch");
    if (batch.cols != part.dim())
        throw std::domain_error("estimator: batch/partition dimension mismatch");
}

// Laguerre values p_0..p_max at one point, forward recurrence in place.
void laguerre_values(double alpha, double x, int max_degree, double* out) {
    out[0] = 1.0;
    if (max_degree == 0)
        return;
    out[1] = x - alpha;
    for (int k = 1; k < max_degree; ++k)
        out[k + 1] = (x - (2.0 * k + alpha)) * out[k] - k * (k + alpha - 1.0) * out[k - 1];
}

struct Accumulator {
    long double sum = 0.0L;
    long double sumsq = 0.0L;

    void add(double v) {
        sum += v;
        sumsq += static_cast<long double>(v) * v;
    }
    EstimateResult finish(std::size_t n) const {
        double mean = static_cast<double>(sum / static_cast<long double>(n));
        double se = 0.0;
        if (n > 1) {
            long double var = (sumsq - sum * sum / static_cast<long double>(n))
                              / static_cast<long double>(n - 1);
            se = std::sqrt(std::max(0.0, static_cast<double>(var)) / n);
        }
        return {mean, se};
    }
};

} // namespace

CorrelationReport correlation_report(const PairBatch& batch, const PartitionSpec& part,
                                     std::span<const CorrelationIndex> indices,
                                     std::span<const double> exact) {
    check_batch(batch, part);
    if (indices.size() != exact.size())
        throw std::domain_error("correlation_report: indices/exact size mismatch");
    const std::size_t d = part.dim();
    int max_degree = 0;
    for (const CorrelationIndex& idx : indices) {
        if (idx.dim() != d)
            throw std::domain_error("correlation_report: index dimension mismatch");
        for (int v : idx.n)
            max_degree = std::max(max_degree, v);
    }

    // inverse norms per (cell, degree)
    std::vector<double> inv_norm(d * (max_degree + 1));
    for (std::size_t c = 0; c < d; ++c)
        for (int n = 0; n <= max_degree; ++n)
            inv_norm[c * (max_degree + 1) + n] =
                std::exp(-log_laguerre_norm(PolyIndex(n, part.alphas[c])));

    std::vector<Accumulator> acc(indices.size());
    std::vector<double> lx(d * (max_degree + 1)), ly(d * (max_degree + 1));
    for (std::size_t r = 0; r < batch.rows; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            laguerre_values(part.alphas[c], batch.x_at(r, c), max_degree,
                            &lx[c * (max_degree + 1)]);
            laguerre_values(part.alphas[c], batch.y_at(r, c), max_degree,
                            &ly[c * (max_degree + 1)]);
        }
        for (std::size_t k = 0; k < indices.size(); ++k) {
            double summand = 1.0;
            for (std::size_t c = 0; c < d; ++c) {
                int n = indices[k].n[c];
                if (n == 0)
                    continue;
                std::size_t off = c * (max_degree + 1) + n;
                summand *= lx[off] * ly[off] * inv_norm[off];
            }
            acc[k].add(summand);
        }
    }

    CorrelationReport report;
    report.sample_count = static_cast<long long>(batch.rows);
    report.seed = batch.seed;
    report.gate = mc_gate(indices.size());
    report.entries.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        EstimateResult est = acc[k].finish(batch.rows);
        report.entries.push_back({indices[k].n, est.estimate, exact[k], est.std_error,
                                  z_score(est.estimate, exact[k], est.std_error)});
    }
    return report;
}

EstimateResult estimate_canonical_corr(const PairBatch& batch, const PartitionSpec& part,
                                       const CorrelationIndex& n) {
    CorrelationIndex idx = n;
    double exact = 0.0; // placeholder, only estimate/SE are used
    CorrelationReport report = correlation_report(batch, part, std::span(&idx, 1),
                                                  std::span(&exact, 1));
    return {report.entries[0].estimate, report.entries[0].std_error};
}

EstimateResult estimate_cross_moment(const PairBatch& batch, const PartitionSpec& part,
                                     std::size_t cell, int n, int m) {
    check_batch(batch, part);
    if (cell >= part.dim())
        throw std::domain_error("estimate_cross_moment: cell out of range");
    if (n < 0 || m < 0)
        throw std::domain_error("estimate_cross_moment: degrees must be nonnegative");
    const double alpha = part.alphas[cell];
    const double inv_sqrt_norms = std::exp(-0.5 * (log_laguerre_norm(PolyIndex(n, alpha))
                                                   + log_laguerre_norm(PolyIndex(m, alpha))));
    const int max_degree = std::max(n, m);
    std::vector<double> lx(max_degree + 1), ly(max_degree + 1);
    Accumulator acc;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        laguerre_values(alpha, batch.x_at(r, cell), max_degree, lx.data());
        laguerre_values(alpha, batch.y_at(r, cell), max_degree, ly.data());
        acc.add(lx[n] * ly[m] * inv_sqrt_norms);
    }
    return acc.finish(batch.rows);
}

CorrelationReport orthogonality_scan(const PairBatch& batch, const PartitionSpec& part,
                                     int max_degree) {
    check_batch(batch, part);
    if (max_degree < 1 || max_degree > 6)
        throw std::domain_error("orthogonality_scan: max_degree must be in [1, 6]");
    const std::size_t d = part.dim();
    const int width = max_degree + 1;

    std::vector<double> inv_sqrt_norm(d * width);
    for (std::size_t c = 0; c < d; ++c)
        for (int n = 0; n <= max_degree; ++n)
            inv_sqrt_norm[c * width + n] =
                std::exp(-0.5 * log_laguerre_norm(PolyIndex(n, part.alphas[c])));

    std::vector<Accumulator> acc(d * width * width);
    std::vector<double> lx(d * width), ly(d * width);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            laguerre_values(part.alphas[c], batch.x_at(r, c), max_degree, &lx[c * width]);
            laguerre_values(part.alphas[c], batch.y_at(r, c), max_degree, &ly[c * width]);
        }
        for (std::size_t c = 0; c < d; ++c)
            for (int n = 0; n <= max_degree; ++n)
                for (int m = 0; m <= max_degree; ++m) {
                    if (n == m)
                        continue;
                    double v = lx[c * width + n] * ly[c * width + m]
                             * inv_sqrt_norm[c * width + n] * inv_sqrt_norm[c * width + m];
                    acc[(c * width + n) * width + m].add(v);
                }
    }

    CorrelationReport report;
    report.sample_count = static_cast<long long>(batch.rows);
    report.seed = batch.seed;
    for (std::size_t c = 0; c < d; ++c)
        for (int n = 0; n <= max_degree; ++n)
            for (int m = 0; m <= max_degree; ++m) {
                if (n == m)
                    continue;
                EstimateResult est = acc[(c * width + n) * width + m].finish(batch.rows);
                report.entries.push_back({{static_cast<int>(c), n, m}, est.estimate, 0.0,
                                          est.std_error, z_score(est.estimate, 0.0, est.std_error)});
            }
    report.gate = mc_gate(report.entries.size());
    return report;
}

CorrelationReport moment_match_report(std::span<const double> samples,
                                      std::span<const double> exact_moments, int n_max) {
    if (samples.empty())
        throw std::domain_error("moment_match_report: empty input");
    if (n_max < 1 || static_cast<std::size_t>(n_max) > exact_moments.size())
        throw std::domain_error("moment_match_report: n_max exceeds supplied exact moments");

    CorrelationReport report;
    report.sample_count = static_cast<long long>(samples.size());
    std::vector<Accumulator> acc(n_max);
    for (double s : samples) {
        double p = 1.0;
        for (int n = 1; n <= n_max; ++n) {
            p *= s;
            acc[n - 1].add(p);
        }
    }
    for (int n = 1; n <= n_max; ++n) {
        EstimateResult est = acc[n - 1].finish(samples.size());
        report.entries.push_back({{n}, est.estimate, exact_moments[n - 1], est.std_error,
                                  z_score(est.estimate, exact_moments[n - 1], est.std_error)});
    }
    report.gate = mc_gate(report.entries.size());
    return report;
}

} // namespace gcrm
