#include "gcrm/samplers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gcrm/dirichlet.hpp"

namespace gcrm {

namespace {

constexpr double kStickEps = 1e-10;

void check_input_vector(std::span<const double> x, const PartitionSpec& part, const char* who) {
    if (x.size() != part.dim())
        throw std::domain_error(std::string(who) + ": input dimension mismatch");
    for (double v : x)
        if (v < 0.0 || !std::isfinite(v))
            throw std::domain_error(std::string(who) + ": input must be finite and nonnegative");
}

// Conditional draw of Y given X = x for one cell of the extreme pair law.
double a1_conditional(double alpha, double b, double x, RandomStream& rng) {
    long long n = draw_poisson(b * x, rng);
    return draw_gamma(alpha + n, 1.0 / (1.0 + b), rng);
}

// Conditional at correlation z when z comes from an internal randomisation.
// Past the exact-Poisson guard the conditional is within relative 1e-7 of a
// point mass at x, so the z -> 1 weak limit (exact copy) takes over.
double a1_conditional_at_z(double alpha, double z, double x, RandomStream& rng) {
    if (z >= 1.0)
        return x;
    double b = z / (1.0 - z);
    if (b * x > 1e7)
        return x;
    return a1_conditional(alpha, b, x, rng);
}

} // namespace

PairBatch make_pair_batch(std::size_t n, std::size_t d, std::uint64_t seed,
                          std::string meta, const PairSampler& sampler) {
    PairBatch batch;
    batch.rows = n;
    batch.cols = d;
    batch.seed = seed;
    batch.meta = std::move(meta);
    batch.x.resize(n * d);
    batch.y.resize(n * d);
    RandomStream rng(seed);
    for (std::size_t r = 0; r < n; ++r) {
        auto [xv, yv] = sampler(rng);
        if (xv.size() != d || yv.size() != d)
            throw std::domain_error("make_pair_batch: sampler dimension mismatch");
        for (std::size_t c = 0; c < d; ++c) {
            batch.x[r * d + c] = xv[c];
            batch.y[r * d + c] = yv[c];
        }
    }
    return batch;
}

PairBatch swapped(const PairBatch& batch) {
    PairBatch out = batch;
    std::swap(out.x, out.y);
    out.meta = batch.meta + " (swapped)";
    return out;
}

std::vector<double> sample_gamma_vector(const PartitionSpec& part, RandomStream& rng) {
    std::vector<double> x(part.dim());
    for (std::size_t i = 0; i < part.dim(); ++i)
        x[i] = draw_gamma(part.alphas[i], 1.0, rng);
    return x;
}

std::pair<double, double> algorithm_a1(double alpha, double b, RandomStream& rng) {
    if (!(alpha > 0.0))
        throw std::domain_error("algorithm_a1: alpha must be positive");
    if (b < 0.0 || !std::isfinite(b))
        throw std::domain_error("algorithm_a1: b must be finite and nonnegative");
    double x = draw_gamma(alpha, 1.0, rng);
    double y = a1_conditional(alpha, b, x, rng);
    return {x, y};
}

std::pair<std::vector<double>, std::vector<double>>
algorithm_a2(const PartitionSpec& part, const VectorSampler& pstar_sampler, RandomStream& rng) {
    std::vector<double> b = pstar_sampler(rng);
    check_input_vector(b, part, "algorithm_a2");
    std::vector<double> x(part.dim()), y(part.dim());
    for (std::size_t i = 0; i < part.dim(); ++i) {
        auto [xi, yi] = algorithm_a1(part.alphas[i], b[i], rng);
        x[i] = xi;
        y[i] = yi;
    }
    return {std::move(x), std::move(y)};
}

std::vector<double> algorithm_a3(double b, std::span<const double> x,
                                 const PartitionSpec& part, RandomStream& rng) {
    if (b < 0.0 || !std::isfinite(b))
        throw std::domain_error("algorithm_a3: b must be finite and nonnegative");
    check_input_vector(x, part, "algorithm_a3");
    double total = 0.0;
    for (double v : x)
        total += v;

    std::vector<long long> counts(part.dim(), 0);
    if (b > 0.0 && total > 0.0) {
        long long n = draw_poisson(b * total, rng);
        counts = draw_multinomial(n, x, rng);
    }
    std::vector<double> y(part.dim());
    double scale = 1.0 / (1.0 + b);
    for (std::size_t i = 0; i < part.dim(); ++i)
        y[i] = draw_gamma(part.alphas[i] + counts[i], scale, rng);
    return y;
}

std::vector<double> algorithm_a4(const BaseDistribution& pz, std::span<const double> x,
                                 const PartitionSpec& part, RandomStream& rng) {
    if (!pz.in_unit_interval())
        throw std::domain_error("algorithm_a4: pz support must lie in [0,1]");
    double z = pz.sample(rng);
    if (z >= 1.0)
        return std::vector<double>(x.begin(), x.end());
    return algorithm_a3(z / (1.0 - z), x, part, rng);
}

std::vector<double> dw_transition_step(std::span<const double> m, double z,
                                       const PartitionSpec& part, RandomStream& rng) {
    if (!(z > 0.0) || !(z < 1.0))
        throw std::domain_error("dw_transition_step: z must lie in (0,1)");
    return algorithm_a3(z / (1.0 - z), m, part, rng);
}

std::pair<std::vector<double>, std::vector<double>>
sample_pair_general(const PartitionSpec& part, const DirectingKernel& kernel, RandomStream& rng) {
    validate_kernel(part, kernel);
    const std::size_t d = part.dim();

    std::vector<double> zs(d);
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, DegenerateConstant>) {
                zs.assign(d, k.z);
            } else if constexpr (std::is_same_v<T, PerCellDistribution>) {
                for (std::size_t i = 0; i < d; ++i) {
                    DirichletMeanSpec spec(part.alphas[i], k.cell_bases[i]);
                    zs[i] = sample_dirichlet_mean(spec, kStickEps, rng);
                }
            } else if constexpr (std::is_same_v<T, RandomConstant>) {
                double z = std::holds_alternative<BetaLaw>(k.law)
                    ? draw_beta(std::get<BetaLaw>(k.law).a, std::get<BetaLaw>(k.law).b, rng)
                    : std::get<BaseDistribution>(k.law).sample(rng);
                zs.assign(d, z);
            } else {
                // beta marginals realised from gamma masses, one pair per cell
                for (std::size_t i = 0; i < d; ++i)
                    zs[i] = draw_beta(k.eta * part.alphas[i], (1.0 - k.eta) * part.alphas[i], rng);
            }
        },
        kernel);

    std::vector<double> x = sample_gamma_vector(part, rng);
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i)
        y[i] = a1_conditional_at_z(part.alphas[i], zs[i], x[i], rng);
    return {std::move(x), std::move(y)};
}

} // namespace gcrm
