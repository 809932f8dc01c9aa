#include "gcrm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcrm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix(seed, stream)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
    return RandomStream(seed_, splitmix64(stream_ ^ splitmix64(index + 1)));
}

double draw_uniform(RandomStream& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double draw_gamma(double shape, double scale, RandomStream& rng) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::domain_error("draw_gamma: shape and scale must be positive");
    return std::gamma_distribution<double>(shape, scale)(rng);
}

long long draw_poisson(double mean, RandomStream& rng) {
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::domain_error("draw_poisson: mean must be finite and nonnegative");
    if (mean > 1e7)
        throw std::range_error("draw_poisson: mean above 1e7 rejected");
    if (mean == 0.0)
        return 0;
    return std::poisson_distribution<long long>(mean)(rng);
}

double draw_beta(double a, double b, RandomStream& rng) {
    double x = draw_gamma(a, 1.0, rng);
    double y = draw_gamma(b, 1.0, rng);
    return x / (x + y);
}

std::vector<long long> draw_multinomial(long long n, std::span<const double> probs,
                                        RandomStream& rng) {
    if (n < 0)
        throw std::domain_error("draw_multinomial: negative count");
    std::vector<long long> counts(probs.size(), 0);
    double remaining_prob = 0.0;
    for (double p : probs) {
        if (p < 0.0)
            throw std::domain_error("draw_multinomial: negative probability");
        remaining_prob += p;
    }
    long long remaining = n;
    for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
        double p = remaining_prob > 0.0 ? probs[i] / remaining_prob : 0.0;
        p = std::min(1.0, std::max(0.0, p));
        long long c;
        if (p <= 0.0)
            c = 0;
        else if (p >= 1.0)
            c = remaining;
        else
            c = std::binomial_distribution<long long>(remaining, p)(rng);
        counts[i] = c;
        remaining -= c;
        remaining_prob -= probs[i];
    }
    if (!probs.empty())
        counts[probs.size() - 1] += remaining;
    return counts;
}

} // namespace gcrm
