#ifndef GCRM_RNG_HPP
#define GCRM_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gcrm {

/// Seeded random stream. A stream is identified by (seed, stream index), so
/// batches can fan out over substreams and still replay exactly.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Independent stream derived from the same seed; does not disturb *this.
    RandomStream substream(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// Uniform draw on [0, 1).
double draw_uniform(RandomStream& rng);

/// Gamma(shape, scale) draw, shape > 0, scale > 0.
double draw_gamma(double shape, double scale, RandomStream& rng);

/// Poisson draw. Means above 1e7 are rejected with std::range_error so the
/// conditional laws stay exact; mean 0 returns 0 without touching the stream.
long long draw_poisson(double mean, RandomStream& rng);

double draw_beta(double a, double b, RandomStream& rng);

/// Multinomial split of n into probs.size() cells via sequential binomials.
std::vector<long long> draw_multinomial(long long n, std::span<const double> probs,
                                        RandomStream& rng);

} // namespace gcrm

#endif
