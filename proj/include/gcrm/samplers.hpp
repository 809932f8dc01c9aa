#ifndef GCRM_SAMPLERS_HPP
#define GCRM_SAMPLERS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gcrm/base_distribution.hpp"
#include "gcrm/kernels.hpp"
#include "gcrm/rng.hpp"

namespace gcrm {

/// N paired d-vectors together with the seed that produced them.
struct PairBatch {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x; // row-major rows x cols
    std::vector<double> y;
    std::uint64_t seed = 0;
    std::string meta;

    double x_at(std::size_t r, std::size_t c) const { return x[r * cols + c]; }
    double y_at(std::size_t r, std::size_t c) const { return y[r * cols + c]; }
};

using PairSampler = std::function<std::pair<std::vector<double>, std::vector<double>>(RandomStream&)>;

PairBatch make_pair_batch(std::size_t n, std::size_t d, std::uint64_t seed,
                          std::string meta, const PairSampler& sampler);

/// Batch with the roles of x and y swapped.
PairBatch swapped(const PairBatch& batch);

/// Independent Gamma(alpha_i, 1) draws, one per cell.
std::vector<double> sample_gamma_vector(const PartitionSpec& part, RandomStream& rng);

/// One exchangeable gamma pair with correlation sequence (b/(1+b))^n:
/// X ~ Gamma(alpha,1), N | X ~ Poisson(bX), Y | N ~ Gamma(alpha+N, 1/(1+b)).
std::pair<double, double> algorithm_a1(double alpha, double b, RandomStream& rng);

using VectorSampler = std::function<std::vector<double>(RandomStream&)>;

/// d-dimensional pair: draw B from pstar_sampler, then run d conditionally
/// independent instances of algorithm_a1 with (alpha_j, B_j).
std::pair<std::vector<double>, std::vector<double>>
algorithm_a2(const PartitionSpec& part, const VectorSampler& pstar_sampler, RandomStream& rng);

/// Conditional transition from x: N ~ Poisson(b |x|), multinomial split
/// proportional to x, Y_i ~ Gamma(alpha_i + N_i, 1/(1+b)). |x| = 0 gives N = 0.
std::vector<double> algorithm_a3(double b, std::span<const double> x,
                                 const PartitionSpec& part, RandomStream& rng);

/// Randomised transition: Z ~ pz on [0,1], then algorithm_a3 with b = Z/(1-Z);
/// Z = 1 returns an exact copy of x.
std::vector<double> algorithm_a4(const BaseDistribution& pz, std::span<const double> x,
                                 const PartitionSpec& part, RandomStream& rng);

/// One transition of the gamma Dawson-Watanabe process observed on the
/// partition, autocorrelation parameter z in (0,1) (z = e^{-t/2} at
/// criticality): algorithm_a3 with b = z/(1-z).
std::vector<double> dw_transition_step(std::span<const double> m, double z,
                                       const PartitionSpec& part, RandomStream& rng);

/// Stationary pair driven by an arbitrary directing kernel: realise
/// (Z_1, ..., Z_d) per the kernel variant, draw X stationary, then Y from
/// per-cell algorithm_a1 conditionals with b_i = Z_i / (1 - Z_i).
std::pair<std::vector<double>, std::vector<double>>
sample_pair_general(const PartitionSpec& part, const DirectingKernel& kernel, RandomStream& rng);

} // namespace gcrm

#endif
