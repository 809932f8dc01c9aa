#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gcrm/estimators.hpp"
#include "gcrm/kernels.hpp"
#include "gcrm/samplers.hpp"
#include "testutil.hpp"

using namespace gcrm;

namespace {

constexpr std::size_t kDraws = 200000;

PairBatch stationary_step_batch(const PartitionSpec& part, double b, std::size_t n,
                                std::uint64_t seed) {
    return make_pair_batch(n, part.dim(), seed, "a3 stationary", [&part, b](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = algorithm_a3(b, x, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
}

double zgap(const EstimateResult& est, double exact) {
    return est.std_error > 0.0 ? (est.estimate - exact) / est.std_error
                               : (est.estimate == exact ? 0.0 : 1e300);
}

} // namespace

TEST_CASE("stationary gamma vector moments") {
    PartitionSpec part({0.7, 2.2}, 3.0);
    RandomStream rng(11);
    std::vector<double> x0(kDraws), x1(kDraws), cross(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i) {
        std::vector<double> v = sample_gamma_vector(part, rng);
        x0[i] = v[0];
        x1[i] = v[1];
        cross[i] = (v[0] - part.alphas[0]) * (v[1] - part.alphas[1]);
    }
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(x0), part.alphas[0])) <= 5.0);
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(x1), part.alphas[1])) <= 5.0);
    std::vector<double> sq0(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i)
        sq0[i] = (x0[i] - part.alphas[0]) * (x0[i] - part.alphas[0]);
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(sq0), part.alphas[0])) <= 5.0);
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(cross), 0.0)) <= 5.0);
}

TEST_CASE("algorithm a1 independence at b = 0") {
    PartitionSpec part({1.0}, 1.0);
    PairBatch batch = make_pair_batch(kDraws, 1, 21, "a1 b=0", [](RandomStream& rng) {
        auto [x, y] = algorithm_a1(1.0, 0.0, rng);
        return std::make_pair(std::vector<double>{x}, std::vector<double>{y});
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1}));
    CHECK(std::fabs(zgap(r, 0.0)) <= 5.0);
}

TEST_CASE("algorithm a1 reproduces the extreme correlation sequence") {
    const double alpha = 1.5, b = 1.0, z = 0.5;
    PartitionSpec part({alpha}, alpha);
    PairBatch batch = make_pair_batch(kDraws, 1, 22, "a1", [alpha, b](RandomStream& rng) {
        auto [x, y] = algorithm_a1(alpha, b, rng);
        return std::make_pair(std::vector<double>{x}, std::vector<double>{y});
    });
    std::vector<double> ys(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i)
        ys[i] = batch.y_at(i, 0);
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(ys), alpha)) <= 5.0);
    for (int n = 1; n <= 4; ++n) {
        EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({n}));
        CHECK(std::fabs(zgap(r, std::pow(z, n))) <= 5.0);
    }
}

TEST_CASE("algorithm a2 with degenerate randomisation") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    const double b = 1.0, z = b / (1.0 + b);
    std::vector<double> bvec(2, b);
    PairBatch batch = make_pair_batch(kDraws, 2, 23, "a2", [&part, &bvec](RandomStream& rng) {
        return algorithm_a2(part, [&bvec](RandomStream&) { return bvec; }, rng);
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1, 1}));
    CHECK(std::fabs(zgap(r, z * z)) <= 5.0);
}

TEST_CASE("algorithm a2 with zero randomisation decouples the pair") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    std::vector<double> zero(2, 0.0);
    PairBatch batch = make_pair_batch(kDraws, 2, 24, "a2 zero", [&part, &zero](RandomStream& rng) {
        return algorithm_a2(part, [&zero](RandomStream&) { return zero; }, rng);
    });
    for (const auto& idx : {CorrelationIndex({1, 0}), CorrelationIndex({0, 1}),
                            CorrelationIndex({1, 1})}) {
        EstimateResult r = estimate_canonical_corr(batch, part, idx);
        CHECK(std::fabs(zgap(r, 0.0)) <= 5.0);
    }
}

TEST_CASE("algorithm a2 with a common two-point randomisation") {
    // B = (0,0) or (1,1) with probability 1/2: rho_(1,1) = E[Z^2] = 1/8
    PartitionSpec part({1.0, 1.0}, 2.0);
    PairBatch batch = make_pair_batch(kDraws, 2, 25, "a2 two-point", [&part](RandomStream& rng) {
        return algorithm_a2(part,
                            [](RandomStream& r) {
                                double b = draw_uniform(r) < 0.5 ? 0.0 : 1.0;
                                return std::vector<double>{b, b};
                            },
                            rng);
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1, 1}));
    CHECK(std::fabs(zgap(r, 0.125)) <= 5.0);
}

TEST_CASE("algorithm a3 with b = 0 resamples the stationary law") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    PairBatch batch = stationary_step_batch(part, 0.0, kDraws, 26);
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1, 1}));
    CHECK(std::fabs(zgap(r, 0.0)) <= 5.0);
}

TEST_CASE("algorithm a3 conditional mean") {
    // E[Y_i | x] = z x_i + (1-z) alpha_i at b = 1, x = (3,1), alpha = (1,2)
    PartitionSpec part({1.0, 2.0}, 3.0);
    std::vector<double> x = {3.0, 1.0};
    RandomStream rng(27);
    std::vector<double> y0(kDraws), y1(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i) {
        std::vector<double> y = algorithm_a3(1.0, x, part, rng);
        y0[i] = y[0];
        y1[i] = y[1];
    }
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(y0), 2.0)) <= 5.0);
    CHECK(std::fabs(testutil::zstat(testutil::mean_se(y1), 1.5)) <= 5.0);
}

TEST_CASE("algorithm a3 joint law from stationary input") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    const double b = 1.0, z = b / (1.0 + b);
    PairBatch batch = stationary_step_batch(part, b, kDraws, 28);
    for (const auto& [idx, total] : std::vector<std::pair<CorrelationIndex, int>>{
             {CorrelationIndex({1, 0}), 1},
             {CorrelationIndex({1, 1}), 2},
             {CorrelationIndex({2, 1}), 3}}) {
        EstimateResult r = estimate_canonical_corr(batch, part, idx);
        CHECK(std::fabs(zgap(r, std::pow(z, total))) <= 5.0);
    }
}

TEST_CASE("algorithm a3 handles zero input mass") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    std::vector<double> x = {0.0, 0.0};
    RandomStream rng(29);
    std::vector<double> y = algorithm_a3(2.0, x, part, rng);
    CHECK(y.size() == 2);
    CHECK(y[0] > 0.0);
    CHECK(y[1] > 0.0);
}

TEST_CASE("algorithm a3 rejects oversized poisson means") {
    PartitionSpec part({1.0}, 1.0);
    std::vector<double> x = {1e9};
    RandomStream rng(30);
    CHECK_THROWS_AS(algorithm_a3(100.0, x, part, rng), std::range_error);
}

TEST_CASE("algorithm a4 with a point mass replays algorithm a3 exactly") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    const double z = 0.4, b = z / (1.0 - z);
    std::vector<double> x = {1.3, 0.4};
    BaseDistribution pz = BaseDistribution::point_mass(z);
    for (std::uint64_t seed : {1ULL, 77ULL}) {
        RandomStream r1(seed), r2(seed);
        std::vector<double> via_a4 = algorithm_a4(pz, x, part, r1);
        std::vector<double> via_a3 = algorithm_a3(b, x, part, r2);
        CHECK(via_a4 == via_a3);
    }
}

TEST_CASE("algorithm a4 beta-matched two-point support") {
    // Z with uniform moments up to order 3: rho_(1,1) = E[Z^2] = 1/3
    double h = 0.5 / std::sqrt(3.0);
    BaseDistribution pz({{0.5 - h, 0.5}, {0.5 + h, 0.5}});
    PartitionSpec part({1.0, 1.0}, 2.0);
    PairBatch batch = make_pair_batch(kDraws, 2, 31, "a4", [&part, &pz](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = algorithm_a4(pz, x, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1, 1}));
    CHECK(std::fabs(zgap(r, 1.0 / 3.0)) <= 5.0);
}

TEST_CASE("algorithm a4 at the endpoints of [0,1]") {
    PartitionSpec part({1.0}, 1.0);
    std::vector<double> x = {2.7};
    RandomStream rng(32);
    // delta_1: exact copy
    std::vector<double> copy = algorithm_a4(BaseDistribution::point_mass(1.0), x, part, rng);
    CHECK(copy[0] == 2.7);
    // delta_0: independent redraw
    PairBatch batch = make_pair_batch(kDraws, 1, 33, "a4 zero", [&part](RandomStream& rng2) {
        std::vector<double> xx = sample_gamma_vector(part, rng2);
        std::vector<double> yy = algorithm_a4(BaseDistribution::point_mass(0.0), xx, part, rng2);
        return std::make_pair(std::move(xx), std::move(yy));
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1}));
    CHECK(std::fabs(zgap(r, 0.0)) <= 5.0);
}

TEST_CASE("dawson-watanabe step autocorrelation") {
    PartitionSpec part({1.0}, 1.0);
    const double z = std::exp(-0.5); // one unit of time at criticality
    PairBatch batch = make_pair_batch(kDraws, 1, 34, "dw", [&part, z](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = dw_transition_step(x, z, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    for (int n = 1; n <= 3; ++n) {
        EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({n}));
        CHECK(std::fabs(zgap(r, std::exp(-0.5 * n))) <= 5.0);
    }
}

TEST_CASE("dawson-watanabe semigroup under chaining") {
    PartitionSpec part({1.3}, 1.3);
    const double z1 = 0.8, z2 = 0.55;
    PairBatch chained = make_pair_batch(kDraws, 1, 35, "dw chain",
                                        [&part, z1, z2](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> mid = dw_transition_step(x, z1, part, rng);
        std::vector<double> y = dw_transition_step(mid, z2, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    EstimateResult r = estimate_canonical_corr(chained, part, CorrelationIndex({1}));
    CHECK(std::fabs(zgap(r, z1 * z2)) <= 5.0);
}

TEST_CASE("dawson-watanabe step decorrelates as z goes to zero") {
    PartitionSpec part({1.0}, 1.0);
    PairBatch batch = make_pair_batch(kDraws, 1, 36, "dw small z", [&part](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = dw_transition_step(x, 1e-3, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1}));
    CHECK(std::fabs(r.estimate) <= 1e-3 + 5.0 * r.std_error);
}

TEST_CASE("general sampler, degenerate kernel matches dw step in law") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    DirectingKernel kernel = DegenerateConstant{0.4};
    PairBatch batch = make_pair_batch(kDraws, 2, 37, "general degenerate",
                                      [&part, &kernel](RandomStream& rng) {
        return sample_pair_general(part, kernel, rng);
    });
    for (const auto& idx : {CorrelationIndex({1, 0}), CorrelationIndex({1, 1})}) {
        EstimateResult r = estimate_canonical_corr(batch, part, idx);
        CHECK(std::fabs(zgap(r, canonical_corr_exact(part, kernel, idx))) <= 5.0);
    }
}

TEST_CASE("general sampler, per-cell dirichlet means") {
    PartitionSpec part({1.0}, 1.0);
    std::vector<BaseDistribution> bases = {BaseDistribution({{0.0, 0.5}, {0.5, 0.5}})};
    DirectingKernel kernel = PerCellDistribution{bases};
    PairBatch batch = make_pair_batch(kDraws, 1, 38, "general percell",
                                      [&part, &kernel](RandomStream& rng) {
        return sample_pair_general(part, kernel, rng);
    });
    EstimateResult r1 = estimate_canonical_corr(batch, part, CorrelationIndex({1}));
    CHECK(std::fabs(zgap(r1, 0.25)) <= 5.0); // E[Z] = base mean = 1/4
    EstimateResult r2 = estimate_canonical_corr(batch, part, CorrelationIndex({2}));
    CHECK(std::fabs(zgap(r2, canonical_corr_exact(part, kernel, CorrelationIndex({2})))) <= 5.0);
}

TEST_CASE("general sampler, shared beta constant") {
    PartitionSpec part({1.0, 1.0}, 2.0);
    DirectingKernel kernel = RandomConstant{BetaLaw{1.0, 1.0}};
    PairBatch batch = make_pair_batch(kDraws, 2, 39, "general beta",
                                      [&part, &kernel](RandomStream& rng) {
        return sample_pair_general(part, kernel, rng);
    });
    EstimateResult r = estimate_canonical_corr(batch, part, CorrelationIndex({1, 1}));
    CHECK(std::fabs(zgap(r, 1.0 / 3.0)) <= 5.0);
}

TEST_CASE("general sampler, common component against the additive construction") {
    const double eta = 0.5;
    PartitionSpec part({1.0, 1.0}, 2.0);
    DirectingKernel kernel = CommonComponent{eta};
    CorrelationIndex idx({1, 1});
    const double exact = canonical_corr_exact(part, kernel, idx);
    CHECK(exact == doctest::Approx(0.25).epsilon(1e-13));

    PairBatch via_kernel = make_pair_batch(kDraws, 2, 40, "general common",
                                           [&part, &kernel](RandomStream& rng) {
        return sample_pair_general(part, kernel, rng);
    });
    EstimateResult rk = estimate_canonical_corr(via_kernel, part, idx);
    CHECK(std::fabs(zgap(rk, exact)) <= 5.0);

    // independent oracle: x = m1 + m0, y = m2 + m0 from three gamma vectors
    PairBatch additive = make_pair_batch(kDraws, 2, 41, "additive common",
                                         [&part, eta](RandomStream& rng) {
        std::vector<double> x(2), y(2);
        for (std::size_t i = 0; i < 2; ++i) {
            double shared = draw_gamma(eta * part.alphas[i], 1.0, rng);
            x[i] = draw_gamma((1.0 - eta) * part.alphas[i], 1.0, rng) + shared;
            y[i] = draw_gamma((1.0 - eta) * part.alphas[i], 1.0, rng) + shared;
        }
        return std::make_pair(std::move(x), std::move(y));
    });
    EstimateResult ra = estimate_canonical_corr(additive, part, idx);
    CHECK(std::fabs(zgap(ra, exact)) <= 5.0);
    double se = std::sqrt(rk.std_error * rk.std_error + ra.std_error * ra.std_error);
    CHECK(std::fabs(rk.estimate - ra.estimate) <= 5.0 * se);
}

TEST_CASE("general sampler, shared constant one copies the input") {
    PartitionSpec part({1.0, 2.0}, 3.0);
    DirectingKernel kernel = RandomConstant{BaseDistribution::point_mass(1.0)};
    RandomStream rng(42);
    auto [x, y] = sample_pair_general(part, kernel, rng);
    CHECK(x == y);
}

TEST_CASE("pairs are exchangeable under every sampler") {
    const double alpha = 1.5;
    PartitionSpec part({alpha}, alpha);
    std::vector<std::pair<const char*, PairSampler>> samplers;
    samplers.emplace_back("a1", [alpha](RandomStream& rng) {
        auto [x, y] = algorithm_a1(alpha, 1.0, rng);
        return std::make_pair(std::vector<double>{x}, std::vector<double>{y});
    });
    samplers.emplace_back("a3", [&part](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = algorithm_a3(1.0, x, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    samplers.emplace_back("a4", [&part](RandomStream& rng) {
        static const BaseDistribution pz({{0.1, 0.5}, {0.8, 0.5}});
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = algorithm_a4(pz, x, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    samplers.emplace_back("dw", [&part](RandomStream& rng) {
        std::vector<double> x = sample_gamma_vector(part, rng);
        std::vector<double> y = dw_transition_step(x, 0.6, part, rng);
        return std::make_pair(std::move(x), std::move(y));
    });
    samplers.emplace_back("general common", [&part](RandomStream& rng) {
        static const DirectingKernel kernel = CommonComponent{0.5};
        return sample_pair_general(part, kernel, rng);
    });

    std::uint64_t seed = 43;
    for (const auto& [name, sampler] : samplers) {
        INFO(name);
        PairBatch batch = make_pair_batch(kDraws, 1, seed++, name, sampler);
        PairBatch flipped = swapped(batch);
        // the diagonal estimator is symmetric, so estimates agree exactly
        for (int n = 1; n <= 3; ++n) {
            EstimateResult a = estimate_canonical_corr(batch, part, CorrelationIndex({n}));
            EstimateResult bb = estimate_canonical_corr(flipped, part, CorrelationIndex({n}));
            CHECK(a.estimate == bb.estimate);
        }
        // asymmetric statistics agree in law: E[X^2 Y] vs E[X Y^2]
        std::vector<double> x2y(kDraws), xy2(kDraws);
        for (std::size_t i = 0; i < kDraws; ++i) {
            double x = batch.x_at(i, 0), y = batch.y_at(i, 0);
            x2y[i] = x * x * y;
            xy2[i] = x * y * y;
        }
        CHECK(std::fabs(testutil::zstat2(testutil::mean_se(x2y), testutil::mean_se(xy2))) <= 5.0);
    }
}

TEST_CASE("margins of the general sampler stay gamma") {
    PartitionSpec part({1.4}, 1.4);
    DirectingKernel kernel = CommonComponent{0.6};
    PairBatch batch = make_pair_batch(kDraws, 1, 44, "margins",
                                      [&part, &kernel](RandomStream& rng) {
        return sample_pair_general(part, kernel, rng);
    });
    const double alpha = part.alphas[0];
    for (bool side : {false, true}) {
        std::vector<double> v1(kDraws), v2(kDraws), v3(kDraws);
        for (std::size_t i = 0; i < kDraws; ++i) {
            double v = side ? batch.y_at(i, 0) : batch.x_at(i, 0);
            double c = v - alpha;
            v1[i] = v;
            v2[i] = c * c;
            v3[i] = c * c * c;
        }
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(v1), alpha)) <= 5.0);
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(v2), alpha)) <= 5.0);
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(v3), 2.0 * alpha)) <= 5.0);
    }
}
