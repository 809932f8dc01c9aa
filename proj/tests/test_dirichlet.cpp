#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gcrm/dirichlet.hpp"
#include "gcrm/specfun.hpp"
#include "generators.hpp"
#include "testutil.hpp"

using namespace gcrm;

namespace {

BaseDistribution half_zero_one() {
    return BaseDistribution({{0.0, 0.5}, {1.0, 0.5}});
}

} // namespace

TEST_CASE("point-mass base gives deterministic moments") {
    for (double theta : {0.3, 1.0, 5.0}) {
        for (double z : {0.0, 0.37, 1.0}) {
            DirichletMeanSpec spec(theta, BaseDistribution::point_mass(z));
            std::vector<double> mom = mean_moments(spec, 12);
            for (int n = 1; n <= 12; ++n)
                CHECK(mom[n - 1] == doctest::Approx(std::pow(z, n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("two-point base reduces to beta moments") {
    // DP(theta, w d0 + (1-w) d1): the mean is the mass at 1, a
    // Beta(theta(1-w), theta w) variable with moments (theta(1-w))_n / (theta)_n.
    for (double theta : {0.5, 2.0, 7.0}) {
        for (double w : {0.25, 0.5, 0.9}) {
            DirichletMeanSpec spec(theta, BaseDistribution({{0.0, w}, {1.0, 1.0 - w}}));
            std::vector<double> mom = mean_moments(spec, 8);
            for (int n = 1; n <= 8; ++n) {
                double oracle = std::exp(log_pochhammer(theta * (1.0 - w), n)
                                         - log_pochhammer(theta, n));
                CHECK(testutil::rel_err(mom[n - 1], oracle) < 1e-12);
            }
        }
    }
}

TEST_CASE("symmetric two-point base at theta 1 is arcsine") {
    DirichletMeanSpec spec(1.0, half_zero_one());
    std::vector<double> mom = mean_moments(spec, 2);
    CHECK(testutil::rel_err(mom[0], 0.5) < 1e-12);
    CHECK(testutil::rel_err(mom[1], 3.0 / 8.0) < 1e-12);
}

TEST_CASE("moment sequences are monotone in [0,1]") {
    std::vector<DirichletMeanSpec> specs;
    specs.emplace_back(0.4, half_zero_one());
    specs.emplace_back(1.0, BaseDistribution({{0.2, 0.3}, {0.9, 0.7}}));
    specs.emplace_back(5.0, BaseDistribution({{0.1, 0.2}, {0.5, 0.5}, {1.0, 0.3}}));
    specs.emplace_back(11.0, BaseDistribution::point_mass(0.77));
    RandomStream rng(406);
    for (int trial = 0; trial < 20; ++trial)
        specs.emplace_back(testgen::uniform_in(rng, 0.1, 8.0),
                           testgen::random_base(rng, 0.0, 1.0));
    for (const auto& spec : specs) {
        std::vector<double> mom = mean_moments(spec, 64);
        double prev = 1.0;
        for (double m : mom) {
            CHECK(m >= -1e-15);
            CHECK(m <= prev + 1e-12);
            prev = m;
        }
    }
}

TEST_CASE("mean_moments argument validation") {
    DirichletMeanSpec spec(1.0, half_zero_one());
    CHECK_THROWS_AS(mean_moments(spec, 0), std::domain_error);
    CHECK_THROWS_AS(mean_moments(spec, 65), std::domain_error);
    CHECK_THROWS_AS(DirichletMeanSpec(0.0, half_zero_one()), std::domain_error);
    CHECK_THROWS_AS(DirichletMeanSpec(1.0, BaseDistribution({{1.5, 1.0}})), std::domain_error);
}

TEST_CASE("bell route with cyclic weights matches the recursion") {
    std::vector<DirichletMeanSpec> specs;
    specs.emplace_back(0.7, half_zero_one());
    specs.emplace_back(2.0, BaseDistribution({{0.2, 0.4}, {0.8, 0.6}}));
    specs.emplace_back(1.0, BaseDistribution::point_mass(0.5));
    for (const auto& spec : specs) {
        std::vector<double> rec = mean_moments(spec, 10);
        std::vector<double> bell = mean_moments_bell(spec, 10, BellWeighting::Cyclic);
        for (int n = 1; n <= 10; ++n)
            CHECK(testutil::rel_err(rec[n - 1], bell[n - 1]) < 1e-10);
    }
}

TEST_CASE("bell route with factorial weights fails the point-mass check") {
    // the alternative normalisation multiplies the second moment of a
    // point mass by (2+theta)/(1+theta); kept only for comparison reports
    DirichletMeanSpec spec(1.0, BaseDistribution::point_mass(0.5));
    std::vector<double> bell = mean_moments_bell(spec, 2, BellWeighting::Factorial);
    CHECK(testutil::rel_err(bell[1], 0.25) > 1e-3);
    CHECK(bell[1] == doctest::Approx(0.25 * 1.5).epsilon(1e-12));
}

TEST_CASE("stick-breaking sampler is exact for point masses") {
    RandomStream rng(17);
    DirichletMeanSpec spec(2.5, BaseDistribution::point_mass(0.62));
    for (int i = 0; i < 50; ++i)
        CHECK(sample_dirichlet_mean(spec, 1e-10, rng) == doctest::Approx(0.62).epsilon(1e-12));
}

TEST_CASE("stick-breaking sampler matches exact moments") {
    const long long draws = 100000;
    struct Case {
        double theta;
        BaseDistribution base;
    };
    std::vector<Case> cases;
    cases.push_back({1.0, half_zero_one()});
    cases.push_back({5.0, half_zero_one()});
    cases.push_back({0.5, BaseDistribution({{0.2, 0.3}, {0.9, 0.7}})});
    int which = 0;
    for (const auto& c : cases) {
        DirichletMeanSpec spec(c.theta, c.base);
        std::vector<double> exact = mean_moments(spec, 3);
        RandomStream rng(1000 + which++);
        std::vector<double> m1(draws), m2(draws), m3(draws);
        for (long long i = 0; i < draws; ++i) {
            double v = sample_dirichlet_mean(spec, 1e-10, rng);
            m1[i] = v;
            m2[i] = v * v;
            m3[i] = v * v * v;
        }
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(m1), exact[0])) <= 5.0);
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(m2), exact[1])) <= 5.0);
        CHECK(std::fabs(testutil::zstat(testutil::mean_se(m3), exact[2])) <= 5.0);
    }
}

TEST_CASE("sampler rejects bad truncation thresholds") {
    DirichletMeanSpec spec(1.0, half_zero_one());
    RandomStream rng(3);
    CHECK_THROWS_AS(sample_dirichlet_mean(spec, 0.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_dirichlet_mean(spec, 1.0, rng), std::domain_error);
}

TEST_CASE("stieltjes identity, deterministic mean") {
    RandomStream rng(5);
    DirichletMeanSpec spec(1.0, BaseDistribution::point_mass(0.5));
    StieltjesGap gap = stieltjes_identity_gap(spec, -1.0, rng, 2000);
    CHECK(gap.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(gap.rhs == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stieltjes identity, lambda zero") {
    RandomStream rng(6);
    DirichletMeanSpec spec(2.0, half_zero_one());
    StieltjesGap gap = stieltjes_identity_gap(spec, 0.0, rng, 2000);
    CHECK(gap.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gap.rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stieltjes identity, Monte Carlo gate") {
    RandomStream rng(7);
    DirichletMeanSpec spec(1.0, half_zero_one());
    StieltjesGap gap = stieltjes_identity_gap(spec, 0.5, rng, 100000);
    CHECK(gap.lhs_se > 0.0);
    CHECK(std::fabs(gap.lhs - gap.rhs) <= 5.0 * gap.lhs_se);
}

TEST_CASE("stieltjes identity precondition") {
    RandomStream rng(8);
    DirichletMeanSpec spec(1.0, half_zero_one());
    CHECK_THROWS_AS(stieltjes_identity_gap(spec, 1.0, rng, 100), std::domain_error);
    CHECK_THROWS_AS(stieltjes_identity_gap(spec, 2.0, rng, 100), std::domain_error);
}
