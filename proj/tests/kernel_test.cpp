#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gpucb/error.hpp"
#include "gpucb/kernel.hpp"
#include "oracles.hpp"

namespace gpucb {
namespace {

TEST(Kernel, ClosedFormExamples) {
    const auto se = Kernel::squared_exponential(1.0, 1.0);
    EXPECT_DOUBLE_EQ(se({0.3, 0.7}, {0.3, 0.7}), 1.0);
    EXPECT_NEAR(se({0.0}, {1.0}), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(se({0.0}, {1.0}), 0.606531, 1e-6);

    EXPECT_DOUBLE_EQ(Kernel::linear(1.0)({1.0, 2.0}, {3.0, 4.0}), 11.0);

    const auto m12 = Kernel::matern(MaternNu::Half, 1.0, 1.0);
    EXPECT_NEAR(m12({0.0}, {1.0}), 0.367879, 1e-6);
}

TEST(Kernel, MaternClosedForms) {
    const double r = 0.7, l = 0.4, s2 = 1.7;
    const Point x{0.0}, y{r};
    const double a3 = std::sqrt(3.0) * r / l;
    const double a5 = std::sqrt(5.0) * r / l;
    EXPECT_NEAR(Kernel::matern(MaternNu::ThreeHalves, l, s2)(x, y), s2 * (1 + a3) * std::exp(-a3), 1e-14);
    EXPECT_NEAR(Kernel::matern(MaternNu::FiveHalves, l, s2)(x, y),
                s2 * (1 + a5 + 5.0 * r * r / (3.0 * l * l)) * std::exp(-a5), 1e-14);
}

TEST(Kernel, DimensionMismatchIsInputError) {
    EXPECT_THROW((void)Kernel::squared_exponential(1.0)({0.0}, {0.0, 1.0}), InputError);
    EXPECT_THROW(gram(Kernel::linear(), {Point{0.0}, Point{0.0, 1.0}}), InputError);
    EXPECT_THROW(gram(Kernel::linear(), {}), InputError);
}

TEST(Kernel, InvalidHyperparametersAreConfigErrors) {
    EXPECT_THROW(Kernel::squared_exponential(0.0), ConfigError);
    EXPECT_THROW(Kernel::matern(MaternNu::Half, -1.0), ConfigError);
    EXPECT_THROW(Kernel::linear(0.0), ConfigError);
}

TEST(Kernel, SymmetryAndStationaryNormalization) {
    std::mt19937_64 rng(11);
    for (int family = 0; family < 5; ++family) {
        const auto k = oracle::random_kernel(rng, family);
        const auto pts = oracle::random_points(rng, 20, 3);
        for (const auto& x : pts) {
            for (const auto& y : pts) { EXPECT_LE(std::abs(k(x, y) - k(y, x)), 1e-12); }
            if (k.family() != KernelFamily::Linear) { EXPECT_EQ(k(x, x), k.signal_variance()); }
        }
    }
}

// Smoother kernels decorrelate more slowly up close and have lighter tails far away.
TEST(Kernel, MaternSmoothnessOrdering) {
    const double l = 0.3;
    const auto m12 = Kernel::matern(MaternNu::Half, l);
    const auto m32 = Kernel::matern(MaternNu::ThreeHalves, l);
    const auto m52 = Kernel::matern(MaternNu::FiveHalves, l);
    const auto se = Kernel::squared_exponential(l);
    for (double ratio = 0.01; ratio <= 1.0; ratio *= 1.1) {
        const Point x{0.0}, y{ratio * l};
        EXPECT_LT(m12(x, y), m32(x, y));
        EXPECT_LT(m32(x, y), m52(x, y));
        EXPECT_LT(m52(x, y), se(x, y));
    }
    for (double ratio = 6.0; ratio < 20.0; ratio *= 1.1) {
        const Point x{0.0}, y{ratio * l};
        EXPECT_GT(m12(x, y), m32(x, y));
        EXPECT_GT(m32(x, y), m52(x, y));
        EXPECT_GT(m52(x, y), se(x, y));
    }
}

TEST(Gram, SmallExamples) {
    const auto se = Kernel::squared_exponential(1.0, 2.5);
    const auto one = gram(se, {Point{0.4}});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one(0, 0), 2.5);

    const auto dup = gram(Kernel::squared_exponential(1.0), {Point{0.4}, Point{0.4}});
    EXPECT_TRUE(dup.entries().isApprox(Eigen::MatrixXd::Ones(2, 2)));
    const auto s = spectrum(dup);
    EXPECT_EQ(s.effective_rank, 1u);
}

TEST(Gram, MatchesEvalSymmetricPsd) {
    std::mt19937_64 rng(5);
    const auto k = Kernel::squared_exponential(0.3);
    const auto pool = oracle::random_points(rng, 5, 2);
    const auto g = gram(k, pool);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) { EXPECT_EQ(g(i, j), eval(k, pool[i], pool[j])); }
    }
    EXPECT_TRUE(g.entries().isApprox(g.entries().transpose(), 1e-12));
    const auto ev = oracle::jacobi_eigenvalues(g.entries());
    EXPECT_GE(ev.back(), -1e-8 * ev.front());
}

TEST(Gram, PsdOverRandomPools) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    for (int family = 0; family < 5; ++family) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto k = oracle::random_kernel(rng, family);
            const auto g = gram(k, oracle::random_points(rng, size(rng), dim(rng)));
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries(), Eigen::EigenvaluesOnly);
            const double lmax = es.eigenvalues().maxCoeff();
            ASSERT_GE(es.eigenvalues().minCoeff(), -1e-8 * lmax) << "family " << family << " trial " << trial;
        }
    }
}

TEST(Spectrum, IdentityAndRankOne) {
    const GramMatrix identity(Eigen::MatrixXd::Identity(3, 3), {Point{0.0}, Point{1.0}, Point{2.0}});
    const auto s = spectrum(identity);
    ASSERT_EQ(s.eigenvalues.size(), 3u);
    for (double v : s.eigenvalues) { EXPECT_NEAR(v, 1.0, 1e-14); }
    EXPECT_DOUBLE_EQ(s.trace, 3.0);
    EXPECT_EQ(s.effective_rank, 3u);

    const GramMatrix rank_one(Eigen::MatrixXd::Ones(2, 2), {Point{0.0}, Point{0.0}});
    const auto r = spectrum(rank_one);
    EXPECT_NEAR(r.eigenvalues[0], 2.0, 1e-14);
    EXPECT_EQ(r.eigenvalues[1], 0.0);  // clamped, never negative
    EXPECT_FALSE(r.decay_exponent.has_value());
}

TEST(Spectrum, MatchesJacobiOracleOnSeGrid) {
    const std::pair<double, double> unit{0.0, 1.0};
    const auto g = gram(Kernel::squared_exponential(0.2), make_grid(std::span(&unit, 1), 10));
    const auto s = spectrum(g);
    const auto expected = oracle::jacobi_eigenvalues(g.entries());
    ASSERT_EQ(s.eigenvalues.size(), 10u);
    const double lmax = expected.front();
    for (std::size_t i = 0; i < 10; ++i) {
        // relative to the spectrum's scale; tiny eigenvalues are dominated by round-off
        EXPECT_NEAR(s.eigenvalues[i], std::max(expected[i], 0.0), 1e-8 * lmax) << i;
    }
    EXPECT_TRUE(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    double sum = 0.0;
    for (double v : s.eigenvalues) { sum += v; }
    EXPECT_NEAR(sum, s.trace, 1e-8 * s.trace);
    ASSERT_TRUE(s.decay_exponent.has_value());
    EXPECT_LT(*s.decay_exponent, 0.0);
}

TEST(Spectrum, NonFiniteEntriesRejected) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 1) = m(1, 0) = std::nan("");
    EXPECT_THROW(spectrum(GramMatrix(m, {Point{0.0}, Point{1.0}})), InputError);
}

TEST(Grid, LayoutAndBounds) {
    const std::vector<std::pair<double, double>> bounds{{0.0, 1.0}, {-1.0, 1.0}};
    const auto pool = make_grid(bounds, 3);
    ASSERT_EQ(pool.size(), 9u);
    EXPECT_EQ(pool[0], (Point{0.0, -1.0}));
    EXPECT_EQ(pool[1], (Point{0.0, 0.0}));
    EXPECT_EQ(pool[8], (Point{1.0, 1.0}));
}

}  // namespace
}  // namespace gpucb
