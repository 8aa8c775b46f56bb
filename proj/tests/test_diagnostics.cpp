#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sbpsat/diagnostics.hpp"
#include "sbpsat/experiments.hpp"
#include "test_support.hpp"

using namespace sbpsat;
using namespace sbpsat::testing;

TEST(PEnergy, ConstantFieldIntegratesArea) {
    for (int order : {2, 4}) {
        const Grid2D g(0, 1, 0, 1, 21, 21);
        const auto ox = build_sbp(order, g, Axis::x);
        const auto oy = build_sbp(order, g, Axis::y);
        const auto v = MagneticField::sample(g, [](double, double) { return Vec2{1.0, 1.0}; });
        EXPECT_NEAR(p_energy(v, ox, oy), 2.0, 1e-14);
    }
}

TEST(PEnergy, MatchesDenseQuadraticForm) {
    std::mt19937_64 rng(11);
    const Grid2D g(-1, 1, 0, 2, 9, 12);
    const auto ox = build_sbp(4, g, Axis::x);
    const auto oy = build_sbp(4, g, Axis::y);
    const MagneticField v(g, random_vector(2 * g.size(), rng));
    const MatrixXd p = kron(MatrixXd::Identity(2, 2), kron(dense_p(ox), dense_p(oy)));
    const VectorXd e = to_eigen(v.data());
    const double ref = e.dot(p * e);
    EXPECT_NEAR(p_energy(v, ox, oy), ref, 1e-13 * ref);
}

TEST(PEnergy, RejectsMismatchedOperators) {
    const Grid2D g(0, 1, 0, 1, 9, 9);
    const auto o = build_sbp(2, 10, 0.1);
    EXPECT_THROW(p_energy(MagneticField(g), o, o), DimensionError);
}

TEST(L2Norm, UniformWeights) {
    const Grid2D g(0, 1, 0, 1, 3, 5);
    const std::vector<double> ones(g.size(), 1.0);
    EXPECT_NEAR(l2_norm(g, ones), std::sqrt(0.5 * 0.25 * 15), 1e-15);
}

TEST(Divergence, LinearFields) {
    const Grid2D g(0, 1, 0, 1, 11, 9);
    for (int order : {2, 4}) {
        const auto ox = build_sbp(order, g, Axis::x);
        const auto oy = build_sbp(order, g, Axis::y);
        const auto free = MagneticField::sample(g, [](double x, double y) { return Vec2{y, x}; });
        for (double d : discrete_divergence(free, ox, oy)) EXPECT_NEAR(d, 0.0, 1e-12);
        const auto source = MagneticField::sample(g, [](double x, double y) { return Vec2{x, y}; });
        for (double d : discrete_divergence(source, ox, oy)) EXPECT_NEAR(d, 2.0, 1e-12);
    }
}

TEST(RelativeError, Examples) {
    const Grid2D g(0, 1, 0, 1, 6, 6);
    const VectorFieldT exact = [](double x, double y, double) { return Vec2{1.0 + x, y}; };
    const auto same = MagneticField::sample(g, [&](double x, double y) { return exact(x, y, 0); });
    EXPECT_EQ(rel_percent_error(same, exact, 0.0), 0.0);

    auto scaled = same;
    for (double& x : scaled.data()) x *= 1.01;
    EXPECT_NEAR(rel_percent_error(scaled, exact, 0.0), 1.0, 1e-12);

    // Only magnitudes are compared.
    auto flipped = same;
    for (double& x : flipped.data()) x = -x;
    EXPECT_NEAR(rel_percent_error(flipped, exact, 0.0), 0.0, 1e-13);
}

TEST(RelativeError, ZeroExactRejected) {
    const Grid2D g(0, 1, 0, 1, 4, 4);
    const VectorFieldT zero = [](double, double, double) { return Vec2{0, 0}; };
    EXPECT_THROW(rel_percent_error(MagneticField(g), zero, 0.0), Error);
}

TEST(ConvergenceRate, Examples) {
    const std::vector<double> e{69, 21, 5.5, 1.3};
    const auto r = convergence_rate(e);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_FALSE(r[0]);
    EXPECT_NEAR(*r[1], std::log2(69.0 / 21.0), 1e-14);
    EXPECT_NEAR(*r[2], 1.93, 5e-3);
    EXPECT_NEAR(*r[3], 2.08, 5e-3);

    const std::vector<double> halving{1.0, 0.25};
    EXPECT_NEAR(*convergence_rate(halving)[1], 2.0, 1e-15);
}

TEST(ConvergenceRate, UndefinedPairs) {
    const std::vector<double> e{1.0, 0.0, 0.5};
    const auto r = convergence_rate(e);
    EXPECT_FALSE(r[1]);
    EXPECT_FALSE(r[2]);
    EXPECT_TRUE(convergence_rate(std::vector<double>{3.0})[0] == std::nullopt);
}

TEST(PairwiseSum, OrderIndependentOfChunking) {
    std::vector<double> v(1000);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / (k + 1);
    double naive = 0.0;
    for (double x : v) naive += x;
    EXPECT_NEAR(pairwise_sum(v), naive, 1e-12);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}
