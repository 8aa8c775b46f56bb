#include <gtest/gtest.h>

#include <random>

#include "sbpsat/dissipation.hpp"
#include "test_support.hpp"

using namespace sbpsat;
using namespace sbpsat::testing;

namespace {
const DissipationScaling kScalings[] = {DissipationScaling::accurate, DissipationScaling::upwind};
}

TEST(Dissipation, ZeroAlphaIsZeroOperator) {
    for (int order : {2, 4})
        for (auto sc : kScalings) {
            const auto a = build_dissipation(order, sc, 0.0, 16, 0.1);
            for (int i = 0; i < 16; ++i)
                for (int k = 0; k < 16; ++k) EXPECT_EQ(a(i, k), 0.0);
        }
}

TEST(Dissipation, AnnihilatesConstants) {
    for (int order : {2, 4})
        for (auto sc : kScalings)
            for (int n : {8, 9, 33}) {
                const auto a = build_dissipation(order, sc, 2.5, n, 1.0 / (n - 1));
                std::vector<double> one(n, 1.0), out(n);
                a.apply(one, out);
                for (double v : out) EXPECT_NEAR(v, 0.0, 1e-13);
            }
}

TEST(Dissipation, MatchesDenseConstruction) {
    for (int order : {2, 4})
        for (auto sc : kScalings)
            for (int n : {8, 12}) {
                const double h = 0.3;
                const auto a = build_dissipation(order, sc, 1.7, n, h);
                const MatrixXd ref = dense_dissipation(order, sc, 1.7, build_sbp(order, n, h));
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k)
                        EXPECT_NEAR(a(i, k), ref(i, k), 1e-12 * std::max(1.0, std::abs(ref(i, k))))
                            << "order " << order << " n " << n << " (" << i << "," << k << ")";
            }
}

TEST(Dissipation, NegativeSemidefiniteInNorm) {
    std::mt19937_64 rng(3);
    for (int order : {2, 4})
        for (auto sc : kScalings) {
            const int n = 32;
            const auto a = build_dissipation(order, sc, 3.0, n, 1.0 / (n - 1));
            const auto sbp = build_sbp(order, n);
            std::vector<double> aw(n);
            for (int trial = 0; trial < 1000; ++trial) {
                const auto w = random_vector(n, rng);
                a.apply(w, aw);
                double form = 0.0, norm2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    form += w[i] * sbp.norm(i) * aw[i];
                    norm2 += w[i] * w[i];
                }
                EXPECT_LE(form, 1e-12 * norm2);
            }
        }
}

TEST(Dissipation, InteriorScalingOrders) {
    // On a smooth function the interior values scale like h^(2p) (accurate)
    // or h^(2p-1) (upwind).
    for (int order : {2, 4})
        for (auto sc : kScalings) {
            std::vector<double> mag;
            for (int n : {41, 81}) {
                const double h = 1.0 / (n - 1);
                const auto a = build_dissipation(order, sc, 1.0, n, h);
                std::vector<double> f(n), out(n);
                for (int i = 0; i < n; ++i) f[i] = std::sin(3.0 * i * h);
                a.apply(f, out);
                mag.push_back(std::abs(out[n / 2]));
            }
            const double expected = sc == DissipationScaling::accurate ? order : order - 1;
            EXPECT_NEAR(std::log2(mag[0] / mag[1]), expected, 0.05) << "order " << order;
        }
}

TEST(Dissipation, UpwindIsAccurateDividedByH) {
    const double h = 0.05;
    const auto acc = build_dissipation(4, DissipationScaling::accurate, 2.0, 21, h);
    const auto upw = build_dissipation(4, DissipationScaling::upwind, 2.0, 21, h);
    for (int i = 0; i < 21; ++i)
        for (int k = 0; k < 21; ++k) EXPECT_NEAR(upw(i, k), acc(i, k) / h, 1e-10);
}

TEST(Dissipation, FirstOrderUpwindInterior) {
    // Central difference plus order-2 upwind dissipation with alpha = u is
    // the one-sided upwind difference in the interior.
    const int n = 12;
    const double h = 0.1, u = 1.5;
    const auto d = build_sbp(2, n, h);
    const auto a = build_dissipation(2, DissipationScaling::upwind, u, n, h);
    std::mt19937_64 rng(9);
    const auto w = random_vector(n, rng);
    std::vector<double> dw(n), aw(n);
    d.apply(w, dw);
    a.apply(w, aw);
    for (int i = 1; i < n - 1; ++i) EXPECT_NEAR(-u * dw[i] + aw[i], -u * (w[i] - w[i - 1]) / h, 1e-12);
}

TEST(Dissipation, RejectsNegativeAlpha) {
    EXPECT_THROW(build_dissipation(2, DissipationScaling::accurate, -1.0, 10, 0.1), ConfigError);
    EXPECT_THROW(build_dissipation(4, DissipationScaling::upwind, 1.0, 7, 0.1), ConfigError);
}
