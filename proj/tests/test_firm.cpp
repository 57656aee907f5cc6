#include "fixtures.hpp"
#include "oracles.hpp"

#include "lrce/firm.hpp"
#include "lrce/measure.hpp"

#include <gtest/gtest.h>

using namespace lrce;

namespace {
const CostSpec canonical(QuadraticCost{1.0, 0.0}, FixedCost{0.0, 1.0});
}

TEST(OptimalQuantity, ClosedFormExamples) {
    EXPECT_NEAR(optimal_quantity(1.849150, 1.0, canonical), 1.849150, 1e-9);
    EXPECT_DOUBLE_EQ(optimal_quantity(0.0, 2.0, canonical), 0.0);
    const CostSpec steep(QuadraticCost{2.0, 0.0}, FixedCost{});
    EXPECT_NEAR(optimal_quantity(3.0, 1.0, steep), 1.5, 1e-9);
}

TEST(OptimalQuantity, PowerCostClosedForm) {
    // c'(q) = a q^(g-1)  =>  q = (p/a)^(1/(g-1))
    const CostSpec pw(PowerCost{2.0, 1.5}, FixedCost{});
    EXPECT_NEAR(optimal_quantity(3.0, 1.0, pw), std::pow(1.5, 2.0), 1e-9);
}

TEST(OptimalQuantity, ZeroAtOrBelowMarginalCostAtZero) {
    const CostSpec shifted(PowerCost{1.0, 2.0}, FixedCost{});
    EXPECT_DOUBLE_EQ(optimal_quantity(-0.0, 1.0, shifted), 0.0);
}

TEST(Profit, ClosedFormExamples) {
    EXPECT_NEAR(profit(1.849150, 1.0, canonical), 1.849150 * 1.849150 / 2 - 1, 1e-9);
    EXPECT_NEAR(profit(1.849150, 1.0, canonical), 0.709678, 1e-6);
    EXPECT_DOUBLE_EQ(profit(0.0, 2.0, canonical), -2.0);
    EXPECT_NEAR(profit(1.849150, 3.0, canonical), -1.290322, 1e-6);
}

TEST(Profit, MonotoneInPriceAndType) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> price(0.0, 8.0), type(1.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        double p1 = price(rng), p2 = price(rng);
        if (p1 > p2) std::swap(p1, p2);
        const double th = type(rng);
        EXPECT_LE(profit(p1, th, canonical), profit(p2, th, canonical) + 1e-12);
        if (optimal_quantity(p1, th, canonical) > 0.0 && p2 > p1 + 1e-9)
            EXPECT_LT(profit(p1, th, canonical), profit(p2, th, canonical));
        double t1 = type(rng), t2 = type(rng);
        if (t1 > t2) std::swap(t1, t2);
        EXPECT_GE(profit(p1, t1, canonical), profit(p1, t2, canonical));
    }
}

TEST(Profit, EnvelopeDerivativeIsQuantity) {
    const CostSpec pw(PowerCost{1.5, 1.7}, FixedCost{0.5, 1.0});
    for (double p : {0.5, 1.0, 2.5, 6.0}) {
        for (double th : {1.0, 2.0}) {
            const double fd = lrce::testing::central_difference([&](double x) { return profit(x, th, pw, 1e-14); }, p, 1e-4);
            EXPECT_NEAR(fd, optimal_quantity(p, th, pw), 1e-6) << "p=" << p;
        }
    }
}

TEST(Profit, BoundedBelowByFixedCost) {
    for (double p : {0.0, 0.5, 3.0})
        for (double th : {1.0, 2.0, 3.0}) EXPECT_GE(profit(p, th, canonical), -canonical.cost(0.0, th) - 1e-12);
}

TEST(FirmStatics, ProfileMatchesPointwise) {
    const DiscretizedModel d = discretize(lrce::testing::baseline_industry(), 21);
    const PriceProfile s = firm_statics(2.0, canonical, d.types());
    for (Index i = 0; i < d.cells(); ++i) {
        EXPECT_DOUBLE_EQ(s.quantity[i], optimal_quantity(2.0, d.types()[i], canonical));
        EXPECT_NEAR(s.profit[i], 2.0 * s.quantity[i] - s.cost[i], 1e-14);
    }
}
