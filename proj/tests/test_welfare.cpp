#include "fixtures.hpp"

#include "lrce/welfare.hpp"

#include <gtest/gtest.h>

using namespace lrce;
using namespace lrce::testing;
namespace fa = lrce::testing::two_type_values;

TEST(Planner, PermanentTypesClosedForm) {
    const PlannerSolution p = solve_planner(two_type_grid());
    EXPECT_NEAR(p.price, std::sqrt(2.0 * (1.0 * 1 + 0.5 * 3) / 1.5), 1e-9);
    EXPECT_NEAR(p.price, fa::planner_price, 1e-9);
    EXPECT_NEAR(p.quantity, fa::planner_quantity, 1e-9);
    EXPECT_NEAR(p.surplus, p.gross_benefit - p.total_cost, 1e-12);
}

TEST(Planner, EqualsEquilibriumWhenFirmsDoNotDiscount) {
    ModelPrimitives m = baseline_industry();
    m.discount = 1.0;
    const DiscretizedModel d = discretize(m, 101);
    const PlannerSolution p = solve_planner(d);
    const LrceSolution e = solve_lrce(d);
    EXPECT_NEAR(p.price, e.price, 1e-12);
    EXPECT_NEAR(p.quantity, e.quantity, 1e-10);
    EXPECT_NEAR(p.threshold.position, e.threshold.position, 1e-12);
}

TEST(Planner, SingleTypeMatchesEquilibriumForAnyDiscount) {
    for (double delta : {0.3, 0.9}) {
        ModelPrimitives m = single_type();
        m.discount = delta;
        const DiscretizedModel d = discretize(m, 41);
        EXPECT_NEAR(solve_planner(d).price, solve_lrce(d).price, 1e-9);
        EXPECT_NEAR(solve_planner(d).price, 2.0, 1e-9);
    }
}

TEST(Compare, PermanentTypes) {
    const ComparisonReport r = compare(two_type_grid());
    EXPECT_NEAR(r.equilibrium.price, fa::price, 1e-9);
    EXPECT_NEAR(r.planner.price, fa::planner_price, 1e-9);
    EXPECT_TRUE(r.strict_case);
    EXPECT_TRUE(r.price_lower_at_planner);
    EXPECT_TRUE(r.quantity_higher_at_planner);
    EXPECT_TRUE(r.firm_quantities_weakly_higher);
    EXPECT_TRUE(r.surplus_dominates);
    EXPECT_GT(r.planner_surplus, r.equilibrium_surplus);
    EXPECT_TRUE(r.consistent);
}

TEST(Compare, Baseline) {
    const ComparisonReport r = compare(discretize(baseline_industry(), 201));
    EXPECT_TRUE(r.strict_case);
    EXPECT_TRUE(r.consistent);
    EXPECT_GT(r.price_gap, 0.0);
    EXPECT_GT(r.quantity_gap, 0.0);
    EXPECT_GT(r.planner_surplus, r.equilibrium_surplus);
}

TEST(Compare, NoGapsWithoutDiscounting) {
    TwoTypeModel t = two_type_example();
    t.discount = 1.0;
    const ComparisonReport r = compare(discretize(twotype_surrogate(t), 2));
    EXPECT_LT(std::abs(r.price_gap), 1e-12);
    EXPECT_LT(std::abs(r.quantity_gap), 1e-12);
    EXPECT_FALSE(r.strict_case);
    EXPECT_TRUE(r.consistent);
}

TEST(Compare, EquilibriumPriceFallsWithDiscount) {
    SolverOptions opt;
    opt.cross_checks = false;
    double previous = std::numeric_limits<double>::infinity();
    for (double delta : {0.5, 0.7, 0.9, 1.0}) {
        ModelPrimitives m = baseline_industry();
        m.discount = delta;
        const double p = solve_lrce(discretize(m, 201), opt).price;
        EXPECT_LT(p, previous) << "delta=" << delta;
        previous = p;
    }
}

TEST(Surplus, RecomputesEquilibriumSurplus) {
    const DiscretizedModel d = two_type_grid();
    const ComparisonReport r = compare(d);
    const auto& e = r.equilibrium;
    EXPECT_NEAR(steady_state_surplus(d, e.price, e.threshold, e.entrant_mass, e.quantity), r.equilibrium_surplus, 1e-12);
}
