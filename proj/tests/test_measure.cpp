#include "fixtures.hpp"
#include "oracles.hpp"

#include "lrce/errors.hpp"
#include "lrce/measure.hpp"

#include <gtest/gtest.h>

using namespace lrce;
using namespace lrce::testing;

namespace {

DiscretizedModel hand_two_cell() {
    ModelPrimitives m = baseline_industry();
    Matrix k(2, 2);
    k << 0.7, 0.3, 0.4, 0.6;
    m.kernel.transition = MatrixKernel{k};
    return discretize(m, 2);
}

} // namespace

TEST(ApplyPhi, EmptyStaySetGivesZero) {
    const DiscretizedModel d = discretize(baseline_industry(), 31);
    const TypeMeasure out = apply_phi({d.entrants()}, Threshold::boundary(0), d);
    EXPECT_DOUBLE_EQ(out.mass(), 0.0);
}

TEST(ApplyPhi, FullStaySetIsOneKernelStep) {
    const DiscretizedModel d = discretize(baseline_industry(), 31);
    const TypeMeasure out = apply_phi({d.entrants()}, Threshold::boundary(31), d);
    const Vector expected = d.transition().transpose() * d.entrants();
    EXPECT_LT((out.weights - expected).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(ApplyPhi, HandMatrixProduct) {
    const DiscretizedModel d = hand_two_cell();
    const TypeMeasure out = apply_phi({Vector::Ones(2)}, Threshold::boundary(1), d);
    EXPECT_NEAR(out.weights[0], 0.7, 1e-15);
    EXPECT_NEAR(out.weights[1], 0.3, 1e-15);
}

TEST(LambdaEntry, NoSurvivalOrNoStayersReturnsSeed) {
    const DiscretizedModel d = discretize(baseline_industry(), 51);
    EXPECT_LT((lambda_entry(Threshold::boundary(30), 0.0, d).weights - d.entrants()).lpNorm<Eigen::Infinity>(), 1e-15);
    EXPECT_LT((lambda_entry(Threshold::boundary(0), 0.8, d).weights - d.entrants()).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(LambdaEntry, PermanentTypeWeights) {
    const DiscretizedModel d = two_type_grid();
    const TypeMeasure l = lambda_entry(Threshold::boundary(1), 0.45, d);
    EXPECT_NEAR(l.weights[0], 0.5 / 0.55, 1e-14);
    EXPECT_NEAR(l.weights[1], 0.5, 1e-14);
}

TEST(LambdaEntry, ResidualAndDenseSolveAgree) {
    const DiscretizedModel d = discretize(baseline_industry(), 201);
    for (double t : {0.0, 37.0, 88.4, 150.5, 201.0}) {
        const TypeMeasure l = lambda_entry(Threshold{t}, 0.81, d);
        EXPECT_LE(resolvent_residual(l, d.entrants(), Threshold{t}, 0.81, d), 1e-10);
        EXPECT_LT((l.weights - dense_resolvent(d.entrants(), Threshold{t}, 0.81, d)).lpNorm<Eigen::Infinity>(), 1e-12);
    }
}

TEST(LambdaExit, SeedReturnedWithoutSurvivalOrStayers) {
    const DiscretizedModel d = discretize(baseline_industry(), 51);
    const Threshold low = Threshold::boundary(0);
    EXPECT_LT((lambda_exit(Threshold::boundary(20), 0.0, d).weights - d.transition_from(Threshold::boundary(20)))
                  .lpNorm<Eigen::Infinity>(),
              1e-15);
    EXPECT_LT((lambda_exit(low, 0.9, d).weights - d.transition_from(low)).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(LambdaExit, MatchesFiftyTermNeumannSum) {
    const DiscretizedModel d = discretize(baseline_industry(), 201);
    const Threshold m = Threshold::boundary(100);
    const TypeMeasure lx = lambda_exit(m, 0.81, d);
    const Vector series = neumann(d.transition_from(m), m, 0.81, d, 50);
    EXPECT_NEAR(lx.mass(), series.sum(), 1e-8);
    EXPECT_LT((lx.weights - series).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LE(resolvent_residual(lx, d.transition_from(m), m, 0.81, d), 1e-10);
}

TEST(LambdaExit, ExplicitKernelRow) {
    const DiscretizedModel d = discretize(baseline_industry(), 41);
    const Vector seed = d.transition().row(7).transpose();
    const TypeMeasure lx = lambda_exit(Threshold::boundary(20), 0.5, d, seed);
    EXPECT_LT((lx.weights - dense_resolvent(seed, Threshold::boundary(20), 0.5, d)).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(Resolvent, RejectsSurvivalOfOne) {
    const DiscretizedModel d = discretize(baseline_industry(), 11);
    EXPECT_THROW(Resolvent(d, Threshold::boundary(5), 1.0), Error);
}

TEST(SteadyState, ZeroMassAndLinearity) {
    const DiscretizedModel d = discretize(baseline_industry(), 51);
    const Threshold m = Threshold{23.5};
    EXPECT_DOUBLE_EQ(steady_state_measure(0.0, m, d).mass(), 0.0);
    const TypeMeasure one = steady_state_measure(1.0, m, d), two = steady_state_measure(2.0, m, d);
    EXPECT_LT((two.weights - 2.0 * one.weights).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(SteadyState, PermanentTypes) {
    const TypeMeasure mu = steady_state_measure(1.0, Threshold::boundary(1), two_type_grid());
    EXPECT_NEAR(mu.weights[0], 1.0, 1e-14);
    EXPECT_NEAR(mu.weights[1], 0.5, 1e-14);
}

TEST(Aggregates, ZeroMeasure) {
    const DiscretizedModel d = discretize(baseline_industry(), 11);
    const AggregateBundle a = weighted_aggregates(2.0, TypeMeasure::zero(11), d);
    EXPECT_EQ(a.pi_bar, 0.0);
    EXPECT_EQ(a.q_bar, 0.0);
    EXPECT_EQ(a.c_bar, 0.0);
    EXPECT_TRUE(a.ac_infinite);
}

TEST(Aggregates, TwoTypeZeroProfitAndAverageCost) {
    const DiscretizedModel d = two_type_grid();
    TypeMeasure l{Vector(2)};
    l.weights << 0.909091, 0.5;
    const AggregateBundle a = weighted_aggregates(1.849150, l, d);
    EXPECT_LT(std::abs(a.pi_bar), 1e-6);
    EXPECT_NEAR(a.ac_bar, 1.849150, 1e-6);
    EXPECT_FALSE(a.ac_infinite);
}

TEST(Aggregates, ProfitIdentity) {
    const DiscretizedModel d = discretize(baseline_industry(), 51).with_entry_cost(0.3);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const TypeMeasure eta{random_measure(51, rng)};
        const double p = 0.5 + 0.2 * k;
        const AggregateBundle a = weighted_aggregates(p, eta, d);
        EXPECT_NEAR(a.pi_bar, p * a.q_bar - (a.c_bar - 0.3), 1e-12 * std::max(1.0, std::abs(a.c_bar)));
    }
}
