#pragma once

#include "lrce/model.hpp"
#include "lrce/twotype.hpp"

namespace lrce::testing {

/// Continuous-type benchmark: quadratic cost, g(theta) = theta, truncated-normal kernel.
inline ModelPrimitives baseline_industry() {
    ModelPrimitives m;
    m.cost = CostSpec(QuadraticCost{1.0, 0.0}, FixedCost{0.0, 1.0});
    m.demand = DemandSpec(LinearDemand{10.0, 1.0});
    m.kernel.transition = TruncatedNormalKernel{0.8, 2.0, 0.3};
    m.kernel.entrants = UniformEntrants{};
    m.type_low = 1.0;
    m.type_high = 3.0;
    m.discount = 0.9;
    m.exit_probability = 0.1;
    m.entry_cost = 0.0;
    return m;
}

/// Two permanent types with fixed costs 1 and 3.
inline TwoTypeModel two_type_example() { return TwoTypeModel{1.0, 1.0, 3.0, 0.9, 0.5, 10.0, 1.0}; }

inline DiscretizedModel two_type_grid() { return discretize(twotype_surrogate(two_type_example()), 2); }

/// Every type pays the same fixed cost 2; types still move, but nothing depends on them.
inline ModelPrimitives single_type() {
    ModelPrimitives m = baseline_industry();
    m.cost = CostSpec(QuadraticCost{1.0, 0.0}, FixedCost{2.0, 0.0});
    return m;
}

/// Recomputed closed-form values of the two-type economy.
namespace two_type_values {
inline constexpr double price = 1.8491497610279373;
inline constexpr double quantity = 8.1508502389720627;
inline constexpr double entrant_mass = 2.9385938737022674;
inline constexpr double firm_profit = 0.0430107526881722;
inline constexpr double planner_price = 1.8257418583505538;
inline constexpr double planner_quantity = 8.1742581416494462;
inline constexpr double weight_low = 1.0 / 1.1;
} // namespace two_type_values

} // namespace lrce::testing
