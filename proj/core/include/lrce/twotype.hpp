#pragma once

#include "lrce/model.hpp"

namespace lrce {

/// Two equally likely permanent types that differ only in fixed cost, variable cost
/// a*q^2/2, free entry and linear demand intercept - slope*p.
struct TwoTypeModel {
    double curvature = 1.0;
    double fixed_low = 1.0;
    double fixed_high = 3.0;
    double discount = 0.9;
    double exit_probability = 0.5;
    double demand_intercept = 10.0;
    double demand_slope = 1.0;
};

struct OracleSolution {
    double weight_low = 0.0;  // entry weight on the low-cost type
    double weight_high = 0.0; // entry weight on the high-cost type
    double price = 0.0;
    double quantity_per_firm = 0.0;
    /// Weighted average cost at the per-firm quantity; equals the price.
    double weighted_average_cost = 0.0;
    double marginal_cost = 0.0;
    /// Cost per unit of the average active firm (steady-state weights).
    double average_firm_cost = 0.0;
    double average_firm_profit = 0.0;
    double quantity = 0.0;
    double entrant_mass = 0.0;
    double planner_price = 0.0;
    double planner_quantity = 0.0;
};

/// Closed-form equilibrium. Throws NumericalError when the weighted fixed cost is not positive
/// (zero-NPV equation has no positive root) and ValidationError when the inputs are malformed.
OracleSolution solve_twotype(const TwoTypeModel& m);

/// Two-cell, identity-kernel model reproducing the two-type economy on the general solver.
/// The identity kernel has no full support, so callers must skip the assumption validator.
ModelPrimitives twotype_surrogate(const TwoTypeModel& m);

} // namespace lrce
