#include "lrce/twotype.hpp"

#include "lrce/errors.hpp"

#include <cmath>

namespace lrce {

OracleSolution solve_twotype(const TwoTypeModel& m) {
    if (!(m.fixed_low <= m.fixed_high) || m.fixed_low < 0.0)
        throw ValidationError(checks::structure, "two-type model needs 0 <= fixed_low <= fixed_high");
    if (!(m.curvature > 0.0)) throw ValidationError(checks::structure, "curvature must be positive");
    if (!(m.exit_probability > 0.0 && m.exit_probability <= 1.0))
        throw ValidationError(checks::positive_exit, "exit probability must lie in (0, 1]");
    if (!(m.discount >= 0.0 && m.discount <= 1.0))
        throw ValidationError(checks::structure, "discount must lie in [0, 1]");

    const double rho = m.exit_probability;
    OracleSolution s;
    s.weight_low = 1.0 / (2.0 * (1.0 - m.discount * (1.0 - rho)));
    s.weight_high = 0.5;

    const double weighted_fixed = (s.weight_low * m.fixed_low + s.weight_high * m.fixed_high) /
                                  (s.weight_low + s.weight_high);
    if (!(weighted_fixed > 0.0))
        throw NumericalError("zero-NPV condition has no positive root: weighted fixed cost is not positive");

    // Zero NPV: p^2/(2a) equals the weighted fixed cost.
    s.price = std::sqrt(2.0 * m.curvature * weighted_fixed);
    const double q = s.price / m.curvature;
    s.quantity_per_firm = q;
    s.marginal_cost = m.curvature * q;
    auto average_cost = [&](double fixed) { return m.curvature * q / 2.0 + fixed / q; };
    s.weighted_average_cost = (s.weight_low * average_cost(m.fixed_low) + s.weight_high * average_cost(m.fixed_high)) /
                              (s.weight_low + s.weight_high);

    const double mass_low = 1.0 / (2.0 * rho); // steady-state mass per entrant
    const double mass_high = 0.5;
    s.average_firm_cost = (mass_low * average_cost(m.fixed_low) + mass_high * average_cost(m.fixed_high)) /
                          (mass_low + mass_high);
    s.average_firm_profit = (s.price - s.average_firm_cost) * q;

    s.quantity = std::max(0.0, m.demand_intercept - m.demand_slope * s.price);
    s.entrant_mass = s.quantity / ((mass_low + mass_high) * q);

    // Planner: same construction with the physical weights.
    const double planner_fixed = (mass_low * m.fixed_low + mass_high * m.fixed_high) / (mass_low + mass_high);
    s.planner_price = std::sqrt(2.0 * m.curvature * planner_fixed);
    s.planner_quantity = std::max(0.0, m.demand_intercept - m.demand_slope * s.planner_price);
    return s;
}

ModelPrimitives twotype_surrogate(const TwoTypeModel& m) {
    if (!(m.fixed_low < m.fixed_high))
        throw ValidationError(checks::structure, "surrogate needs two distinct fixed costs");
    // Cell midpoints of a two-cell grid land exactly on the two fixed costs.
    const double half = (m.fixed_high - m.fixed_low) / 2.0;
    ModelPrimitives p;
    p.cost = CostSpec(QuadraticCost{m.curvature, 0.0}, FixedCost{0.0, 1.0});
    p.demand = DemandSpec(LinearDemand{m.demand_intercept, m.demand_slope});
    p.kernel.transition = MatrixKernel{Matrix::Identity(2, 2)};
    p.kernel.entrants = UniformEntrants{};
    p.type_low = m.fixed_low - half;
    p.type_high = m.fixed_high + half;
    p.discount = m.discount;
    p.exit_probability = m.exit_probability;
    p.entry_cost = 0.0;
    return p;
}

} // namespace lrce
