#pragma once

#include "lrce/equilibrium.hpp"

namespace lrce {

/// Allocation maximising steady-state flow surplus: common marginal cost p, exit threshold m,
/// quantity Q with P^d(Q) = AC_bar(p, Lambda(m, 1)), entrant mass n.
struct PlannerSolution {
    double price = 0.0;
    Threshold threshold;
    double threshold_value = 0.0;
    Index bracket_lower = 0;
    Index bracket_upper = 0;
    ThresholdCase location = ThresholdCase::interior;
    double quantity = 0.0;
    double entrant_mass = 0.0;
    double gross_benefit = 0.0;
    double total_cost = 0.0;
    double surplus = 0.0;
    TypeMeasure physical;
};

PlannerSolution solve_planner(const DiscretizedModel& d, const SolverOptions& opt = {});

/// Steady-state flow surplus of an allocation: gross benefit of Q minus the production and
/// entry outlays of the cross-section n * Lambda(m, 1).
double steady_state_surplus(const DiscretizedModel& d, double price, Threshold m, double entrant_mass,
                            double quantity, double tol = default_quantity_tolerance);

struct ComparisonReport {
    LrceSolution equilibrium;
    PlannerSolution planner;
    double equilibrium_surplus = 0.0;
    double planner_surplus = 0.0;
    double price_gap = 0.0;    // p^e - p*
    double quantity_gap = 0.0; // Q* - Q^e
    /// Each type produces weakly more at the equilibrium price than at the planner's.
    bool firm_quantities_weakly_higher = false;
    /// Discount below one and an equilibrium threshold above the lowest type.
    bool strict_case = false;
    bool price_lower_at_planner = false;
    bool quantity_higher_at_planner = false;
    bool surplus_dominates = false;
    /// All of the above that apply in the current case hold.
    bool consistent = false;
};

ComparisonReport compare(const DiscretizedModel& d, const SolverOptions& opt = {});

} // namespace lrce
