#include "lrce/welfare.hpp"

#include "lrce/errors.hpp"

#include <cmath>
#include <sstream>

namespace lrce {

double steady_state_surplus(const DiscretizedModel& d, double price, Threshold m, double entrant_mass,
                            double quantity, double tol) {
    const auto& prim = d.primitives();
    const PriceProfile statics = firm_statics(price, prim.cost, d.types(), tol);
    const TypeMeasure cross_section = steady_state_measure(entrant_mass, m, d);
    const double outlays = statics.cost.dot(cross_section.weights) + prim.entry_cost * entrant_mass;
    return prim.demand.gross_benefit(quantity) - outlays;
}

PlannerSolution solve_planner(const DiscretizedModel& d, const SolverOptions& opt) {
    // The planner weighs the future like a firm with discount one.
    const DiscretizedModel patient = d.with_discount(1.0);
    const auto& prim = d.primitives();
    const EntryExitSolution ee = solve_entry_exit(patient, patient.firm_survival(), opt);

    PlannerSolution out;
    out.price = ee.price;
    out.threshold = ee.threshold;
    out.threshold_value = d.threshold_value(ee.threshold);
    out.bracket_lower = ee.bracket_lower;
    out.bracket_upper = ee.bracket_upper;
    out.location = ee.location;

    out.quantity = prim.demand.quantity(out.price);
    if (!(out.quantity > 0.0)) {
        std::ostringstream os;
        os.precision(12);
        os << "no active planner allocation: minimised average weighted cost " << out.price
           << " is at or above the choke price " << prim.demand.choke_price();
        throw NoActiveEquilibrium(os.str());
    }
    const PriceProfile statics = firm_statics(out.price, prim.cost, d.types(), opt.quantity_tolerance);
    const TypeMeasure per_entrant = lambda_entry(out.threshold, d.physical_survival(), d);
    const AggregateBundle agg = weighted_aggregates(statics, per_entrant, prim.entry_cost);
    if (!(agg.q_bar > 0.0)) throw NumericalError("planner cross-section produces nothing");
    out.entrant_mass = out.quantity / agg.q_bar;
    out.physical.weights = out.entrant_mass * per_entrant.weights;
    out.gross_benefit = prim.demand.gross_benefit(out.quantity);
    out.total_cost = out.entrant_mass * agg.c_bar;
    out.surplus = out.gross_benefit - out.total_cost;
    return out;
}

ComparisonReport compare(const DiscretizedModel& d, const SolverOptions& opt) {
    ComparisonReport r;
    r.equilibrium = solve_lrce(d, opt);
    r.planner = solve_planner(d, opt);
    const auto& eq = r.equilibrium;
    const auto& pl = r.planner;

    r.equilibrium_surplus = steady_state_surplus(d, eq.price, eq.threshold, eq.entrant_mass, eq.quantity,
                                                 opt.quantity_tolerance);
    r.planner_surplus = pl.surplus;
    r.price_gap = eq.price - pl.price;
    r.quantity_gap = pl.quantity - eq.quantity;

    const auto& cost = d.primitives().cost;
    const Vector q_eq = firm_statics(eq.price, cost, d.types(), opt.quantity_tolerance).quantity;
    const Vector q_pl = firm_statics(pl.price, cost, d.types(), opt.quantity_tolerance).quantity;
    r.firm_quantities_weakly_higher = ((q_eq - q_pl).array() >= -1e-12).all();

    r.strict_case = d.primitives().discount < 1.0 && eq.location != ThresholdCase::lowest;
    r.price_lower_at_planner = pl.price < eq.price;
    r.quantity_higher_at_planner = pl.quantity > eq.quantity;
    const double surplus_slack = 1e-9 * std::max(1.0, std::abs(r.planner_surplus));
    r.surplus_dominates = r.planner_surplus >= r.equilibrium_surplus - surplus_slack;
    r.consistent = r.firm_quantities_weakly_higher && r.surplus_dominates &&
                   (!r.strict_case || (r.price_lower_at_planner && r.quantity_higher_at_planner));
    return r;
}

} // namespace lrce
