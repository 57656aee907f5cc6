#include "lrce/equilibrium.hpp"

#include "lrce/errors.hpp"
#include "lrce/parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace lrce {

namespace {

constexpr std::uintmax_t max_root_iterations = 300;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

double weighted_profit(double p, const TypeMeasure& eta, const DiscretizedModel& d, double tol) {
    return firm_statics(p, d.primitives().cost, d.types(), tol).profit.dot(eta.weights);
}

/// Tolerance functor for toms748: stop once the bracket is a few ulps wide.
struct UlpTolerance {
    bool operator()(double a, double b) const {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max({std::abs(a), std::abs(b), 1e-300});
    }
};

} // namespace

int Schedules::residual_sign_changes(double zero_band) const {
    int changes = 0;
    int last_sign = 0;
    for (const auto& pt : points) {
        const int sign = pt.exit_residual > zero_band ? 1 : (pt.exit_residual < -zero_band ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

Index Schedules::argmin_entry_price() const {
    Index best = 0;
    for (std::size_t k = 1; k < points.size(); ++k)
        if (points[k].entry_price < points[best].entry_price) best = static_cast<Index>(k);
    return best;
}

double entry_price_schedule(const TypeMeasure& entry_weights, const DiscretizedModel& d,
                            const SolverOptions& opt) {
    const auto& prim = d.primitives();
    const double kappa = prim.entry_cost;

    // Below the smallest zero-output marginal cost nobody produces and entry profit is flat.
    double p_lo = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < d.cells(); ++j)
        if (entry_weights.weights[j] > 0.0)
            p_lo = std::min(p_lo, prim.cost.marginal(0.0, d.types()[j]));
    if (!std::isfinite(p_lo)) throw NumericalError("entry price requested for an empty measure");

    auto gap = [&](double p) {
        return weighted_profit(p, entry_weights, d, opt.quantity_tolerance) - kappa;
    };
    const double f_lo = gap(p_lo);
    if (f_lo >= 0.0) return p_lo;

    double p_hi = std::max({2.0 * p_lo, prim.demand.choke_price(), 1.0});
    double f_hi = gap(p_hi);
    while (f_hi < 0.0) {
        p_hi *= 2.0;
        if (p_hi > opt.price_cap)
            throw NumericalError("entry profit stays below the entry cost up to price " + num(opt.price_cap) +
                                 "; the worst type cannot cover entry at any admissible price");
        f_hi = gap(p_hi);
    }

    std::uintmax_t iters = max_root_iterations;
    const auto [a, b] = boost::math::tools::toms748_solve(gap, p_lo, p_hi, f_lo, f_hi, UlpTolerance{}, iters);
    return std::abs(gap(a)) <= std::abs(gap(b)) ? a : b;
}

double entry_price_schedule(Threshold m, const DiscretizedModel& d, double survival,
                            const SolverOptions& opt) {
    return entry_price_schedule(lambda_entry(m, survival, d), d, opt);
}

SchedulePoint evaluate_schedule(Threshold m, const DiscretizedModel& d, double survival,
                                const SolverOptions& opt) {
    const Resolvent resolvent(d, m, survival);
    SchedulePoint pt;
    pt.threshold = m;
    pt.entry_price = entry_price_schedule(resolvent.solve(d.entrants()), d, opt);
    pt.exit_residual = weighted_profit(pt.entry_price, resolvent.solve(d.transition_from(m)), d,
                                       opt.quantity_tolerance);
    return pt;
}

double exit_residual(Threshold m, const DiscretizedModel& d, double survival, const SolverOptions& opt) {
    return evaluate_schedule(m, d, survival, opt).exit_residual;
}

Schedules entry_exit_schedules(const DiscretizedModel& d, double survival, const SolverOptions& opt) {
    Schedules out;
    out.survival = survival;
    out.points.resize(static_cast<std::size_t>(d.cells() + 1));
    parallel_for(out.points.size(), [&](std::size_t k) {
        out.points[k] = evaluate_schedule(Threshold::boundary(static_cast<Index>(k)), d, survival, opt);
    });
    return out;
}

EntryExitSolution solve_entry_exit(const DiscretizedModel& d, double survival, const SolverOptions& opt) {
    const Index g = d.cells();
    std::map<double, SchedulePoint> cache;
    auto at = [&](double position) -> const SchedulePoint& {
        auto it = cache.find(position);
        if (it == cache.end())
            it = cache.emplace(position, evaluate_schedule(Threshold{position}, d, survival, opt)).first;
        return it->second;
    };

    EntryExitSolution out;
    out.survival = survival;
    SchedulePoint chosen;

    if (at(static_cast<double>(g)).exit_residual >= 0.0) {
        out.location = ThresholdCase::highest;
        out.bracket_lower = out.bracket_upper = g;
        chosen = at(static_cast<double>(g));
    } else if (at(0.0).exit_residual <= 0.0) {
        out.location = ThresholdCase::lowest;
        out.bracket_lower = out.bracket_upper = 0;
        chosen = at(0.0);
    } else {
        // Single crossing along the schedule: locate it on boundaries, then refine inside the cell.
        Index lo = 0, hi = g;
        while (hi - lo > 1) {
            const Index mid = (lo + hi) / 2;
            (at(static_cast<double>(mid)).exit_residual > 0.0 ? lo : hi) = mid;
        }
        out.location = ThresholdCase::interior;
        out.bracket_lower = lo;
        out.bracket_upper = hi;

        auto residual = [&](double t) { return at(t).exit_residual; };
        std::uintmax_t iters = max_root_iterations;
        const auto [a, b] = boost::math::tools::toms748_solve(
            residual, static_cast<double>(lo), static_cast<double>(hi), at(static_cast<double>(lo)).exit_residual,
            at(static_cast<double>(hi)).exit_residual, UlpTolerance{}, iters);
        // Continuous residuals give |R| ~ 0 at both ends; a jump (matrix kernels) leaves the
        // bracket straddling it, and the lower entry price is the global minimiser.
        chosen = at(a).entry_price <= at(b).entry_price ? at(a) : at(b);
    }

    out.price = chosen.entry_price;
    out.threshold = chosen.threshold;
    out.exit_residual = chosen.exit_residual;
    out.entry_residual = weighted_profit(out.price, lambda_entry(out.threshold, survival, d), d,
                                         opt.quantity_tolerance) -
                         d.primitives().entry_cost;
    return out;
}

LrceSolution solve_lrce(const DiscretizedModel& d, const SolverOptions& opt) {
    const auto& prim = d.primitives();
    const double survival = d.firm_survival();
    const EntryExitSolution ee = solve_entry_exit(d, survival, opt);

    LrceSolution sol;
    sol.price = ee.price;
    sol.threshold = ee.threshold;
    sol.threshold_value = d.threshold_value(ee.threshold);
    sol.bracket_lower = ee.bracket_lower;
    sol.bracket_upper = ee.bracket_upper;
    sol.location = ee.location;

    const Resolvent perceived(d, ee.threshold, survival);
    sol.lambda_entry = perceived.solve(d.entrants());
    sol.lambda_exit = perceived.solve(d.transition_from(ee.threshold));

    const PriceProfile statics = firm_statics(sol.price, prim.cost, d.types(), opt.quantity_tolerance);
    const double demand = prim.demand.quantity(sol.price);
    if (!(demand > 0.0)) {
        throw NoActiveEquilibrium("no active equilibrium: long-run supply price " + num(sol.price) +
                                  " is at or above the choke price " + num(prim.demand.choke_price()) +
                                  ", so demand is zero; an equilibrium requires positive demand");
    }

    const TypeMeasure per_entrant = lambda_entry(ee.threshold, d.physical_survival(), d);
    const double q_per_entrant = statics.quantity.dot(per_entrant.weights);
    if (!(q_per_entrant > 0.0))
        throw NumericalError("physical cross-section produces nothing at the equilibrium price");
    sol.entrant_mass = demand / q_per_entrant;
    sol.physical.weights = sol.entrant_mass * per_entrant.weights;
    sol.quantity = statics.quantity.dot(sol.physical.weights);

    auto& diag = sol.diagnostics;
    diag.entry_residual = ee.entry_residual;
    diag.exit_residual = ee.exit_residual;
    diag.market_clearing_gap = std::abs(demand - sol.quantity) / demand;
    switch (ee.location) {
    case ThresholdCase::interior: diag.exit_condition_satisfied = std::abs(ee.exit_residual) <= 1e-6; break;
    case ThresholdCase::highest: diag.exit_condition_satisfied = ee.exit_residual >= 0.0; break;
    case ThresholdCase::lowest: diag.exit_condition_satisfied = ee.exit_residual <= 0.0; break;
    }
    diag.below_choke = sol.price < prim.demand.choke_price();
    const double profit_per_entrant = statics.profit.dot(per_entrant.weights);
    diag.average_firm_profit = profit_per_entrant / per_entrant.mass();
    diag.aggregate_profit = sol.entrant_mass * (profit_per_entrant - prim.entry_cost);

    if (opt.cross_checks) {
        const Schedules sched = entry_exit_schedules(d, survival, opt);
        diag.cross_checks_run = true;
        diag.schedule_argmin = sched.argmin_entry_price();
        diag.schedule_min_price = sched.points[static_cast<std::size_t>(diag.schedule_argmin)].entry_price;
        diag.residual_sign_changes = sched.residual_sign_changes(1e-9);

        std::vector<double> prices(static_cast<std::size_t>(opt.ac_price_samples));
        for (std::size_t s = 0; s < prices.size(); ++s)
            prices[s] = sol.price * (0.5 + static_cast<double>(s) / static_cast<double>(prices.size() - 1));
        diag.ac_grid_min = average_cost_surface(d, survival, prices, opt.quantity_tolerance).values.minCoeff();
    }
    return sol;
}

double long_run_supply(const DiscretizedModel& d, double quantity, const SolverOptions& opt) {
    if (!(quantity > 0.0)) throw ConfigError("/q", "supply is defined for positive quantities only");
    SolverOptions quiet = opt;
    quiet.cross_checks = false;
    return solve_entry_exit(d, d.firm_survival(), quiet).price;
}

double aggregate_supply(double p, double entrant_mass, Threshold m, const DiscretizedModel& d, double tol) {
    return firm_statics(p, d.primitives().cost, d.types(), tol)
        .quantity.dot(steady_state_measure(entrant_mass, m, d).weights);
}

AcSurface average_cost_surface(const DiscretizedModel& d, double survival, const std::vector<double>& prices,
                               double tol) {
    AcSurface out;
    out.prices = prices;
    out.values.resize(d.cells() + 1, static_cast<Index>(prices.size()));
    std::vector<PriceProfile> statics(prices.size());
    parallel_for(prices.size(), [&](std::size_t s) {
        statics[s] = firm_statics(prices[s], d.primitives().cost, d.types(), tol);
    });
    parallel_for(static_cast<std::size_t>(d.cells() + 1), [&](std::size_t k) {
        const TypeMeasure lambda = lambda_entry(Threshold::boundary(static_cast<Index>(k)), survival, d);
        for (std::size_t s = 0; s < prices.size(); ++s)
            out.values(static_cast<Index>(k), static_cast<Index>(s)) =
                weighted_aggregates(statics[s], lambda, d.primitives().entry_cost).ac_bar;
    });
    return out;
}

} // namespace lrce
