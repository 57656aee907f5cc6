#pragma once

#include "lrce/measure.hpp"
#include "lrce/model.hpp"

#include <vector>

namespace lrce {

struct SolverOptions {
    /// Relative tolerance of the per-firm quantity solve.
    double quantity_tolerance = default_quantity_tolerance;
    /// Price root tolerance (absolute on the entry-profit residual).
    double tolerance = 1e-10;
    /// Entry-price bracket is grown geometrically from the choke price up to this cap.
    double price_cap = 1e12;
    /// Also sweep every boundary and a price grid to emit the global-minimum cross-checks.
    bool cross_checks = true;
    /// Price samples used by the average-weighted-cost cross-check.
    int ac_price_samples = 201;
};

/// Entry price and exit residual at one threshold.
struct SchedulePoint {
    Threshold threshold;
    double entry_price = 0.0;
    double exit_residual = 0.0;
};

/// Zero entry-profit schedule and the exit residual along it, one point per boundary.
struct Schedules {
    double survival = 0.0;
    std::vector<SchedulePoint> points;

    /// Number of strict sign changes of the exit residual along the boundaries.
    int residual_sign_changes(double zero_band = 0.0) const;
    Index argmin_entry_price() const;
};

/// Root of p -> pi_bar(p, Lambda(m)) - entry_cost. The bracket starts at the lowest price with
/// positive weighted output.
double entry_price_schedule(Threshold m, const DiscretizedModel& d, double survival,
                            const SolverOptions& opt = {});
double entry_price_schedule(const TypeMeasure& entry_weights, const DiscretizedModel& d,
                            const SolverOptions& opt = {});

/// pi_bar(p_E(m), Lambda_X(m)): the marginal type's continuation value along the entry schedule.
double exit_residual(Threshold m, const DiscretizedModel& d, double survival,
                     const SolverOptions& opt = {});

SchedulePoint evaluate_schedule(Threshold m, const DiscretizedModel& d, double survival,
                                const SolverOptions& opt = {});

Schedules entry_exit_schedules(const DiscretizedModel& d, double survival,
                               const SolverOptions& opt = {});

enum class ThresholdCase { interior, lowest, highest };

/// Joint solution of the entry and exit conditions (independent of demand).
struct EntryExitSolution {
    double price = 0.0;
    Threshold threshold;
    /// Boundaries bracketing the threshold.
    Index bracket_lower = 0;
    Index bracket_upper = 0;
    ThresholdCase location = ThresholdCase::interior;
    double survival = 0.0;
    double entry_residual = 0.0;
    double exit_residual = 0.0;
};

EntryExitSolution solve_entry_exit(const DiscretizedModel& d, double survival,
                                   const SolverOptions& opt = {});

struct LrceDiagnostics {
    double entry_residual = 0.0;
    double exit_residual = 0.0;
    /// |Q^d(p) - Q^s| / Q^d(p).
    double market_clearing_gap = 0.0;
    bool exit_condition_satisfied = false;
    bool cross_checks_run = false;
    /// min_k p_E(b_k) over the boundary sweep.
    double schedule_min_price = 0.0;
    Index schedule_argmin = 0;
    /// Brute-force min of AC_bar over the boundary x price-sample grid.
    double ac_grid_min = 0.0;
    int residual_sign_changes = 0;
    bool below_choke = false;
    /// Mean per-firm profit in the physical cross-section.
    double average_firm_profit = 0.0;
    /// Industry profit net of entry outlays per period.
    double aggregate_profit = 0.0;
};

struct LrceSolution {
    double price = 0.0;
    Threshold threshold;
    double threshold_value = 0.0;
    Index bracket_lower = 0;
    Index bracket_upper = 0;
    ThresholdCase location = ThresholdCase::interior;
    double entrant_mass = 0.0;
    double quantity = 0.0;
    TypeMeasure lambda_entry;
    TypeMeasure lambda_exit;
    TypeMeasure physical;
    LrceDiagnostics diagnostics;
};

/// Long-run competitive equilibrium. Throws NoActiveEquilibrium when demand vanishes at the
/// long-run supply price.
LrceSolution solve_lrce(const DiscretizedModel& d, const SolverOptions& opt = {});

/// Long-run inverse supply at quantity Q > 0 (horizontal).
double long_run_supply(const DiscretizedModel& d, double quantity, const SolverOptions& opt = {});

/// Aggregate output of the physical cross-section n * Lambda(m, survival 1 - rho) at price p.
double aggregate_supply(double p, double entrant_mass, Threshold m, const DiscretizedModel& d,
                        double tol = default_quantity_tolerance);

/// AC_bar(p, Lambda(b_k)) for every boundary k and every price; row k, column price index.
struct AcSurface {
    std::vector<double> prices;
    Matrix values;
};

AcSurface average_cost_surface(const DiscretizedModel& d, double survival,
                               const std::vector<double>& prices,
                               double tol = default_quantity_tolerance);

} // namespace lrce
