#pragma once

#include "lrce/firm.hpp"
#include "lrce/model.hpp"

namespace lrce {

/// Finite measure over types stored as mass per grid cell.
struct TypeMeasure {
    Vector weights;

    double mass() const { return weights.sum(); }
    static TypeMeasure zero(Index cells) { return {Vector::Zero(cells)}; }
};

/// Profit, quantity and cost integrated against a measure. The cost total includes the
/// entry cost once; the average weighted cost is infinite when nothing is produced.
struct AggregateBundle {
    double pi_bar = 0.0;
    double q_bar = 0.0;
    double c_bar = 0.0;
    double ac_bar = 0.0;
    bool ac_infinite = false;
};

/// One transition step applied to the staying part of eta:
/// out_j = sum_i stay_i * eta_i * K(i, j).
TypeMeasure apply_phi(const TypeMeasure& eta, Threshold m, const DiscretizedModel& d);

/// Factorised (I - survival * Phi_m) for one threshold. Only the staying block is factorised,
/// so repeated seeds (entrant and marginal-type measures) share one LU.
class Resolvent {
public:
    Resolvent(const DiscretizedModel& d, Threshold m, double survival);

    /// Solves lambda = seed + survival * Phi_m[lambda].
    TypeMeasure solve(const Vector& seed) const;

    Threshold threshold() const { return threshold_; }
    double survival() const { return survival_; }

private:
    const DiscretizedModel* model_;
    Threshold threshold_;
    double survival_;
    Index staying_ = 0;
    Vector stay_;
    Eigen::PartialPivLU<Matrix> lu_;
};

/// Normalised steady-state measure of a cohort seeded by the entrant distribution.
TypeMeasure lambda_entry(Threshold m, double survival, const DiscretizedModel& d);

/// Same construction seeded by the transition from the marginal type.
TypeMeasure lambda_exit(Threshold m, double survival, const DiscretizedModel& d);
TypeMeasure lambda_exit(Threshold m, double survival, const DiscretizedModel& d,
                        const Vector& kernel_at_m);

/// Sup-norm residual of lambda = seed + survival * Phi_m[lambda].
double resolvent_residual(const TypeMeasure& lambda, const Vector& seed, Threshold m,
                          double survival, const DiscretizedModel& d);

/// Physical cross-section n * Lambda(m) with survival 1 - rho.
TypeMeasure steady_state_measure(double entrant_mass, Threshold m, const DiscretizedModel& d);

AggregateBundle weighted_aggregates(const PriceProfile& statics, const TypeMeasure& eta,
                                    double entry_cost);
AggregateBundle weighted_aggregates(double p, const TypeMeasure& eta, const DiscretizedModel& d,
                                    double tol = default_quantity_tolerance);

} // namespace lrce
