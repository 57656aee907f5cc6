#include "lrce/measure.hpp"

#include "lrce/errors.hpp"

#include <cmath>
#include <limits>

namespace lrce {

TypeMeasure apply_phi(const TypeMeasure& eta, Threshold m, const DiscretizedModel& d) {
    const Vector staying = d.stay_weights(m).cwiseProduct(eta.weights);
    return {d.transition().transpose() * staying};
}

Resolvent::Resolvent(const DiscretizedModel& d, Threshold m, double survival)
    : model_(&d), threshold_(m), survival_(survival) {
    if (!(survival >= 0.0 && survival < 1.0))
        throw NumericalError("resolvent needs survival factor in [0, 1)");
    stay_ = d.stay_weights(m);
    staying_ = static_cast<Index>(std::ceil(m.position));
    if (staying_ > d.cells()) staying_ = d.cells();
    if (staying_ == 0 || survival == 0.0) return;

    // Staying cells form a prefix; restrict lambda_A = seed_A + s K_AA^T diag(stay_A) lambda_A.
    Matrix block = -survival * d.transition().topLeftCorner(staying_, staying_).transpose() *
                   stay_.head(staying_).asDiagonal();
    block.diagonal().array() += 1.0;
    lu_.compute(block);
}

TypeMeasure Resolvent::solve(const Vector& seed) const {
    if (staying_ == 0 || survival_ == 0.0) return {seed};
    const Vector head = lu_.solve(seed.head(staying_));
    if (!head.allFinite()) throw NumericalError("resolvent solve produced non-finite weights");
    const Vector flow = stay_.head(staying_).cwiseProduct(head);
    Vector out = seed + survival_ * model_->transition().topRows(staying_).transpose() * flow;
    return {out};
}

TypeMeasure lambda_entry(Threshold m, double survival, const DiscretizedModel& d) {
    return Resolvent(d, m, survival).solve(d.entrants());
}

TypeMeasure lambda_exit(Threshold m, double survival, const DiscretizedModel& d) {
    return lambda_exit(m, survival, d, d.transition_from(m));
}

TypeMeasure lambda_exit(Threshold m, double survival, const DiscretizedModel& d,
                        const Vector& kernel_at_m) {
    return Resolvent(d, m, survival).solve(kernel_at_m);
}

double resolvent_residual(const TypeMeasure& lambda, const Vector& seed, Threshold m,
                          double survival, const DiscretizedModel& d) {
    const Vector r = lambda.weights - seed - survival * apply_phi(lambda, m, d).weights;
    return r.cwiseAbs().maxCoeff();
}

TypeMeasure steady_state_measure(double entrant_mass, Threshold m, const DiscretizedModel& d) {
    TypeMeasure out = lambda_entry(m, d.physical_survival(), d);
    out.weights *= entrant_mass;
    return out;
}

AggregateBundle weighted_aggregates(const PriceProfile& statics, const TypeMeasure& eta,
                                    double entry_cost) {
    AggregateBundle out;
    out.pi_bar = statics.profit.dot(eta.weights);
    out.q_bar = statics.quantity.dot(eta.weights);
    out.c_bar = statics.cost.dot(eta.weights) + entry_cost;
    if (out.q_bar > 0.0) {
        out.ac_bar = out.c_bar / out.q_bar;
    } else {
        out.ac_bar = std::numeric_limits<double>::infinity();
        out.ac_infinite = true;
    }
    return out;
}

AggregateBundle weighted_aggregates(double p, const TypeMeasure& eta, const DiscretizedModel& d,
                                    double tol) {
    return weighted_aggregates(firm_statics(p, d.primitives().cost, d.types(), tol), eta,
                               d.primitives().entry_cost);
}

} // namespace lrce
