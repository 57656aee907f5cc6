#include "lrce/value.hpp"

#include "lrce/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lrce {

namespace {

constexpr int max_iterations = 2'000'000;

template <class Step>
ValueTable iterate(double p, const DiscretizedModel& d, double survival, double tol, Step step) {
    if (!(survival >= 0.0 && survival < 1.0))
        throw NumericalError("value iteration needs survival factor in [0, 1)");
    const Vector pi = firm_statics(p, d.primitives().cost, d.types()).profit;

    ValueTable out;
    out.price = p;
    out.survival = survival;
    Vector v = pi;
    const double stop = tol * (1.0 - survival);
    double change = 0.0;
    int it = 0;
    if (survival > 0.0) {
        do {
            Vector next = pi + survival * step(Vector(d.transition() * v));
            change = (next - v).cwiseAbs().maxCoeff();
            v.swap(next);
            if (++it > max_iterations) throw NumericalError("value iteration did not converge");
        } while (change > stop);
    }
    out.values = v;
    out.continuation = d.transition() * v;
    out.iterations = it;
    out.bellman_residual = (pi + survival * step(Vector(out.continuation)) - v).cwiseAbs().maxCoeff();
    out.error_bound = survival > 0.0 ? change * survival / (1.0 - survival) : 0.0;
    return out;
}

} // namespace

ValueTable value_fixed_threshold(double p, Threshold m, const DiscretizedModel& d, double survival,
                                 double tol) {
    const Vector stay = d.stay_weights(m);
    ValueTable out = iterate(p, d, survival, tol, [&](const Vector& cont) -> Vector {
        return stay.cwiseProduct(cont);
    });
    out.threshold = m;
    return out;
}

ValueTable value_optimal(double p, const DiscretizedModel& d, double survival, double tol) {
    return iterate(p, d, survival, tol,
                   [](const Vector& cont) -> Vector { return cont.cwiseMax(0.0); });
}

ThresholdBracket optimal_threshold(const ValueTable& table, const DiscretizedModel& d) {
    const Vector& c = table.continuation;
    const Index g = d.cells();
    const double slack = 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff());
    for (Index j = 0; j + 1 < g; ++j) {
        if (c[j + 1] > c[j] + slack)
            throw NumericalError("continuation value increases between cells " + std::to_string(j) +
                                 " and " + std::to_string(j + 1));
    }

    ThresholdBracket out;
    if (c[g - 1] >= 0.0) {
        out.lower = out.upper = out.policy = g;
        out.estimate = d.boundary(g);
        return out;
    }
    if (c[0] <= 0.0) {
        out.lower = out.upper = out.policy = 0;
        out.estimate = d.boundary(0);
        return out;
    }
    Index last = 0;
    while (last + 1 < g && c[last + 1] > 0.0) ++last;
    const double h = d.spacing();
    const double zero = d.types()[last] + h * c[last] / (c[last] - c[last + 1]);
    out.policy = last + 1;
    out.estimate = zero;
    if (zero <= d.boundary(last + 1)) {
        out.lower = last;
        out.upper = last + 1;
    } else {
        out.lower = last + 1;
        out.upper = last + 2;
    }
    return out;
}

} // namespace lrce
