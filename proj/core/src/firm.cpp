#include "lrce/firm.hpp"

#include "lrce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lrce {

namespace {
constexpr int max_bracket_doublings = 1100;
constexpr int max_bisections = 200;
} // namespace

double optimal_quantity(double p, double theta, const CostSpec& cost, double tol) {
    if (!(p >= 0.0)) throw NumericalError("optimal_quantity: negative or NaN price");
    if (p <= cost.marginal(0.0, theta)) return 0.0;

    const double target_gap = tol * std::max(1.0, p);
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (cost.marginal(hi, theta) < p) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > max_bracket_doublings || !std::isfinite(hi)) {
            throw NumericalError("optimal_quantity: marginal cost stays below price " +
                                 std::to_string(p) + "; cost family is not unbounded");
        }
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < max_bisections; ++it) {
        mid = 0.5 * (lo + hi);
        const double gap = cost.marginal(mid, theta) - p;
        if (std::abs(gap) <= target_gap || mid <= lo || mid >= hi) break;
        (gap < 0.0 ? lo : hi) = mid;
    }
    return mid;
}

double profit(double p, double theta, const CostSpec& cost, double tol) {
    const double q = optimal_quantity(p, theta, cost, tol);
    return p * q - cost.cost(q, theta);
}

PriceProfile firm_statics(double p, const CostSpec& cost, const Vector& types, double tol) {
    PriceProfile out;
    out.price = p;
    const Index n = types.size();
    out.quantity.resize(n);
    out.profit.resize(n);
    out.cost.resize(n);
    for (Index j = 0; j < n; ++j) {
        const double q = optimal_quantity(p, types[j], cost, tol);
        const double c = cost.cost(q, types[j]);
        out.quantity[j] = q;
        out.cost[j] = c;
        out.profit[j] = p * q - c;
    }
    return out;
}

} // namespace lrce
