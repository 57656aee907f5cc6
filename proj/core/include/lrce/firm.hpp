#pragma once

#include "lrce/model.hpp"

namespace lrce {

inline constexpr double default_quantity_tolerance = 1e-10;

/// Profit-maximising output at price p: the root of C'(q, theta) = p when p exceeds
/// C'(0, theta), otherwise zero. Bracketed bisection; |C'(q) - p| <= tol * max(1, p).
double optimal_quantity(double p, double theta, const CostSpec& cost,
                        double tol = default_quantity_tolerance);

/// Per-period profit p*q(p,theta) - C(q(p,theta), theta). Negative when the fixed cost is
/// not covered.
double profit(double p, double theta, const CostSpec& cost,
              double tol = default_quantity_tolerance);

/// Static firm decisions at one price for every grid type.
struct PriceProfile {
    double price = 0.0;
    Vector quantity;
    Vector profit;
    Vector cost;
};

PriceProfile firm_statics(double p, const CostSpec& cost, const Vector& types,
                          double tol = default_quantity_tolerance);

} // namespace lrce
