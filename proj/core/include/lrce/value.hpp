#pragma once

#include "lrce/firm.hpp"
#include "lrce/model.hpp"

#include <optional>

namespace lrce {

inline constexpr double default_value_tolerance = 1e-12;

/// Firm values at one price on every grid cell, with the expected next-period value
/// continuation_j = sum_k K(j, k) v_k.
struct ValueTable {
    double price = 0.0;
    /// Forced exit threshold, or empty for the optimal exit policy.
    std::optional<Threshold> threshold;
    double survival = 0.0;
    Vector values;
    Vector continuation;
    int iterations = 0;
    /// Sup norm of the Bellman residual at the returned values.
    double bellman_residual = 0.0;
    /// A-posteriori bound on the distance to the fixed point.
    double error_bound = 0.0;
};

/// Value iteration on v = pi + survival * stay(m) .* (K v) with a forced threshold.
ValueTable value_fixed_threshold(double p, Threshold m, const DiscretizedModel& d, double survival,
                                 double tol = default_value_tolerance);

/// Value iteration on v = pi + survival * max(K v, 0).
ValueTable value_optimal(double p, const DiscretizedModel& d, double survival,
                         double tol = default_value_tolerance);

/// Boundary bracket [b_lower, b_upper] holding the zero of the interpolated continuation value.
/// `policy` is the boundary below which the discrete optimal policy stays.
struct ThresholdBracket {
    Index lower = 0;
    Index upper = 0;
    Index policy = 0;
    double estimate = 0.0;
};

/// Reads the exit threshold off an optimal value table. Throws NumericalError when the
/// continuation is not nonincreasing in type.
ThresholdBracket optimal_threshold(const ValueTable& table, const DiscretizedModel& d);

} // namespace lrce
