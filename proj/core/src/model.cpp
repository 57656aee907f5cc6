#include "lrce/model.hpp"

#include "lrce/errors.hpp"
#include "lrce/firm.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace lrce {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

/// Normal weights exp(-z^2/2) at every midpoint, normalised to sum one. Evaluated relative to
/// the largest exponent so that narrow kernels do not underflow to an all-zero row.
Vector normal_row(const Vector& types, double mean, double sigma) {
    Vector z = ((types.array() - mean) / sigma).square() * -0.5;
    const double top = z.maxCoeff();
    Vector row = (z.array() - top).exp();
    const double total = row.sum();
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("transition row has no representable mass");
    return row / total;
}

struct FosdViolation {
    Index row;
    Index column;
    double excess;
};

/// Adjacent-row check of first-order stochastic dominance on the row CDFs.
std::optional<FosdViolation> weak_fosd_violation(const Matrix& k, double tol) {
    const Index g = k.rows();
    Vector upper = Vector::Zero(g);
    Vector lower = Vector::Zero(g);
    for (Index i = 0; i + 1 < g; ++i) {
        double cdf_lo = 0.0;
        double cdf_hi = 0.0;
        for (Index j = 0; j < g; ++j) {
            cdf_lo += k(i, j);
            cdf_hi += k(i + 1, j);
            if (cdf_hi > cdf_lo + tol) return FosdViolation{i, j, cdf_hi - cdf_lo};
        }
    }
    return std::nullopt;
}

std::optional<FosdViolation> strict_fosd_violation(const Matrix& k) {
    const Index g = k.rows();
    constexpr double saturated = 1e-15;
    for (Index i = 0; i + 1 < g; ++i) {
        double cdf_lo = 0.0;
        double cdf_hi = 0.0;
        for (Index j = 0; j + 1 < g; ++j) {
            cdf_lo += k(i, j);
            cdf_hi += k(i + 1, j);
            const bool both_one = cdf_lo >= 1.0 - saturated && cdf_hi >= 1.0 - saturated;
            const bool both_zero = cdf_lo <= saturated && cdf_hi <= saturated;
            if (both_one || both_zero) continue;
            if (!(cdf_hi < cdf_lo)) return FosdViolation{i, j, cdf_hi - cdf_lo};
        }
    }
    return std::nullopt;
}

struct Grid {
    Vector types;
    double spacing;
    Matrix transition;
    Vector entrants;
};

Grid build_grid(const ModelPrimitives& m, Index cells) {
    if (cells < 2) throw ValidationError(checks::structure, "grid needs at least 2 cells");
    if (!(m.type_low < m.type_high))
        throw ValidationError(checks::structure, "type interval is empty (low >= high)");

    Grid grid;
    grid.spacing = (m.type_high - m.type_low) / static_cast<double>(cells);
    grid.types.resize(cells);
    for (Index j = 0; j < cells; ++j)
        grid.types[j] = m.type_low + (static_cast<double>(j) + 0.5) * grid.spacing;

    grid.transition = std::visit(
        overloaded{
            [&](const TruncatedNormalKernel& k) {
                Matrix out(cells, cells);
                for (Index i = 0; i < cells; ++i)
                    out.row(i) = normal_row(grid.types, k.mean(grid.types[i]), k.sigma).transpose();
                return out;
            },
            [&](const MatrixKernel& k) {
                if (k.rows.rows() != cells || k.rows.cols() != cells)
                    throw ValidationError(checks::structure,
                                          "transition matrix must be " + std::to_string(cells) +
                                              "x" + std::to_string(cells));
                if ((k.rows.array() < 0.0).any())
                    throw ValidationError(checks::structure, "transition matrix has negative entries");
                Matrix out = k.rows;
                for (Index i = 0; i < cells; ++i) {
                    const double total = out.row(i).sum();
                    if (!(total > 0.0))
                        throw ValidationError(checks::structure,
                                              "transition row " + std::to_string(i) + " has no mass");
                    out.row(i) /= total;
                }
                return out;
            },
        },
        m.kernel.transition);

    grid.entrants = std::visit(
        overloaded{
            [&](const UniformEntrants&) {
                return Vector(Vector::Constant(cells, 1.0 / static_cast<double>(cells)));
            },
            [&](const WeightedEntrants& w) {
                if (w.weights.size() != cells)
                    throw ValidationError(checks::structure,
                                          "entrant weights must have one entry per cell");
                if ((w.weights.array() < 0.0).any())
                    throw ValidationError(checks::structure, "entrant weights must be nonnegative");
                const double total = w.weights.sum();
                if (!(total > 0.0))
                    throw ValidationError(checks::structure, "entrant weights have no mass");
                return Vector(w.weights / total);
            },
        },
        m.kernel.entrants);
    return grid;
}

} // namespace

// ---------------------------------------------------------------------------

double CostSpec::cost(double q, double theta) const {
    const double variable = std::visit(
        overloaded{
            [&](const QuadraticCost& c) { return (c.curvature + c.curvature_slope * theta) * q * q / 2.0; },
            [&](const PowerCost& c) { return c.scale * std::pow(q, c.exponent) / c.exponent; },
        },
        variable_);
    return variable + fixed_cost(theta);
}

double CostSpec::marginal(double q, double theta) const {
    return std::visit(
        overloaded{
            [&](const QuadraticCost& c) { return (c.curvature + c.curvature_slope * theta) * q; },
            [&](const PowerCost& c) { return c.scale * std::pow(q, c.exponent - 1.0); },
        },
        variable_);
}

double CostSpec::curvature(double q, double theta) const {
    return std::visit(
        overloaded{
            [&](const QuadraticCost& c) { return c.curvature + c.curvature_slope * theta; },
            [&](const PowerCost& c) {
                if (q == 0.0 && c.exponent < 2.0) return std::numeric_limits<double>::infinity();
                return c.scale * (c.exponent - 1.0) * std::pow(q, c.exponent - 2.0);
            },
        },
        variable_);
}

std::string CostSpec::family() const {
    return std::holds_alternative<QuadraticCost>(variable_) ? "quadratic" : "power";
}

// ---------------------------------------------------------------------------

double DemandSpec::quantity(double p) const {
    return std::visit(
        overloaded{
            [&](const LinearDemand& d) { return std::max(0.0, d.intercept - d.slope * p); },
            [&](const PowerDemand& d) {
                return p >= d.choke ? 0.0 : d.scale * std::pow(d.choke - p, d.exponent);
            },
        },
        form_);
}

double DemandSpec::inverse(double quantity) const {
    return std::visit(
        overloaded{
            [&](const LinearDemand& d) { return std::max(0.0, (d.intercept - quantity) / d.slope); },
            [&](const PowerDemand& d) {
                return std::max(0.0, d.choke - std::pow(quantity / d.scale, 1.0 / d.exponent));
            },
        },
        form_);
}

double DemandSpec::choke_price() const {
    return std::visit(
        overloaded{
            [](const LinearDemand& d) { return d.intercept / d.slope; },
            [](const PowerDemand& d) { return d.choke; },
        },
        form_);
}

double DemandSpec::gross_benefit(double quantity) const {
    if (quantity <= 0.0) return 0.0;
    return std::visit(
        overloaded{
            [&](const LinearDemand& d) {
                const double q = std::min(quantity, d.intercept);
                return (d.intercept * q - q * q / 2.0) / d.slope;
            },
            [&](const PowerDemand& d) {
                const double saturation = d.scale * std::pow(d.choke, d.exponent);
                const double q = std::min(quantity, saturation);
                auto price = [this](double x) { return inverse(x); };
                return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(price, 0.0, q, 20,
                                                                                     1e-8);
            },
        },
        form_);
}

std::string DemandSpec::family() const {
    return std::holds_alternative<LinearDemand>(form_) ? "linear" : "power";
}

// ---------------------------------------------------------------------------

bool Threshold::on_boundary() const { return position == std::floor(position); }

DiscretizedModel::DiscretizedModel(ModelPrimitives primitives, Vector types, double spacing,
                                   Matrix transition, Vector entrants)
    : primitives_(std::move(primitives)), types_(std::move(types)), spacing_(spacing),
      transition_(std::move(transition)), entrants_(std::move(entrants)) {}

double DiscretizedModel::boundary(Index k) const {
    return primitives_.type_low + static_cast<double>(k) * spacing_;
}

double DiscretizedModel::threshold_value(Threshold m) const {
    return primitives_.type_low + m.position * spacing_;
}

Threshold DiscretizedModel::threshold_at(double value) const {
    const double pos = (value - primitives_.type_low) / spacing_;
    return Threshold{std::clamp(pos, 0.0, static_cast<double>(cells()))};
}

Vector DiscretizedModel::stay_weights(Threshold m) const {
    Vector s(cells());
    for (Index i = 0; i < cells(); ++i)
        s[i] = std::clamp(m.position - static_cast<double>(i), 0.0, 1.0);
    return s;
}

Vector DiscretizedModel::transition_from(Threshold m) const {
    return std::visit(
        overloaded{
            [&](const TruncatedNormalKernel& k) {
                return normal_row(types_, k.mean(threshold_value(m)), k.sigma);
            },
            [&](const MatrixKernel&) {
                const Index row = std::clamp<Index>(
                    static_cast<Index>(std::ceil(m.position)) - 1, 0, cells() - 1);
                return Vector(transition_.row(row).transpose());
            },
        },
        primitives_.kernel.transition);
}

DiscretizedModel DiscretizedModel::with_discount(double discount) const {
    DiscretizedModel out = *this;
    out.primitives_.discount = discount;
    return out;
}

DiscretizedModel DiscretizedModel::with_entry_cost(double entry_cost) const {
    DiscretizedModel out = *this;
    out.primitives_.entry_cost = entry_cost;
    return out;
}

DiscretizedModel discretize(const ModelPrimitives& primitives, Index cells) {
    Grid grid = build_grid(primitives, cells);
    if (auto v = weak_fosd_violation(grid.transition, 1e-12)) {
        throw ValidationError(checks::type_order,
                              "discretised kernel violates stochastic dominance between rows " +
                                  std::to_string(v->row) + " and " + std::to_string(v->row + 1) +
                                  " at column " + std::to_string(v->column));
    }
    return DiscretizedModel(primitives, std::move(grid.types), grid.spacing,
                            std::move(grid.transition), std::move(grid.entrants));
}

// ---------------------------------------------------------------------------

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const AssumptionCheck* ValidationReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

void check_structure(const ModelPrimitives& m) {
    using checks::structure;
    if (!(m.type_low < m.type_high))
        throw ValidationError(structure, "type interval is empty: low=" + fmt_num(m.type_low) +
                                             " high=" + fmt_num(m.type_high));
    if (!(m.exit_probability > 0.0))
        throw ValidationError(checks::positive_exit,
                              "exogenous exit probability must be positive, got " +
                                  fmt_num(m.exit_probability));
    if (!(m.exit_probability <= 1.0))
        throw ValidationError(checks::positive_exit, "exogenous exit probability exceeds one");
    if (!(m.discount >= 0.0 && m.discount <= 1.0))
        throw ValidationError(structure, "discount factor must lie in [0, 1]");
    if (!(m.entry_cost >= 0.0)) throw ValidationError(structure, "entry cost must be nonnegative");

    if (const auto* k = std::get_if<TruncatedNormalKernel>(&m.kernel.transition)) {
        if (!(k->sigma > 0.0))
            throw ValidationError(structure, "transition scale sigma must be positive");
    }
    std::visit(overloaded{
                   [](const QuadraticCost& c) {
                       if (!(c.curvature > 0.0))
                           throw ValidationError(structure, "quadratic cost curvature must be positive");
                   },
                   [](const PowerCost& c) {
                       if (!(c.scale > 0.0) || !(c.exponent > 1.0 && c.exponent <= 2.0))
                           throw ValidationError(structure,
                                                 "power cost needs scale > 0 and exponent in (1, 2]");
                   },
               },
               m.cost.variable());
    std::visit(overloaded{
                   [](const LinearDemand& d) {
                       if (!(d.slope > 0.0) || !(d.intercept > 0.0))
                           throw ValidationError(checks::demand,
                                                 "linear demand needs positive intercept and slope");
                   },
                   [](const PowerDemand& d) {
                       if (!(d.scale > 0.0) || !(d.choke > 0.0) || !(d.exponent > 0.0))
                           throw ValidationError(checks::demand,
                                                 "power demand needs positive scale, choke and exponent");
                   },
               },
               m.demand.form());
}

ValidationReport validate_primitives(const ModelPrimitives& m, const ValidationOptions& opt) {
    check_structure(m);
    const Grid grid = build_grid(m, opt.cells);
    const Index g = opt.cells;
    const double v = m.demand.choke_price();
    ValidationReport report;

    // Demand: positive choke, decreasing below it, zero above it.
    {
        AssumptionCheck c{checks::demand, "demand is continuous and decreasing below a choke price v > 0 and zero above", true, ""};
        if (!(v > 0.0) || !std::isfinite(v)) {
            c.passed = false;
            c.witness = "choke price v=" + fmt_num(v);
        } else {
            double prev = m.demand.quantity(0.0);
            for (int s = 1; s < opt.quantity_samples && c.passed; ++s) {
                const double p = v * s / opt.quantity_samples;
                const double q = m.demand.quantity(p);
                if (!(q < prev)) {
                    c.passed = false;
                    c.witness = "Q(" + fmt_num(p) + ")=" + fmt_num(q) + " not below previous sample";
                }
                prev = q;
            }
            if (c.passed && (m.demand.quantity(v) != 0.0 || m.demand.quantity(2.0 * v) != 0.0)) {
                c.passed = false;
                c.witness = "demand positive at or above v=" + fmt_num(v);
            }
            if (c.passed) c.witness = "v=" + fmt_num(v);
        }
        report.checks.push_back(c);
    }

    // Quantity samples: zero plus a geometric sweep up to the quantity at the choke price.
    std::vector<double> qs{0.0};
    {
        double q_top = 1.0;
        for (Index j = 0; j < g; ++j)
            q_top = std::max(q_top, optimal_quantity(std::max(v, 1.0), grid.types[j], m.cost));
        for (int s = 0; s < opt.quantity_samples; ++s)
            qs.push_back(q_top * std::pow(1e-4, 1.0 - static_cast<double>(s) / (opt.quantity_samples - 1)));
    }

    {
        AssumptionCheck c{checks::cost_shape, "C >= 0, C' >= 0, C'' > 0 and C' unbounded in q", true, ""};
        for (Index j = 0; j < g && c.passed; ++j) {
            const double th = grid.types[j];
            for (double q : qs) {
                const double cv = m.cost.cost(q, th), mc = m.cost.marginal(q, th), cc = m.cost.curvature(q, th);
                if (cv < 0.0 || mc < 0.0 || !(cc > 0.0)) {
                    c.passed = false;
                    c.witness = "theta=" + fmt_num(th) + " q=" + fmt_num(q) + ": C=" + fmt_num(cv) +
                                " C'=" + fmt_num(mc) + " C''=" + fmt_num(cc);
                    break;
                }
            }
            if (c.passed && !(m.cost.marginal(opt.large_quantity, th) > v)) {
                c.passed = false;
                c.witness = "C'(" + fmt_num(opt.large_quantity) + ", " + fmt_num(th) + ") <= v";
            }
        }
        report.checks.push_back(c);
    }

    {
        AssumptionCheck c{checks::cost_increasing, "C(q, .) is increasing in type", true, ""};
        for (Index j = 0; j + 1 < g && c.passed; ++j) {
            for (double q : qs) {
                const double lo = m.cost.cost(q, grid.types[j]), hi = m.cost.cost(q, grid.types[j + 1]);
                if (lo > hi + opt.tolerance * std::max(1.0, std::abs(hi))) {
                    c.passed = false;
                    c.witness = "q=" + fmt_num(q) + ": C(theta_" + std::to_string(j) + ")=" + fmt_num(lo) +
                                " > C(theta_" + std::to_string(j + 1) + ")=" + fmt_num(hi);
                    break;
                }
            }
        }
        report.checks.push_back(c);
    }

    {
        AssumptionCheck c{checks::type_order, "higher types draw stochastically higher future types", true, ""};
        if (auto w = weak_fosd_violation(grid.transition, 1e-12)) {
            c.passed = false;
            c.witness = "rows " + std::to_string(w->row) + "/" + std::to_string(w->row + 1) +
                        " column " + std::to_string(w->column) + " excess " + fmt_num(w->excess);
        } else if (auto s = strict_fosd_violation(grid.transition)) {
            c.passed = false;
            c.witness = "dominance not strict between rows " + std::to_string(s->row) + "/" +
                        std::to_string(s->row + 1) + " at column " + std::to_string(s->column);
        } else {
            c.witness = "strict on " + std::to_string(g - 1) + " adjacent row pairs";
        }
        report.checks.push_back(c);
    }

    report.checks.push_back({checks::positive_exit, "exogenous probability of exit is positive", true,
                             "rho=" + fmt_num(m.exit_probability)});

    {
        AssumptionCheck c{checks::type_densities, "transition and entrant densities have full support", true, ""};
        Index zero_row = -1, zero_col = -1;
        for (Index i = 0; i < g && zero_row < 0; ++i)
            for (Index j = 0; j < g; ++j)
                if (!(grid.transition(i, j) > 0.0)) {
                    zero_row = i;
                    zero_col = j;
                    break;
                }
        if (zero_row >= 0) {
            c.passed = false;
            c.witness = "transition mass zero at (" + std::to_string(zero_row) + ", " + std::to_string(zero_col) + ")";
        } else if (!(grid.entrants.array() > 0.0).all()) {
            c.passed = false;
            c.witness = "entrant weight zero on some cell";
        } else if (std::abs(grid.entrants.sum() - 1.0) > 1e-12) {
            c.passed = false;
            c.witness = "entrant weights sum to " + fmt_num(grid.entrants.sum());
        } else {
            c.witness = "min transition mass " + fmt_num(grid.transition.minCoeff());
        }
        report.checks.push_back(c);
    }

    {
        const double top = profit(v, m.type_high, m.cost);
        AssumptionCheck c{checks::active_production, "worst type is profitable at the choke price: pi(v, theta_H) > kappa",
                          top > m.entry_cost, "pi(v, theta_H)=" + fmt_num(top) + " kappa=" + fmt_num(m.entry_cost)};
        report.checks.push_back(c);
    }
    return report;
}

} // namespace lrce
