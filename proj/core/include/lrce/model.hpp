#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

namespace lrce {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Cost
// ---------------------------------------------------------------------------

/// Variable cost (a + b*theta) * q^2 / 2. Marginal cost may differ by type when b != 0.
struct QuadraticCost {
    double curvature = 1.0;
    double curvature_slope = 0.0;
};

/// Variable cost a * q^gamma / gamma with gamma in (1, 2].
struct PowerCost {
    double scale = 1.0;
    double exponent = 2.0;
};

/// Fixed cost g(theta) = intercept + slope * theta, paid every period the firm is active.
struct FixedCost {
    double intercept = 0.0;
    double slope = 1.0;
};

/// Total per-period cost C(q, theta) = variable(q, theta) + g(theta).
class CostSpec {
public:
    using Variable = std::variant<QuadraticCost, PowerCost>;

    CostSpec() = default;
    CostSpec(Variable variable, FixedCost fixed) : variable_(variable), fixed_(fixed) {}

    double cost(double q, double theta) const;
    double marginal(double q, double theta) const;
    /// Second derivative in q. May be +infinity at q = 0 for power costs.
    double curvature(double q, double theta) const;
    double fixed_cost(double theta) const { return fixed_.intercept + fixed_.slope * theta; }

    std::string family() const;
    const Variable& variable() const { return variable_; }
    const FixedCost& fixed() const { return fixed_; }

private:
    Variable variable_{QuadraticCost{}};
    FixedCost fixed_{};
};

// ---------------------------------------------------------------------------
// Demand
// ---------------------------------------------------------------------------

/// Q(p) = max(0, intercept - slope * p).
struct LinearDemand {
    double intercept = 10.0;
    double slope = 1.0;
};

/// Q(p) = scale * (choke - p)^exponent for p < choke, zero above.
struct PowerDemand {
    double scale = 1.0;
    double choke = 1.0;
    double exponent = 1.0;
};

class DemandSpec {
public:
    using Form = std::variant<LinearDemand, PowerDemand>;

    DemandSpec() = default;
    explicit DemandSpec(Form form) : form_(form) {}

    double quantity(double p) const;
    /// Inverse demand P(Q) for Q >= 0.
    double inverse(double quantity) const;
    /// Choke price v: demand is zero for every p >= v.
    double choke_price() const;
    /// Gross consumer benefit: integral of P over [0, Q].
    double gross_benefit(double quantity) const;

    std::string family() const;
    const Form& form() const { return form_; }

private:
    Form form_{LinearDemand{}};
};

// ---------------------------------------------------------------------------
// Type dynamics
// ---------------------------------------------------------------------------

/// Normal density centred at persistence*theta + (1 - persistence)*center, truncated to the
/// type interval.
struct TruncatedNormalKernel {
    double persistence = 0.8;
    double center = 2.0;
    double sigma = 0.3;

    double mean(double theta) const { return persistence * theta + (1.0 - persistence) * center; }
};

/// Explicit cell-to-cell transition matrix (rows are renormalised on discretisation).
/// Used for permanent-type surrogates; has no continuous density behind it.
struct MatrixKernel {
    Matrix rows;
};

struct UniformEntrants {};

/// Explicit entrant weights per grid cell (renormalised on discretisation).
struct WeightedEntrants {
    Vector weights;
};

struct KernelSpec {
    std::variant<TruncatedNormalKernel, MatrixKernel> transition{TruncatedNormalKernel{}};
    std::variant<UniformEntrants, WeightedEntrants> entrants{UniformEntrants{}};
};

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

struct ModelPrimitives {
    CostSpec cost;
    DemandSpec demand;
    KernelSpec kernel;
    double type_low = 1.0;
    double type_high = 3.0;
    double discount = 0.9;
    double exit_probability = 0.1;
    double entry_cost = 0.0;

    /// Survival factor perceived by firms, discount * (1 - exit_probability).
    double firm_survival() const { return discount * (1.0 - exit_probability); }
    /// Survival factor that governs the physical cross-section, 1 - exit_probability.
    double physical_survival() const { return 1.0 - exit_probability; }
};

/// Exit threshold as a position on the grid measured in cells: position k in [0, G]
/// sits on boundary b_k. Cells wholly below the threshold stay, cells wholly above exit,
/// and the cell containing a fractional position stays with the covered fraction.
struct Threshold {
    double position = 0.0;

    static Threshold boundary(Index k) { return Threshold{static_cast<double>(k)}; }
    bool on_boundary() const;
    friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// Cell-midpoint discretisation of the type space with a row-stochastic kernel.
class DiscretizedModel {
public:
    DiscretizedModel(ModelPrimitives primitives, Vector types, double spacing, Matrix transition,
                     Vector entrants);

    const ModelPrimitives& primitives() const { return primitives_; }
    Index cells() const { return types_.size(); }
    double spacing() const { return spacing_; }
    const Vector& types() const { return types_; }
    const Matrix& transition() const { return transition_; }
    const Vector& entrants() const { return entrants_; }

    double boundary(Index k) const;
    double threshold_value(Threshold m) const;
    Threshold threshold_at(double value) const;

    /// Per-cell probability of staying for a firm that survives exogenously.
    Vector stay_weights(Threshold m) const;

    /// Discretised F(. | m): for density kernels the density is evaluated at the threshold
    /// value itself; for matrix kernels it is the row of the highest (partially) staying cell.
    Vector transition_from(Threshold m) const;

    double firm_survival() const { return primitives_.firm_survival(); }
    double physical_survival() const { return primitives_.physical_survival(); }

    /// Same grid and kernel, different firm discount factor.
    DiscretizedModel with_discount(double discount) const;
    DiscretizedModel with_entry_cost(double entry_cost) const;

private:
    ModelPrimitives primitives_;
    Vector types_;
    double spacing_;
    Matrix transition_;
    Vector entrants_;
};

/// Builds the cell grid, kernel matrix and entrant vector. Throws ValidationError when the
/// discretised kernel violates first-order stochastic dominance between adjacent rows.
DiscretizedModel discretize(const ModelPrimitives& primitives, Index cells);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct AssumptionCheck {
    std::string id;
    std::string description;
    bool passed = false;
    std::string witness;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;

    bool passed() const;
    const AssumptionCheck* find(const std::string& id) const;
};

struct ValidationOptions {
    Index cells = 201;
    double tolerance = 1e-10;
    /// Quantity at which marginal cost must already exceed the choke price.
    double large_quantity = 1e6;
    int quantity_samples = 64;
};

/// Check ids used in reports and ValidationError::check().
namespace checks {
inline constexpr const char* demand = "demand";
inline constexpr const char* cost_shape = "cost-shape";
inline constexpr const char* cost_increasing = "cost-increasing-in-type";
inline constexpr const char* type_order = "type-order";
inline constexpr const char* positive_exit = "positive-exit";
inline constexpr const char* type_densities = "type-densities";
inline constexpr const char* active_production = "active-production";
inline constexpr const char* structure = "structure";
} // namespace checks

/// Throws ValidationError for violations that make the model meaningless
/// (empty type interval, non-positive exit probability, non-positive kernel scale, ...).
void check_structure(const ModelPrimitives& primitives);

/// Evaluates every model assumption on the grid. Structural violations throw.
ValidationReport validate_primitives(const ModelPrimitives& primitives,
                                     const ValidationOptions& options = {});

} // namespace lrce
