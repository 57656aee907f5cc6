#include "fixtures.hpp"
#include "oracles.hpp"

#include "lrce/equilibrium.hpp"
#include "lrce/simulation.hpp"
#include "lrce/twotype.hpp"
#include "lrce/value.hpp"
#include "lrce/welfare.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace lrce;
using namespace lrce::testing;

namespace {

std::string to_string_location(ThresholdCase c) {
    switch (c) {
    case ThresholdCase::interior: return "interior";
    case ThresholdCase::lowest: return "lowest";
    default: return "highest";
    }
}

struct Verdict {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << " FAILED(" << what << ")";
        }
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const DiscretizedModel& grid_c(Index g = 201) {
    static std::map<Index, DiscretizedModel> cache;
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, discretize(baseline_industry(), g)).first;
    return it->second;
}

SolverOptions quick() {
    SolverOptions o;
    o.cross_checks = false;
    return o;
}

void two_type_oracle(Verdict& v) {
    const OracleSolution o = solve_twotype(two_type_example());
    const LrceSolution s = solve_lrce(two_type_grid());
    const double gaps[] = {std::abs(s.price - o.price), std::abs(s.quantity - o.quantity),
                           std::abs(s.entrant_mass - o.entrant_mass),
                           std::abs(s.diagnostics.average_firm_profit - o.average_firm_profit)};
    double worst = 0.0;
    for (double g : gaps) worst = std::max(worst, g);
    v.require(worst <= 1e-6, "solver vs closed form");
    namespace fa = two_type_values;
    v.require(std::abs(o.price - 1.849150) <= 1e-6 && std::abs(o.quantity - 8.150850) <= 1e-6,
              "closed form vs published price/quantity");
    v.require(std::abs(s.entrant_mass - fa::entrant_mass) <= 1e-6 && std::abs(s.diagnostics.average_firm_profit - fa::firm_profit) <= 1e-6,
              "recomputed entrant mass/profit");
    v.detail << "p=" << s.price << " Q=" << s.quantity << " n=" << s.entrant_mass
             << " pi=" << s.diagnostics.average_firm_profit << " max|diff|=" << sci(worst);
}

void adjoint_identity(Verdict& v) {
    const DiscretizedModel& d = grid_c();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> price(1.0, 3.0), pos(0.0, 201.0), surv(0.05, 0.95);
    double worst_entry = 0.0, worst_exit = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double p = price(rng), s = surv(rng);
        const Threshold m{pos(rng)};
        const Vector values = value_fixed_threshold(p, m, d, s).values;
        worst_entry = std::max(worst_entry, std::abs(values.dot(d.entrants()) -
                                                     weighted_aggregates(p, lambda_entry(m, s, d), d).pi_bar));
        worst_exit = std::max(worst_exit, std::abs(values.dot(d.transition_from(m)) -
                                                   weighted_aggregates(p, lambda_exit(m, s, d), d).pi_bar));
    }
    v.require(worst_entry <= 1e-8, "entrant weights");
    v.require(worst_exit <= 1e-8, "marginal-type weights");
    v.detail << "20 draws, max gap entry=" << sci(worst_entry) << " exit=" << sci(worst_exit);
}

void variational(Verdict& v) {
    const DiscretizedModel& d = grid_c();
    const LrceSolution s = solve_lrce(d, quick());
    std::vector<double> prices(400);
    for (std::size_t k = 0; k < prices.size(); ++k) prices[k] = 0.5 + 3.5 * static_cast<double>(k) / 399.0;
    const double brute = average_cost_surface(d, d.firm_survival(), prices).values.minCoeff();
    const double tol = std::max(1e-6, 2 * d.spacing());
    v.require(std::abs(s.price - brute) <= tol, "price vs brute-force min");
    const double q0 = long_run_supply(d, 0.1);
    bool flat = true;
    for (double q : {1.0, 10.0, 100.0}) flat = flat && long_run_supply(d, q) == q0;
    v.require(flat, "supply not flat");
    v.detail << "p=" << s.price << " grid min=" << brute << " |diff|=" << sci(std::abs(s.price - brute))
             << " tol=" << sci(tol) << " supply flat=" << (flat ? "yes" : "no");
}

void residuals(Verdict& v) {
    const LrceSolution s = solve_lrce(grid_c());
    const auto& g = s.diagnostics;
    v.require(std::abs(g.entry_residual) <= 1e-8, "entry");
    v.require(g.exit_condition_satisfied, "exit");
    v.require(g.market_clearing_gap <= 1e-8, "clearing");
    v.require(s.entrant_mass > 0.0 && s.quantity > 0.0, "positivity");
    v.detail << "|pi-kappa|=" << sci(std::abs(g.entry_residual)) << " exit=" << sci(g.exit_residual) << " ("
             << to_string_location(s.location) << ") clearing=" << sci(g.market_clearing_gap)
             << " n=" << s.entrant_mass << " Q=" << s.quantity;
}

void planner_gap(Verdict& v) {
    const ComparisonReport a = compare(two_type_grid());
    v.require(std::abs(a.planner.price - 1.825742) <= 1e-6 && std::abs(a.planner.quantity - 8.174258) <= 1e-6,
              "planner values");
    v.require(std::abs(a.equilibrium.price - 1.849150) <= 1e-6 && std::abs(a.equilibrium.quantity - 8.150850) <= 1e-6,
              "equilibrium values");
    v.require(a.planner.price < a.equilibrium.price && a.planner.quantity > a.equilibrium.quantity, "ordering");

    TwoTypeModel patient = two_type_example();
    patient.discount = 1.0;
    const ComparisonReport b = compare(discretize(twotype_surrogate(patient), 2));
    ModelPrimitives pc = baseline_industry();
    pc.discount = 1.0;
    const ComparisonReport c = compare(discretize(pc, 201), quick());
    const double collapse = std::max({std::abs(b.price_gap), std::abs(b.quantity_gap), std::abs(c.price_gap),
                                      std::abs(c.quantity_gap)});
    v.require(collapse < 1e-8, "gaps at discount one");

    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::ostringstream path;
    for (double delta : {0.5, 0.7, 0.9, 1.0}) {
        ModelPrimitives m = baseline_industry();
        m.discount = delta;
        const double p = solve_lrce(discretize(m, 201), quick()).price;
        monotone = monotone && p < previous;
        previous = p;
        path << " " << p;
    }
    v.require(monotone, "monotone in discount");
    v.detail << "p*=" << a.planner.price << " pe=" << a.equilibrium.price << " Q*=" << a.planner.quantity
             << " Qe=" << a.equilibrium.quantity << " gaps@1=" << sci(collapse) << " p(delta):" << path.str();
}

void monte_carlo(Verdict& v) {
    const DiscretizedModel& d = grid_c();
    const LrceSolution s = solve_lrce(d, quick());
    SimConfig cfg;
    cfg.entrants_per_period = 1000;
    cfg.periods = 500;
    cfg.seed = 1;
    cfg.price = s.price;
    cfg.threshold = s.threshold;
    const PanelStats stats = simulate_panel(cfg, d);
    const VerificationReport good = verify_against_steady_state(stats, s.physical);
    v.require(stats.firm_periods >= 1000000, "sample size");
    v.require(good.total_variation < 0.01, "TV");
    v.require(good.npv_ok, "cohort NPV");
    cfg.threshold = Threshold{s.threshold.position + 10.0};
    const VerificationReport bad = verify_against_steady_state(simulate_panel(cfg, d), s.physical);
    v.require(!bad.passed, "negative control passed");
    v.detail << "firm-periods=" << stats.firm_periods << " TV=" << sci(good.total_variation)
             << " NPV=" << sci(stats.cohort_npv_mean) << " (" << sci(good.npv_z) << " SE); wrong m: TV="
             << sci(bad.total_variation) << " z=" << sci(bad.npv_z) << " -> rejected";
}

void average_cost_bounds(Verdict& v) {
    const DiscretizedModel& d = grid_c();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> price(0.5, 6.0);
    int checked = 0;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        double p1 = price(rng), p2 = price(rng);
        if (p1 > p2) std::swap(p1, p2);
        const TypeMeasure eta{random_measure(d.cells(), rng)};
        const AggregateBundle a = weighted_aggregates(p1, eta, d), b = weighted_aggregates(p2, eta, d);
        const double dq = b.q_bar - a.q_bar;
        if (!(dq > 0.0)) continue;
        ++checked;
        const double ratio = (b.c_bar - a.c_bar) / dq;
        worst = std::max({worst, p1 - ratio, ratio - p2});
    }
    v.require(worst <= 1e-10, "bounds");
    v.require(checked == 50, "pairs with positive output change");
    v.detail << checked << " pairs, worst violation=" << sci(worst);
}

void grid_convergence(Verdict& v) {
    const double p101 = solve_lrce(grid_c(101), quick()).price;
    const double p401 = solve_lrce(grid_c(401), quick()).price;
    const double p801 = solve_lrce(grid_c(801), quick()).price;
    const double lhs = std::abs(p101 - p401), rhs = 5 * std::abs(p401 - p801) + 1e-6;
    v.require(lhs <= rhs, "convergence");
    v.detail << "p(101)=" << p101 << " p(401)=" << p401 << " p(801)=" << p801 << " |d1|=" << sci(lhs)
             << " bound=" << sci(rhs);
}

void single_type_check(Verdict& v) {
    double worst = 0.0;
    for (double delta : {0.3, 0.6, 0.9, 1.0}) {
        ModelPrimitives m = lrce::testing::single_type();
        m.discount = delta;
        const DiscretizedModel d = discretize(m, 51);
        const LrceSolution e = solve_lrce(d);
        const PlannerSolution p = solve_planner(d);
        const double min_ac = std::sqrt(2.0 * 2.0);
        worst = std::max({worst, std::abs(e.price - 2.0), std::abs(e.price - min_ac),
                          std::abs(e.diagnostics.average_firm_profit), std::abs(e.diagnostics.aggregate_profit),
                          std::abs(p.price - e.price), std::abs(p.quantity - e.quantity)});
    }
    v.require(worst <= 1e-8, "single type");
    v.detail << "discounts {0.3,0.6,0.9,1}: max deviation=" << sci(worst);
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
        {"two-type oracle equivalence", two_type_oracle},
        {"adjoint identity (values vs weights)", adjoint_identity},
        {"variational min of average weighted cost, flat supply", variational},
        {"equilibrium residuals", residuals},
        {"planner versus equilibrium", planner_gap},
        {"Monte Carlo consistency", monte_carlo},
        {"average-cost bounds between prices", average_cost_bounds},
        {"grid convergence", grid_convergence},
        {"single-type degeneration", single_type_check},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.passed = false;
            v.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!v.passed) ++failed;
        std::printf("%s %zu %s: %s [%.1fs]\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.str().c_str(), secs);
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
