#include "cli.hpp"

#include "lrce/config.hpp"
#include "lrce/errors.hpp"
#include "lrce/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>

namespace lrce::cli {

using nlohmann::json;

namespace {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

Level log_level() {
    const char* env = std::getenv("LRCE_LOG");
    if (!env) return Level::warn;
    const std::string v = env;
    if (v == "quiet" || v == "0") return Level::quiet;
    if (v == "info" || v == "2") return Level::info;
    if (v == "debug" || v == "3") return Level::debug;
    return Level::warn;
}

class Logger {
public:
    explicit Logger(std::ostream& err) : err_(err), level_(log_level()) {}

    void warn(const std::string& msg) const { emit(Level::warn, "warning", msg); }
    void info(const std::string& msg) const { emit(Level::info, "info", msg); }
    void debug(const std::string& msg) const { emit(Level::debug, "debug", msg); }

private:
    void emit(Level at, const char* tag, const std::string& msg) const {
        if (level_ >= at) err_ << "lrce " << tag << ": " << msg << '\n';
    }
    std::ostream& err_;
    Level level_;
};

struct Common {
    std::string config;
    std::string out;
    std::string csv_dir;
};

struct Context {
    RunConfig cfg;
    std::string hash;
    std::optional<DiscretizedModel> model;
    SolverOptions solver;
};

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions opt;
    opt.quantity_tolerance = cfg.tolerance;
    opt.tolerance = cfg.tolerance;
    return opt;
}

/// Loads the config, runs the assumption checks unless bypassed, and discretises.
Context prepare(const Common& common, const Logger& log, std::ostream& err) {
    Context ctx;
    ctx.cfg = load_config(common.config);
    ctx.hash = config_hash(ctx.cfg);
    ctx.solver = solver_options(ctx.cfg);
    log.debug("config " + common.config + " hash " + ctx.hash);

    if (ctx.cfg.bypass_validation) {
        check_structure(ctx.cfg.model);
        err << "lrce WARNING: bypass_validation is set; model assumptions are NOT checked and results may be "
               "meaningless outside the surrogate use case\n";
    } else {
        ValidationOptions vopt;
        vopt.cells = ctx.cfg.cells;
        vopt.tolerance = ctx.cfg.tolerance;
        const ValidationReport report = validate_primitives(ctx.cfg.model, vopt);
        for (const auto& c : report.checks) {
            if (c.passed) continue;
            // Inactivity is an economic outcome, reported by the solver itself.
            if (c.id == checks::active_production) {
                log.warn("check " + c.id + " failed (" + c.witness + "); the industry may be inactive");
                continue;
            }
            throw ValidationError(c.id, c.description + " fails: " + c.witness);
        }
        log.info("all model checks passed");
    }
    ctx.model.emplace(discretize(ctx.cfg.model, ctx.cfg.cells));
    return ctx;
}

void emit(const Common& common, const std::string& command, const std::string& hash, json result,
          std::ostream& out) {
    ResultBundle bundle{command, hash, library_version(), std::move(result)};
    const std::string text = json(bundle).dump(2) + "\n";
    if (common.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out);
    if (!file) throw Error(ErrorCode::config, "cannot write " + common.out);
    file << text;
}

std::filesystem::path csv_path(const Common& common, const std::string& name) {
    std::filesystem::create_directories(common.csv_dir);
    return std::filesystem::path(common.csv_dir) / name;
}

std::vector<double> ac_prices(double center, int samples) {
    std::vector<double> prices(static_cast<std::size_t>(samples));
    for (std::size_t s = 0; s < prices.size(); ++s)
        prices[s] = center * (0.5 + static_cast<double>(s) / static_cast<double>(prices.size() - 1));
    return prices;
}

int cmd_solve(const Common& common, const Logger& log, std::ostream& out, std::ostream& err) {
    Context ctx = prepare(common, log, err);
    const DiscretizedModel& d = *ctx.model;
    const LrceSolution sol = solve_lrce(d, ctx.solver);
    log.info("price " + format_number(sol.price) + " threshold " + format_number(sol.threshold_value));
    if (!sol.diagnostics.exit_condition_satisfied) log.warn("exit condition residual above tolerance");

    if (!common.csv_dir.empty()) {
        write_schedules_csv(csv_path(common, "fig3_schedules.csv"), d,
                            entry_exit_schedules(d, d.firm_survival(), ctx.solver));
        const AcSurface surface = average_cost_surface(d, d.firm_survival(), ac_prices(sol.price, ctx.solver.ac_price_samples),
                                                       ctx.solver.quantity_tolerance);
        const Index g = d.cells();
        std::set<Index> picks{0, g / 4, g / 2, 3 * g / 4, g, sol.bracket_lower, sol.bracket_upper};
        write_ac_curves_csv(csv_path(common, "fig2_ac_curves.csv"), d, surface, {picks.begin(), picks.end()});
        write_measure_csv(csv_path(common, "lambda_entry.csv"), d, sol.lambda_entry);
        write_measure_csv(csv_path(common, "lambda_exit.csv"), d, sol.lambda_exit);
        write_measure_csv(csv_path(common, "physical_measure.csv"), d, sol.physical);
    }
    emit(common, "solve", ctx.hash, sol, out);
    return 0;
}

std::vector<double> parse_list(const std::string& text, const std::string& pointer) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(pointer, "cannot parse \"" + item + "\" as a number");
        }
    }
    if (out.empty()) throw ConfigError(pointer, "expected a comma-separated list of numbers");
    return out;
}

int cmd_supply(const Common& common, const std::string& q_list, const Logger& log, std::ostream& out,
               std::ostream& err) {
    const std::vector<double> qs = parse_list(q_list, "/q");
    Context ctx = prepare(common, log, err);
    json rows = json::array();
    for (double q : qs) rows.push_back({{"quantity", q}, {"price", long_run_supply(*ctx.model, q, ctx.solver)}});
    if (!common.csv_dir.empty()) {
        CsvWriter csv(csv_path(common, "supply.csv"), {"quantity", "price"});
        for (const auto& r : rows) {
            csv.cell(r["quantity"].get<double>()).cell(r["price"].get<double>());
            csv.end_row();
        }
    }
    emit(common, "supply", ctx.hash, {{"supply", rows}}, out);
    return 0;
}

int cmd_planner(const Common& common, const Logger& log, std::ostream& out, std::ostream& err) {
    Context ctx = prepare(common, log, err);
    const PlannerSolution sol = solve_planner(*ctx.model, ctx.solver);
    if (!common.csv_dir.empty())
        write_measure_csv(csv_path(common, "planner_measure.csv"), *ctx.model, sol.physical);
    emit(common, "planner", ctx.hash, sol, out);
    return 0;
}

int cmd_compare(const Common& common, const std::string& discounts, const Logger& log, std::ostream& out,
                std::ostream& err) {
    Context ctx = prepare(common, log, err);
    const DiscretizedModel& d = *ctx.model;
    const ComparisonReport report = compare(d, ctx.solver);
    if (!report.consistent) log.warn("planner/equilibrium comparison violates the expected ordering");

    if (!common.csv_dir.empty()) {
        std::vector<double> deltas{d.primitives().discount, 1.0};
        if (!discounts.empty()) deltas = parse_list(discounts, "/discounts");
        std::sort(deltas.begin(), deltas.end());
        deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
        std::vector<std::pair<double, Schedules>> sweeps;
        for (double delta : deltas) {
            if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("/discounts", "discounts must lie in [0, 1]");
            const DiscretizedModel dd = d.with_discount(delta);
            sweeps.emplace_back(delta, entry_exit_schedules(dd, dd.firm_survival(), ctx.solver));
        }
        write_delta_comparison_csv(csv_path(common, "fig4_delta_comparison.csv"), d, sweeps);
        write_measure_csv(csv_path(common, "physical_measure.csv"), d, report.equilibrium.physical);
        write_measure_csv(csv_path(common, "planner_measure.csv"), d, report.planner.physical);
    }
    emit(common, "compare", ctx.hash, report, out);
    return 0;
}

/// Reads the two-type economy back out of a two-cell identity-kernel config.
TwoTypeModel twotype_from_config(const RunConfig& cfg) {
    const ModelPrimitives& m = cfg.model;
    const auto* matrix = std::get_if<MatrixKernel>(&m.kernel.transition);
    if (!matrix || cfg.cells != 2 || !matrix->rows.isApprox(Matrix::Identity(2, 2)))
        throw ConfigError("/model/transition", "two-type oracle needs a two-cell identity transition matrix");
    const auto* quad = std::get_if<QuadraticCost>(&m.cost.variable());
    if (!quad || quad->curvature_slope != 0.0)
        throw ConfigError("/model/cost", "two-type oracle needs quadratic cost with type-independent curvature");
    const auto* lin = std::get_if<LinearDemand>(&m.demand.form());
    if (!lin) throw ConfigError("/model/demand", "two-type oracle needs linear demand");
    if (!std::holds_alternative<UniformEntrants>(m.kernel.entrants))
        throw ConfigError("/model/entrants", "two-type oracle needs equally likely types");
    if (m.entry_cost != 0.0) throw ConfigError("/model/entry_cost", "two-type oracle has no entry cost");

    const double h = (m.type_high - m.type_low) / 2.0;
    TwoTypeModel t;
    t.curvature = quad->curvature;
    t.fixed_low = m.cost.fixed_cost(m.type_low + h / 2.0);
    t.fixed_high = m.cost.fixed_cost(m.type_high - h / 2.0);
    t.discount = m.discount;
    t.exit_probability = m.exit_probability;
    t.demand_intercept = lin->intercept;
    t.demand_slope = lin->slope;
    return t;
}

int cmd_oracle(const Common& common, TwoTypeModel model, const Logger& log, std::ostream& out, std::ostream& err) {
    std::string hash;
    if (!common.config.empty()) {
        const RunConfig cfg = load_config(common.config);
        hash = config_hash(cfg);
        model = twotype_from_config(cfg);
    }
    const OracleSolution oracle = solve_twotype(model);

    // Same economy on the general solver, as a cross-check.
    const DiscretizedModel d = discretize(twotype_surrogate(model), 2);
    SolverOptions opt;
    const LrceSolution eq = solve_lrce(d, opt);
    const PlannerSolution pl = solve_planner(d, opt);
    json general = {{"price", eq.price},
                    {"quantity", eq.quantity},
                    {"entrant_mass", eq.entrant_mass},
                    {"average_firm_profit", eq.diagnostics.average_firm_profit},
                    {"planner_price", pl.price},
                    {"planner_quantity", pl.quantity}};
    double worst = 0.0;
    for (const auto& [key, value] : general.items())
        worst = std::max(worst, std::abs(value.get<double>() - json(oracle).at(key).get<double>()));
    if (worst > 1e-6) log.warn("general solver departs from the closed form by " + format_number(worst));
    (void)err;

    if (!common.csv_dir.empty()) {
        CsvWriter csv(csv_path(common, "oracle_twotype.csv"), {"quantity", "closed_form", "general_solver"});
        for (const auto& [key, value] : general.items()) {
            csv.cell(key).cell(json(oracle).at(key).get<double>()).cell(value.get<double>());
            csv.end_row();
        }
    }
    emit(common, "oracle-twotype", hash, {{"oracle", oracle}, {"general_solver", general}, {"max_abs_difference", worst}},
         out);
    return 0;
}

int cmd_simulate(const Common& common, const std::optional<std::int64_t>& entrants, const std::optional<int>& periods,
                 const std::optional<int>& burn_in, const std::optional<std::uint64_t>& seed, double threshold_shift,
                 const Logger& log, std::ostream& out, std::ostream& err) {
    Context ctx = prepare(common, log, err);
    const DiscretizedModel& d = *ctx.model;
    SolverOptions quiet = ctx.solver;
    quiet.cross_checks = false;
    const LrceSolution sol = solve_lrce(d, quiet);

    SimConfig sim;
    const SimulationSettings& s = ctx.cfg.simulation;
    sim.entrants_per_period = entrants.value_or(s.entrants);
    sim.periods = periods.value_or(s.periods);
    sim.burn_in = burn_in.value_or(s.burn_in);
    sim.seed = seed.value_or(s.seed);
    sim.batches = s.batches;
    sim.price = sol.price;
    sim.threshold = Threshold{std::clamp(sol.threshold.position + threshold_shift, 0.0, static_cast<double>(d.cells()))};
    if (threshold_shift != 0.0)
        log.warn("simulating at a shifted threshold; the panel is not the equilibrium cross-section");

    const PanelStats stats = simulate_panel(sim, d);
    VerificationOptions vopt;
    vopt.entry_cost = d.primitives().entry_cost;
    const VerificationReport verdict = verify_against_steady_state(stats, sol.physical, vopt);
    log.info("total variation " + format_number(verdict.total_variation) + ", cohort NPV z " +
             format_number(verdict.npv_z));

    if (!common.csv_dir.empty())
        write_histogram_csv(csv_path(common, "simulation_histogram.csv"), d, stats, sol.physical);
    json stats_json = stats;
    stats_json["seed"] = sim.seed;
    stats_json["threshold_position"] = sim.threshold.position;
    stats_json["price"] = sim.price;
    emit(common, "simulate", ctx.hash, {{"panel", stats_json}, {"verification", verdict}}, out);
    return 0;
}

int cmd_validate(const Common& common, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_config(common.config);
    ValidationOptions vopt;
    vopt.cells = cfg.cells;
    vopt.tolerance = cfg.tolerance;
    const ValidationReport report = validate_primitives(cfg.model, vopt);
    emit(common, "validate", config_hash(cfg), report, out);
    if (report.passed()) return 0;
    for (const auto& c : report.checks)
        if (!c.passed) err << "lrce error: [" << c.id << "] " << c.description << " fails: " << c.witness << '\n';
    return static_cast<int>(ErrorCode::validation);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Logger log(err);
    CLI::App app{"Long-run competitive equilibrium of a heterogeneous-firm industry", "lrce"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    Common common;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("config", common.config, "JSON model configuration");
        if (config_required) opt->required()->check(CLI::ExistingFile);
        else opt->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "write the result JSON here instead of stdout");
        sub->add_option("--csv-dir", common.csv_dir, "directory for CSV plot data");
    };

    auto* solve = app.add_subcommand("solve", "solve the long-run competitive equilibrium");
    add_common(solve, true);

    auto* supply = app.add_subcommand("supply", "long-run inverse supply at given quantities");
    add_common(supply, true);
    std::string q_list;
    supply->add_option("--q", q_list, "comma-separated positive quantities")->required();

    auto* planner = app.add_subcommand("planner", "surplus-maximising allocation");
    add_common(planner, true);

    auto* cmp = app.add_subcommand("compare", "equilibrium versus planner");
    add_common(cmp, true);
    std::string discounts;
    cmp->add_option("--discounts", discounts, "discount factors for the schedule comparison CSV");

    auto* oracle = app.add_subcommand("oracle-twotype", "closed-form two-type economy");
    add_common(oracle, false);
    TwoTypeModel two;
    oracle->add_option("--curvature", two.curvature, "variable cost a in a*q^2/2");
    oracle->add_option("--fixed-low", two.fixed_low, "fixed cost of the low-cost type");
    oracle->add_option("--fixed-high", two.fixed_high, "fixed cost of the high-cost type");
    oracle->add_option("--discount", two.discount, "discount factor");
    oracle->add_option("--exit-probability", two.exit_probability, "exogenous exit probability");
    oracle->add_option("--demand-intercept", two.demand_intercept, "linear demand intercept");
    oracle->add_option("--demand-slope", two.demand_slope, "linear demand slope");

    auto* simulate = app.add_subcommand("simulate", "firm-level Monte Carlo at the equilibrium");
    add_common(simulate, true);
    std::optional<std::int64_t> entrants;
    std::optional<int> periods, burn_in;
    std::optional<std::uint64_t> seed;
    double threshold_shift = 0.0;
    simulate->add_option("--entrants", entrants, "entrants per period");
    simulate->add_option("--periods", periods, "simulated periods");
    simulate->add_option("--burn-in", burn_in, "periods discarded before measuring");
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--threshold-shift", threshold_shift, "move the exit threshold by this many cells");

    auto* validate = app.add_subcommand("validate", "check the model assumptions");
    add_common(validate, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorCode::config);
    }

    try {
        if (solve->parsed()) return cmd_solve(common, log, out, err);
        if (supply->parsed()) return cmd_supply(common, q_list, log, out, err);
        if (planner->parsed()) return cmd_planner(common, log, out, err);
        if (cmp->parsed()) return cmd_compare(common, discounts, log, out, err);
        if (oracle->parsed()) return cmd_oracle(common, two, log, out, err);
        if (simulate->parsed())
            return cmd_simulate(common, entrants, periods, burn_in, seed, threshold_shift, log, out, err);
        if (validate->parsed()) return cmd_validate(common, out, err);
    } catch (const Error& e) {
        err << "lrce error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const json::exception& e) {
        err << "lrce error: " << e.what() << '\n';
        return static_cast<int>(ErrorCode::config);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "lrce error: " << e.what() << '\n';
        return static_cast<int>(ErrorCode::config);
    } catch (const std::exception& e) {
        err << "lrce error: " << e.what() << '\n';
        return static_cast<int>(ErrorCode::numerical);
    }
    return static_cast<int>(ErrorCode::config);
}

} // namespace lrce::cli
