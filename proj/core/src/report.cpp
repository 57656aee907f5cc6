#include "lrce/report.hpp"

#include "lrce/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace lrce {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

const char* to_string(ThresholdCase c) {
    switch (c) {
    case ThresholdCase::interior: return "interior";
    case ThresholdCase::lowest: return "lowest";
    case ThresholdCase::highest: return "highest";
    }
    return "interior";
}

ThresholdCase threshold_case_from_string(const std::string& s) {
    if (s == "interior") return ThresholdCase::interior;
    if (s == "lowest") return ThresholdCase::lowest;
    if (s == "highest") return ThresholdCase::highest;
    throw ConfigError("/location", "unknown threshold location \"" + s + "\"");
}

namespace {

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

json threshold_json(Threshold t, double value, Index lo, Index hi, ThresholdCase where) {
    return {{"position", t.position}, {"value", value}, {"bracket", {lo, hi}}, {"location", to_string(where)}};
}

template <class S>
void read_threshold(const json& j, S& s) {
    s.threshold = Threshold{j.at("position").get<double>()};
    s.threshold_value = j.at("value").get<double>();
    s.bracket_lower = j.at("bracket").at(0).get<Index>();
    s.bracket_upper = j.at("bracket").at(1).get<Index>();
    s.location = threshold_case_from_string(j.at("location").get<std::string>());
}

} // namespace

void to_json(json& j, const TypeMeasure& m) { j = vector_json(m.weights); }
void from_json(const json& j, TypeMeasure& m) { m.weights = vector_from(j); }

void to_json(json& j, const LrceDiagnostics& d) {
    j = {{"entry_residual", d.entry_residual},
         {"exit_residual", d.exit_residual},
         {"market_clearing_gap", d.market_clearing_gap},
         {"exit_condition_satisfied", d.exit_condition_satisfied},
         {"cross_checks_run", d.cross_checks_run},
         {"schedule_min_price", d.schedule_min_price},
         {"schedule_argmin", d.schedule_argmin},
         {"ac_grid_min", d.ac_grid_min},
         {"residual_sign_changes", d.residual_sign_changes},
         {"below_choke", d.below_choke},
         {"average_firm_profit", d.average_firm_profit},
         {"aggregate_profit", d.aggregate_profit}};
}

void from_json(const json& j, LrceDiagnostics& d) {
    j.at("entry_residual").get_to(d.entry_residual);
    j.at("exit_residual").get_to(d.exit_residual);
    j.at("market_clearing_gap").get_to(d.market_clearing_gap);
    j.at("exit_condition_satisfied").get_to(d.exit_condition_satisfied);
    j.at("cross_checks_run").get_to(d.cross_checks_run);
    j.at("schedule_min_price").get_to(d.schedule_min_price);
    j.at("schedule_argmin").get_to(d.schedule_argmin);
    j.at("ac_grid_min").get_to(d.ac_grid_min);
    j.at("residual_sign_changes").get_to(d.residual_sign_changes);
    j.at("below_choke").get_to(d.below_choke);
    j.at("average_firm_profit").get_to(d.average_firm_profit);
    j.at("aggregate_profit").get_to(d.aggregate_profit);
}

void to_json(json& j, const LrceSolution& s) {
    j = {{"price", s.price},
         {"threshold", threshold_json(s.threshold, s.threshold_value, s.bracket_lower, s.bracket_upper, s.location)},
         {"entrant_mass", s.entrant_mass},
         {"quantity", s.quantity},
         {"lambda_entry", s.lambda_entry},
         {"lambda_exit", s.lambda_exit},
         {"physical", s.physical},
         {"diagnostics", s.diagnostics}};
}

void from_json(const json& j, LrceSolution& s) {
    j.at("price").get_to(s.price);
    read_threshold(j.at("threshold"), s);
    j.at("entrant_mass").get_to(s.entrant_mass);
    j.at("quantity").get_to(s.quantity);
    j.at("lambda_entry").get_to(s.lambda_entry);
    j.at("lambda_exit").get_to(s.lambda_exit);
    j.at("physical").get_to(s.physical);
    j.at("diagnostics").get_to(s.diagnostics);
}

void to_json(json& j, const PlannerSolution& s) {
    j = {{"price", s.price},
         {"threshold", threshold_json(s.threshold, s.threshold_value, s.bracket_lower, s.bracket_upper, s.location)},
         {"quantity", s.quantity},
         {"entrant_mass", s.entrant_mass},
         {"gross_benefit", s.gross_benefit},
         {"total_cost", s.total_cost},
         {"surplus", s.surplus},
         {"physical", s.physical}};
}

void from_json(const json& j, PlannerSolution& s) {
    j.at("price").get_to(s.price);
    read_threshold(j.at("threshold"), s);
    j.at("quantity").get_to(s.quantity);
    j.at("entrant_mass").get_to(s.entrant_mass);
    j.at("gross_benefit").get_to(s.gross_benefit);
    j.at("total_cost").get_to(s.total_cost);
    j.at("surplus").get_to(s.surplus);
    j.at("physical").get_to(s.physical);
}

void to_json(json& j, const ComparisonReport& r) {
    j = {{"equilibrium", r.equilibrium},
         {"planner", r.planner},
         {"equilibrium_surplus", r.equilibrium_surplus},
         {"planner_surplus", r.planner_surplus},
         {"price_gap", r.price_gap},
         {"quantity_gap", r.quantity_gap},
         {"firm_quantities_weakly_higher", r.firm_quantities_weakly_higher},
         {"strict_case", r.strict_case},
         {"price_lower_at_planner", r.price_lower_at_planner},
         {"quantity_higher_at_planner", r.quantity_higher_at_planner},
         {"surplus_dominates", r.surplus_dominates},
         {"consistent", r.consistent}};
}

void to_json(json& j, const OracleSolution& s) {
    j = {{"weight_low", s.weight_low},
         {"weight_high", s.weight_high},
         {"price", s.price},
         {"quantity_per_firm", s.quantity_per_firm},
         {"weighted_average_cost", s.weighted_average_cost},
         {"marginal_cost", s.marginal_cost},
         {"average_firm_cost", s.average_firm_cost},
         {"average_firm_profit", s.average_firm_profit},
         {"quantity", s.quantity},
         {"entrant_mass", s.entrant_mass},
         {"planner_price", s.planner_price},
         {"planner_quantity", s.planner_quantity}};
}

void from_json(const json& j, OracleSolution& s) {
    j.at("weight_low").get_to(s.weight_low);
    j.at("weight_high").get_to(s.weight_high);
    j.at("price").get_to(s.price);
    j.at("quantity_per_firm").get_to(s.quantity_per_firm);
    j.at("weighted_average_cost").get_to(s.weighted_average_cost);
    j.at("marginal_cost").get_to(s.marginal_cost);
    j.at("average_firm_cost").get_to(s.average_firm_cost);
    j.at("average_firm_profit").get_to(s.average_firm_profit);
    j.at("quantity").get_to(s.quantity);
    j.at("entrant_mass").get_to(s.entrant_mass);
    j.at("planner_price").get_to(s.planner_price);
    j.at("planner_quantity").get_to(s.planner_quantity);
}

void to_json(json& j, const PanelStats& s) {
    j = {{"periods", s.periods},
         {"burn_in", s.burn_in},
         {"entrants_per_period", s.entrants_per_period},
         {"histogram", s.histogram},
         {"firm_periods", s.firm_periods},
         {"mean_firm_count", s.mean_firm_count},
         {"active", s.active},
         {"continuing", s.continuing},
         {"endogenous_exits", s.endogenous_exits},
         {"exogenous_exits", s.exogenous_exits},
         {"exit_rate", s.exit_rate},
         {"cohort_size", s.cohort_size},
         {"cohort_npv_mean", s.cohort_npv_mean},
         {"cohort_npv_se", s.cohort_npv_se}};
}

void from_json(const json& j, PanelStats& s) {
    j.at("periods").get_to(s.periods);
    j.at("burn_in").get_to(s.burn_in);
    j.at("entrants_per_period").get_to(s.entrants_per_period);
    j.at("histogram").get_to(s.histogram);
    j.at("firm_periods").get_to(s.firm_periods);
    j.at("mean_firm_count").get_to(s.mean_firm_count);
    j.at("active").get_to(s.active);
    j.at("continuing").get_to(s.continuing);
    j.at("endogenous_exits").get_to(s.endogenous_exits);
    j.at("exogenous_exits").get_to(s.exogenous_exits);
    j.at("exit_rate").get_to(s.exit_rate);
    j.at("cohort_size").get_to(s.cohort_size);
    j.at("cohort_npv_mean").get_to(s.cohort_npv_mean);
    j.at("cohort_npv_se").get_to(s.cohort_npv_se);
}

void to_json(json& j, const VerificationReport& r) {
    j = {{"total_variation", r.total_variation},
         {"npv_z", r.npv_z},
         {"worst_bin", r.worst_bin},
         {"worst_bin_z", r.bin_z.empty() ? 0.0 : r.bin_z[static_cast<std::size_t>(r.worst_bin)]},
         {"total_variation_ok", r.total_variation_ok},
         {"npv_ok", r.npv_ok},
         {"passed", r.passed}};
}

void to_json(json& j, const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"id", c.id}, {"description", c.description}, {"passed", c.passed}, {"witness", c.witness}});
    j = {{"passed", r.passed()}, {"checks", checks}};
}

void to_json(json& j, const Schedules& s) {
    json points = json::array();
    for (const auto& p : s.points)
        points.push_back({{"position", p.threshold.position},
                          {"entry_price", p.entry_price},
                          {"exit_residual", p.exit_residual}});
    j = {{"survival", s.survival}, {"points", points}};
}

void to_json(json& j, const ResultBundle& b) {
    j = {{"command", b.command}, {"config_hash", b.config_hash}, {"version", b.version}, {"result", b.result}};
}

void from_json(const json& j, ResultBundle& b) {
    j.at("command").get_to(b.command);
    j.at("config_hash").get_to(b.config_hash);
    j.at("version").get_to(b.version);
    b.result = j.at("result");
}

std::string library_version() { return LRCE_VERSION; }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error(ErrorCode::config, "cannot write " + path.string());
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_number(x)); }
CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

void write_measure_csv(const std::filesystem::path& path, const DiscretizedModel& d, const TypeMeasure& m) {
    CsvWriter csv(path, {"cell", "theta", "mass", "share", "density"});
    const double total = m.mass();
    for (Index i = 0; i < d.cells(); ++i) {
        const double share = total > 0.0 ? m.weights[i] / total : 0.0;
        csv.cell(static_cast<long long>(i)).cell(d.types()[i]).cell(m.weights[i]).cell(share).cell(share / d.spacing());
        csv.end_row();
    }
}

void write_schedules_csv(const std::filesystem::path& path, const DiscretizedModel& d, const Schedules& s) {
    CsvWriter csv(path, {"boundary", "position", "threshold_value", "entry_price", "exit_residual"});
    for (std::size_t k = 0; k < s.points.size(); ++k) {
        const auto& p = s.points[k];
        csv.cell(static_cast<long long>(k)).cell(p.threshold.position).cell(d.threshold_value(p.threshold));
        csv.cell(p.entry_price).cell(p.exit_residual);
        csv.end_row();
    }
}

void write_ac_curves_csv(const std::filesystem::path& path, const DiscretizedModel& d, const AcSurface& surface,
                         const std::vector<Index>& boundaries) {
    CsvWriter csv(path, {"boundary", "threshold_value", "price", "ac_bar"});
    for (Index k : boundaries) {
        for (std::size_t s = 0; s < surface.prices.size(); ++s) {
            csv.cell(static_cast<long long>(k)).cell(d.boundary(k)).cell(surface.prices[s]);
            csv.cell(surface.values(k, static_cast<Index>(s)));
            csv.end_row();
        }
    }
}

void write_delta_comparison_csv(const std::filesystem::path& path, const DiscretizedModel& d,
                                const std::vector<std::pair<double, Schedules>>& sweeps) {
    CsvWriter csv(path, {"discount", "boundary", "threshold_value", "entry_price", "exit_residual"});
    for (const auto& [discount, sched] : sweeps) {
        for (std::size_t k = 0; k < sched.points.size(); ++k) {
            const auto& p = sched.points[k];
            csv.cell(discount).cell(static_cast<long long>(k)).cell(d.threshold_value(p.threshold));
            csv.cell(p.entry_price).cell(p.exit_residual);
            csv.end_row();
        }
    }
}

void write_histogram_csv(const std::filesystem::path& path, const DiscretizedModel& d, const PanelStats& stats,
                         const TypeMeasure& analytic) {
    CsvWriter csv(path, {"cell", "theta", "count", "empirical_share", "analytic_share"});
    const double total = static_cast<double>(stats.firm_periods);
    const double analytic_mass = analytic.mass();
    for (Index i = 0; i < d.cells(); ++i) {
        const auto count = stats.histogram[static_cast<std::size_t>(i)];
        csv.cell(static_cast<long long>(i)).cell(d.types()[i]).cell(static_cast<long long>(count));
        csv.cell(total > 0.0 ? static_cast<double>(count) / total : 0.0);
        csv.cell(analytic_mass > 0.0 ? analytic.weights[i] / analytic_mass : 0.0);
        csv.end_row();
    }
}

} // namespace lrce
