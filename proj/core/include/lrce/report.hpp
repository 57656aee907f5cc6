#pragma once

#include "lrce/equilibrium.hpp"
#include "lrce/simulation.hpp"
#include "lrce/twotype.hpp"
#include "lrce/welfare.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace lrce {

/// Shortest decimal text that parses back to the same double ("inf", "-inf", "nan" otherwise).
std::string format_number(double x);

const char* to_string(ThresholdCase c);
ThresholdCase threshold_case_from_string(const std::string& s);

void to_json(nlohmann::json& j, const TypeMeasure& m);
void from_json(const nlohmann::json& j, TypeMeasure& m);
void to_json(nlohmann::json& j, const LrceDiagnostics& d);
void from_json(const nlohmann::json& j, LrceDiagnostics& d);
void to_json(nlohmann::json& j, const LrceSolution& s);
void from_json(const nlohmann::json& j, LrceSolution& s);
void to_json(nlohmann::json& j, const PlannerSolution& s);
void from_json(const nlohmann::json& j, PlannerSolution& s);
void to_json(nlohmann::json& j, const ComparisonReport& r);
void to_json(nlohmann::json& j, const OracleSolution& s);
void from_json(const nlohmann::json& j, OracleSolution& s);
void to_json(nlohmann::json& j, const PanelStats& s);
void from_json(const nlohmann::json& j, PanelStats& s);
void to_json(nlohmann::json& j, const VerificationReport& r);
void to_json(nlohmann::json& j, const ValidationReport& r);
void to_json(nlohmann::json& j, const Schedules& s);

struct ResultBundle {
    std::string command;
    std::string config_hash;
    std::string version;
    nlohmann::json result;
};

void to_json(nlohmann::json& j, const ResultBundle& b);
void from_json(const nlohmann::json& j, ResultBundle& b);

std::string library_version();

/// Minimal CSV sink; numbers are written with format_number.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

/// cell, theta, mass, share, density (share per unit of type).
void write_measure_csv(const std::filesystem::path& path, const DiscretizedModel& d, const TypeMeasure& m);

/// boundary, position, threshold_value, entry_price, exit_residual.
void write_schedules_csv(const std::filesystem::path& path, const DiscretizedModel& d, const Schedules& s);

/// Long format: boundary, threshold_value, price, ac_bar.
void write_ac_curves_csv(const std::filesystem::path& path, const DiscretizedModel& d, const AcSurface& surface,
                         const std::vector<Index>& boundaries);

/// Long format over discount factors: discount, boundary, threshold_value, entry_price, exit_residual.
void write_delta_comparison_csv(const std::filesystem::path& path, const DiscretizedModel& d,
                                const std::vector<std::pair<double, Schedules>>& sweeps);

/// cell, theta, count, empirical_share, analytic_share.
void write_histogram_csv(const std::filesystem::path& path, const DiscretizedModel& d, const PanelStats& stats,
                         const TypeMeasure& analytic);

} // namespace lrce
