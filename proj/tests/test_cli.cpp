#include "cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = lrce::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(LRCE_CONFIG_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "lrce_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_variant(const std::string& name, const std::function<void(json&)>& edit) {
    std::ifstream in(config("baseline.json"));
    json doc = json::parse(in);
    edit(doc);
    const auto path = scratch(name);
    std::ofstream(path) << doc.dump(2);
    return path.string();
}

} // namespace

TEST(Cli, SolveBaseline) {
    const Outcome r = run({"solve", config("baseline.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["command"], "solve");
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
    EXPECT_FALSE(j["version"].get<std::string>().empty());
    const json& res = j["result"];
    EXPECT_GT(res["price"].get<double>(), 1.8);
    EXPECT_EQ(res["threshold"]["location"], "interior");
    EXPECT_EQ(res["threshold"]["bracket"].size(), 2u);
    EXPECT_GT(res["entrant_mass"].get<double>(), 0.0);
    EXPECT_LE(std::abs(res["diagnostics"]["entry_residual"].get<double>()), 1e-8);
    EXPECT_LE(std::abs(res["diagnostics"]["exit_residual"].get<double>()), 1e-6);
    EXPECT_LE(res["diagnostics"]["market_clearing_gap"].get<double>(), 1e-8);
}

TEST(Cli, SolveWritesCsvAndOutFile) {
    const auto dir = scratch("csv");
    std::filesystem::remove_all(dir);
    const auto out = scratch("solve.json");
    const Outcome r = run({"solve", config("baseline.json"), "--csv-dir", dir.string(), "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    for (const char* f : {"fig2_ac_curves.csv", "fig3_schedules.csv", "lambda_entry.csv", "lambda_exit.csv",
                          "physical_measure.csv"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    std::ifstream in(out);
    EXPECT_EQ(json::parse(in)["command"], "solve");
}

TEST(Cli, SupplyIsFlat) {
    const Outcome r = run({"supply", config("two-type-surrogate.json"), "--q", "0.5,5,50"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("bypass_validation"), std::string::npos);
    const json rows = json::parse(r.out)["result"]["supply"];
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) EXPECT_NEAR(row["price"].get<double>(), 1.849150, 1e-6);
    EXPECT_EQ(rows[0]["price"], rows[2]["price"]);
}

TEST(Cli, SupplyRejectsNonPositiveQuantity) {
    EXPECT_EQ(run({"supply", config("two-type-surrogate.json"), "--q", "1,-2"}).code, 2);
    EXPECT_EQ(run({"supply", config("two-type-surrogate.json"), "--q", "abc"}).code, 2);
}

TEST(Cli, ValidateBadExitProbability) {
    const Outcome r = run({"validate", config("badrho.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("positive-exit"), std::string::npos) << r.err;
}

TEST(Cli, ValidateBaseline) {
    const Outcome r = run({"validate", config("baseline.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(json::parse(r.out)["result"]["passed"].get<bool>());
}

TEST(Cli, ValidateReportsFailedCheck) {
    const auto path = write_variant("decreasing.json", [](json& d) { d["model"]["cost"]["fixed_slope"] = -1.0; });
    const Outcome r = run({"validate", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cost-increasing-in-type"), std::string::npos);
    EXPECT_EQ(run({"solve", path}).code, 2);
}

TEST(Cli, PlannerAndCompare) {
    const Outcome p = run({"planner", config("two-type-surrogate.json")});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_NEAR(json::parse(p.out)["result"]["price"].get<double>(), 1.825742, 1e-6);
    const auto dir = scratch("cmp");
    const Outcome c = run({"compare", config("baseline.json"), "--csv-dir", dir.string(), "--discounts", "0.5,0.9,1"});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_TRUE(json::parse(c.out)["result"]["consistent"].get<bool>());
    EXPECT_TRUE(std::filesystem::exists(dir / "fig4_delta_comparison.csv"));
}

TEST(Cli, OracleTwoType) {
    const Outcome a = run({"oracle-twotype"});
    ASSERT_EQ(a.code, 0) << a.err;
    const json j = json::parse(a.out)["result"];
    EXPECT_NEAR(j["oracle"]["price"].get<double>(), 1.849150, 1e-6);
    EXPECT_LT(j["max_abs_difference"].get<double>(), 1e-9);
    const Outcome b = run({"oracle-twotype", config("two-type-surrogate.json")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(json::parse(b.out)["result"]["oracle"], j["oracle"]);
    EXPECT_EQ(run({"oracle-twotype", config("baseline.json")}).code, 2);
}

TEST(Cli, SimulateSmallPanel) {
    const Outcome r = run({"simulate", config("baseline.json"), "--entrants", "50", "--periods", "100", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out)["result"];
    EXPECT_EQ(j["panel"]["seed"], 3);
    EXPECT_EQ(j["panel"]["burn_in"], 66);
    EXPECT_EQ(run({"simulate", config("baseline.json"), "--periods", "10"}).code, 2);
}

TEST(Cli, NoActiveEquilibriumExitsThree) {
    const auto path = write_variant("inactive.json", [](json& d) {
        d["model"]["cost"] = {{"family", "quadratic"}, {"fixed_intercept", 2.0}, {"fixed_slope", 0.0}};
        d["model"]["demand"] = {{"family", "linear"}, {"intercept", 1.5}, {"slope", 1.0}};
    });
    const Outcome r = run({"solve", path});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("no active equilibrium"), std::string::npos) << r.err;
}

TEST(Cli, NumericalFailureExitsFour) {
    const auto path = write_variant("hopeless.json", [](json& d) { d["model"]["entry_cost"] = 1e30; });
    EXPECT_EQ(run({"solve", path}).code, 4);
}

TEST(Cli, ConfigErrors) {
    const auto path = write_variant("typo.json", [](json& d) {
        d["model"]["dicount"] = 0.9;
        d["model"].erase("discount");
    });
    const Outcome r = run({"solve", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("dicount"), std::string::npos);
    EXPECT_EQ(run({"solve", "/does/not/exist.json"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
