#include "atr/cli.hpp"
#include "atr/errors.hpp"
#include "atr/mip/lp_format.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace atr;
using json = nlohmann::json;

namespace {

const std::filesystem::path kScenarios = ATR_SCENARIO_DIR;

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("atr_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Scalar integrator with box [-2, 2] and the given task block.
Scenario scalar(const std::string& predicates, const std::string& task, const std::string& extra = "") {
    return scenario_from_json(R"({"name": "scalar", "system": {"agents": [{"A": [[1]], "B": [[1]],
        "state_box": [[-2, 2]], "input_box": [[-1, 1]], "x0": [0]}]}, "predicates": )" +
                              predicates + R"(, "task": )" + task + extra + "}");
}

json synth(const Scenario& s, cli::Options opt, int expect_code) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_synth(s, opt, out, err), expect_code) << err.str();
    return json::parse(out.str());
}

json verify(const Scenario& s, const std::filesystem::path& csv, cli::Options opt = {}) {
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_verify(s, csv, opt, out), cli::ok);
    return json::parse(out.str());
}

}  // namespace

TEST(Count, BenchmarkRowsThroughTheCommand) {
    std::ostringstream out;
    cli::cmd_count(load_scenario(kScenarios / "c1.json"), {}, out);
    EXPECT_EQ(out.str(), "name,method,binaries,constraints\nc1,naive,—,1215\nc1,reduced,—,383\n");
    out.str("");
    cli::cmd_count(load_scenario(kScenarios / "phi3.json"), {}, out);
    EXPECT_EQ(out.str(), "name,method,binaries,constraints\nphi3,naive,17920,—\nphi3,reduced,6944,—\n");
}

TEST(Count, SingleShiftGivesEqualColumns) {
    cli::Options opt;
    opt.bound = ShiftBound{0, 0};
    for (const char* name : {"c1.json", "c2.json", "phi1.json", "phi2.json", "phi3.json"}) {
        const auto rows = cli::count(cli::apply(load_scenario(kScenarios / name), opt), {Method::naive, Method::reduced});
        EXPECT_EQ(rows[0].binaries, rows[1].binaries) << name;
        EXPECT_EQ(rows[0].constraints, rows[1].constraints) << name;
    }
}

TEST(Count, MethodFlagSelectsOneRow) {
    cli::Options opt;
    opt.method = Method::reduced;
    std::ostringstream out;
    cli::cmd_count(load_scenario(kScenarios / "phi2.json"), opt, out);
    EXPECT_EQ(out.str(), "name,method,binaries,constraints\nphi2,reduced,848,—\n");
}

TEST(Synth, ReachWithoutAndWithShifts) {
    const Scenario s = load_scenario(kScenarios / "integrator_reach.json");
    cli::Options opt;
    opt.out_dir = scratch("reach0");
    const json r0 = synth(s, opt, cli::ok);
    EXPECT_EQ(r0["status"], "optimal");
    EXPECT_TRUE(r0["oracle"]["satisfied"]);
    for (const char* f : {"states.csv", "inputs.csv", "positions.csv", "result.json"})
        EXPECT_TRUE(std::filesystem::exists(opt.out_dir / f)) << f;

    opt.bound = ShiftBound{-2, 2};
    opt.out_dir = scratch("reach2");
    const json r2 = synth(s, opt, cli::ok);
    EXPECT_TRUE(r2["oracle"]["satisfied"]);
    EXPECT_GE(r2["atr"]["value"].get<int>(), 2);
    // oracle consistency: the written trajectory verifies under the same bound
    const json v = verify(s, opt.out_dir / "states.csv", opt);
    EXPECT_TRUE(v["satisfied"]);
    EXPECT_GE(v["theta"].get<int>(), 2);
}

TEST(Verify, AllZeroTrajectoryViolatesReach) {
    const Scenario s = load_scenario(kScenarios / "integrator_reach.json");
    const auto dir = scratch("zeros");
    {
        std::ofstream f(dir / "states.csv");
        f << "k,agent,coord,value\n";
        for (int k = 0; k <= 6; ++k) f << k << ",1,0,0\n";
    }
    const json v = verify(s, dir / "states.csv");
    EXPECT_FALSE(v["satisfied"]);
    EXPECT_EQ(v["theta"], -6);  // violated under every shift up to tau_max = T
    EXPECT_EQ(v["witness"]["predicate"], "reach");
    EXPECT_EQ(v["witness"]["k"], 4);
    EXPECT_EQ(v["witness"]["kappa"], json::array({0}));
}

// Up at k=3 then down at k=5: nominal synthesis succeeds, one step of slack breaks it.
TEST(Verify, WiderBoundCanFlipTheVerdict) {
    const Scenario s = scalar(R"({"up": "x1 - 1", "down": "0 - x1"})",
                              R"({"pieces": [{"name": "up", "members": ["up"], "times": [3]},
                                             {"name": "down", "members": ["down"], "times": [5]}]})");
    cli::Options opt;
    opt.out_dir = scratch("flip");
    synth(s, opt, cli::ok);
    EXPECT_TRUE(verify(s, opt.out_dir / "states.csv")["satisfied"]);
    cli::Options wide;
    wide.bound = ShiftBound{-1, 1};
    const json v = verify(s, opt.out_dir / "states.csv", wide);
    EXPECT_FALSE(v["satisfied"]);
    ASSERT_TRUE(v["witness"].is_object());
    EXPECT_EQ(v["witness"]["kappa"], json::array({-1}));
    // and synthesis under the wider bound reports infeasible
    opt.bound = wide.bound;
    EXPECT_EQ(synth(s, opt, cli::infeasible)["status"], "infeasible");
}

TEST(Verify, MalformedTrajectoryIsRejected) {
    const Scenario s = load_scenario(kScenarios / "integrator_reach.json");
    const auto dir = scratch("bad");
    std::ofstream(dir / "states.csv") << "k,agent,coord,value\n0,1,0,abc\n";
    std::ostringstream out;
    try {
        cli::cmd_verify(s, dir / "states.csv", {}, out);
        FAIL();
    } catch (const std::exception& e) {
        EXPECT_EQ(cli::exit_code(e), cli::invalid_input);
    }
    EXPECT_THROW(cli::cmd_verify(s, dir / "missing.csv", {}, out), ValidationError);
}

TEST(Synth, ExitCodes) {
    const Scenario unreachable = scalar(R"({"far": "x1 - 5"})", R"({"pieces": [{"members": ["far"], "times": [2]}]})");
    cli::Options opt;
    opt.out_dir = scratch("codes");
    EXPECT_EQ(synth(unreachable, opt, cli::infeasible)["objective"], nullptr);

    cli::Options capped;
    capped.out_dir = opt.out_dir;
    capped.node_cap = 1;
    const json r = synth(load_scenario(kScenarios / "phi3_desk.json"), capped, cli::cap_reached);
    EXPECT_EQ(r["status"], "cap_reached");

    std::ostringstream out, err;
    try {
        cli::cmd_synth(load_scenario(kScenarios / "multirobot_c_t20.json"), opt, out, err);
        FAIL() << "quadratic objectives are export-only";
    } catch (const std::exception& e) {
        EXPECT_EQ(cli::exit_code(e), cli::invalid_input);
    }
    EXPECT_EQ(cli::exit_code(CapExceeded("x")), cli::cap_reached);
    EXPECT_EQ(cli::exit_code(ParseError("x", 1, 1)), cli::invalid_input);
    EXPECT_EQ(cli::exit_code(NumericalError("x")), cli::failure);
}

TEST(Synth, MultiRobotDeskVariant) {
    cli::Options opt;
    opt.out_dir = scratch("robots");
    opt.bound = ShiftBound{-1, 1};
    const json r = synth(load_scenario(kScenarios / "multirobot_c_t10.json"), opt, cli::ok);
    EXPECT_TRUE(r["oracle"]["satisfied"]);
    EXPECT_GE(r["atr"]["tau"].get<int>(), 1);
    EXPECT_EQ(r["counts"]["binaries"], 0);
    std::ifstream pos(opt.out_dir / "positions.csv");
    std::string header;
    std::getline(pos, header);
    EXPECT_EQ(header, "k,agent,pos0,pos1");
}

TEST(Export, RoundTripAndQuadraticObjective) {
    cli::Options opt;
    opt.out_dir = scratch("export");
    std::ostringstream out;
    const Scenario s = load_scenario(kScenarios / "multirobot_c_t20.json");
    EXPECT_EQ(cli::cmd_export(s, opt, out), cli::ok);
    const json j = json::parse(out.str());
    EXPECT_TRUE(j["round_trip"]);
    const mip::MipModel m = mip::import_model(j["path"].get<std::string>());
    EXPECT_FALSE(m.objective().quadratic.empty());
    EXPECT_TRUE(cli::same_model(m, cli::build(s, Method::reduced).model));
}

TEST(Export, SameModelNoticesDifferences) {
    const Scenario s = load_scenario(kScenarios / "integrator_reach.json");
    const mip::MipModel a = cli::build(s, Method::reduced).model;
    mip::MipModel b = a;
    std::string why;
    EXPECT_TRUE(cli::same_model(a, b, &why));
    b.variable(0).hi += 1e-12;
    EXPECT_FALSE(cli::same_model(a, b, &why));
    EXPECT_NE(why.find("variable"), std::string::npos);
}

TEST(Bench, EmptySetIsHeaderOnly) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_bench({}, {}, out, err), cli::ok);
    EXPECT_EQ(out.str(), "name,method,binaries,constraints,build_s,solve_s,status,speedup\n");
}

TEST(Bench, CountOnlyMatchesTheTable) {
    cli::Options opt;
    opt.count_only = true;
    std::vector<std::filesystem::path> files;
    for (const char* n : {"c1", "c2", "phi1", "phi2", "phi3"}) files.push_back(kScenarios / (std::string(n) + ".json"));
    files.push_back("/nonexistent/scenario.json");
    std::ostringstream out, err;
    cli::cmd_bench(files, opt, out, err);
    const std::string text = out.str();
    for (const char* row : {"c1,naive,—,1215,", "c1,reduced,—,383,", "c2,naive,—,189,", "c2,reduced,—,149,",
                            "phi1,naive,539,—,", "phi1,reduced,215,—,", "phi2,naive,1280,—,", "phi2,reduced,848,—,",
                            "phi3,naive,17920,—,", "phi3,reduced,6944,—,"})
        EXPECT_NE(text.find(row), std::string::npos) << row;
    EXPECT_NE(text.find("scenario,—,—,—,—,—,failed,—"), std::string::npos) << text;
    EXPECT_FALSE(err.str().empty());
}

TEST(Bench, TimedRowsCarrySpeedup) {
    cli::Options opt;
    std::ostringstream out, err;
    cli::cmd_bench({kScenarios / "integrator_reach.json", kScenarios / "phi1.json"}, opt, out, err);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NE(rows[0].find(",optimal,—"), std::string::npos) << rows[0];
    EXPECT_EQ(rows[1].find(",optimal,—"), std::string::npos) << rows[1];
    // non-affine predicates: counts still reported, encoding fails per row
    EXPECT_NE(rows[2].find("phi1,naive,539,—,—,—,failed"), std::string::npos) << rows[2];
}
