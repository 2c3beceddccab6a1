// atr: count, synthesize, verify, export and benchmark time-shift robust tasks.

#include "atr/cli.hpp"
#include "atr/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string method;
    std::vector<int> bound;
    std::string out = ".";
    double time_cap = 0.0;
    long node_cap = 0;
    bool merge_boundary = false;
    int repetitions = 1;
    bool count_only = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--method", f.method, "Encoding: naive or reduced")->check(CLI::IsMember({"naive", "reduced"}));
    cmd->add_option("--bound", f.bound, "Shift bound THETA1 THETA2 (overrides the scenario)")->expected(2);
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--time-cap", f.time_cap, "Solver wall-time cap in seconds");
    cmd->add_option("--node-cap", f.node_cap, "Branch-and-bound node cap");
    cmd->add_flag("--merge-boundary", f.merge_boundary, "Merge shifted reads below k = 0 in literal keys");
}

atr::cli::Options to_options(const Flags& f) {
    atr::cli::Options o;
    if (!f.method.empty()) o.method = atr::parse_method(f.method);
    if (f.bound.size() == 2) o.bound = atr::ShiftBound{f.bound[0], f.bound[1]};
    o.out_dir = f.out;
    if (f.time_cap > 0) o.time_cap = f.time_cap;
    if (f.node_cap > 0) o.node_cap = f.node_cap;
    o.merge_boundary = f.merge_boundary;
    o.repetitions = f.repetitions;
    o.count_only = f.count_only;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control synthesis and verification under asynchronous time shifts"};
    app.require_subcommand(1);
    Flags f;
    std::string scenario, trajectory;
    std::vector<std::string> scenarios;

    auto* count = app.add_subcommand("count", "Print naive/reduced constraint and binary counts");
    auto* synth = app.add_subcommand("synth", "Synthesize a robust trajectory with the built-in solver");
    auto* verify = app.add_subcommand("verify", "Check a states CSV against the scenario task");
    auto* exp = app.add_subcommand("export", "Write the MIP model as a CPLEX LP file");
    auto* bench = app.add_subcommand("bench", "Counts and timings, naive vs reduced");
    for (auto* cmd : {count, synth, verify, exp}) {
        cmd->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        add_common(cmd, f);
    }
    verify->add_option("trajectory", trajectory, "states.csv written by synth")->required()->check(CLI::ExistingFile);
    bench->add_option("scenarios", scenarios, "Scenario JSON files")->check(CLI::ExistingFile);
    bench->add_option("--repetitions", f.repetitions, "Timed repetitions per method")->check(CLI::PositiveNumber);
    bench->add_flag("--count-only", f.count_only, "Skip building and solving");
    add_common(bench, f);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto opt = to_options(f);
        if (bench->parsed()) return atr::cli::cmd_bench({scenarios.begin(), scenarios.end()}, opt, std::cout, std::cerr);
        const atr::Scenario s = atr::load_scenario(scenario);
        if (count->parsed()) return atr::cli::cmd_count(s, opt, std::cout);
        if (synth->parsed()) return atr::cli::cmd_synth(s, opt, std::cout, std::cerr);
        if (verify->parsed()) return atr::cli::cmd_verify(s, trajectory, opt, std::cout);
        return atr::cli::cmd_export(s, opt, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return atr::cli::exit_code(e);
    }
}
