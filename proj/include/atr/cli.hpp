#pragma once

#include "atr/encoder.hpp"
#include "atr/mip/model.hpp"
#include "atr/mip/lp.hpp"
#include "atr/scenario.hpp"
#include "atr/semantics.hpp"

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace atr::cli {

enum ExitCode : int { ok = 0, failure = 1, infeasible = 2, cap_reached = 3, invalid_input = 4 };

/// Command-line overrides of the scenario file.
struct Options {
    std::optional<Method> method;  // count/bench: both when unset; synth/export: reduced
    std::optional<ShiftBound> bound;
    std::filesystem::path out_dir = ".";
    std::optional<double> time_cap;
    std::optional<long> node_cap;
    bool merge_boundary = false;
    int repetitions = 1;
    bool count_only = false;
};

/// Scenario with the overrides applied and re-validated.
Scenario apply(Scenario s, const Options& opt);

struct CountRow {
    std::string name;
    Method method = Method::reduced;
    std::optional<std::int64_t> binaries;     // STL tasks
    std::optional<std::int64_t> constraints;  // constraint tasks
};

std::vector<CountRow> count(const Scenario& s, const std::vector<Method>& methods);

/// Encoded model of the scenario task under its bound, with the objective attached.
EncodedProblem build(const Scenario& s, Method method);

struct SynthResult {
    EncodedProblem problem;
    mip::SolveResult solve;
    std::optional<Trajectory> trajectory;
    Verdict oracle;          // robust_check under the synthesis bound
    AtrValue atr;            // search radius up to the horizon
    double build_time = 0.0; // seconds
};

/// Encode, solve with the built-in solver, decode and oracle-check.
SynthResult synthesize(const Scenario& s, Method method);

/// Exact structural comparison used by the export round trip.
bool same_model(const mip::MipModel& a, const mip::MipModel& b, std::string* why = nullptr);

int cmd_count(const Scenario& s, const Options& opt, std::ostream& out);
int cmd_synth(const Scenario& s, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const Scenario& s, const std::filesystem::path& states_csv, const Options& opt, std::ostream& out);
int cmd_export(const Scenario& s, const Options& opt, std::ostream& out);
int cmd_bench(const std::vector<std::filesystem::path>& scenarios, const Options& opt, std::ostream& out,
              std::ostream& err);

/// Exit code for an exception escaping a command.
int exit_code(const std::exception& e);

std::string verdict_json(const Verdict& v, std::optional<AtrValue> theta);

}  // namespace atr::cli
