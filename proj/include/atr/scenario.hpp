#pragma once

#include "atr/encoder.hpp"
#include "atr/formula.hpp"
#include "atr/semantics.hpp"
#include "atr/shiftsets.hpp"
#include "atr/system.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atr {

/// Declared predicate as written in the scenario file. Either a plain
/// expression or a shape template expanded into half-plane leaves at load.
///
/// Templates (coordinates are 0-based state indices, agents 1-based):
///   box              agent, coords, lo[], hi[]
///   linf_ball        |d|_inf <= radius
///   l1_ball          |d|_1   <= radius
///   l2_ball_octagon  inscribed regular polygon of |d|_2 <= radius (2 coords, `sides`)
///   l2_ball          radius^2 - |d|^2 >= 0; not affine, counting/verification only
/// where d = x_agent[coords] - center, or x_agent[coords] - x_other[coords]
/// when `other` is set.
struct PredicateDecl {
    std::string label;
    std::string expr;      // plain predicates
    std::string shape;     // template name; empty for plain predicates
    int agent = 1;
    int other = 0;         // 0: ball around `center`
    std::vector<int> coords;
    std::vector<double> center;
    std::vector<double> lo, hi;
    double radius = 0.0;
    int sides = 8;

    /// Member predicates in declaration order (one for plain predicates).
    std::vector<Predicate> expand() const;
};

struct PieceDecl {
    std::string name;
    std::vector<std::string> members;  // predicate labels
    TimeSet times;
};

struct SolverSettings {
    double time_cap = 3600.0;
    long node_cap = 1'000'000;
    double rel_gap = 1e-6;
};

struct Scenario {
    std::string name;
    MultiAgentSystem system;
    std::vector<PredicateDecl> predicates;
    std::vector<PieceDecl> pieces;  // constraint task, or
    std::string formula;            // STL formula text
    ShiftBound bound;
    int horizon = 0;                // 0: derived from the task
    ObjectiveSpec objective;
    double M = 0.0;
    double eps = 1e-4;
    bool merge_boundary = false;
    SolverSettings solver;
    /// Per agent, the state coordinates written to the position CSV.
    std::vector<int> position_coords;

    bool is_stl() const { return !formula.empty(); }

    PredicateTable table() const;
    ConstraintTask constraint_task() const;
    Formula stl() const;
    Task task() const;

    /// T_phi for formulas, the latest constrained instant otherwise (or the
    /// declared horizon when larger).
    int effective_horizon() const;

    EncoderConfig encoder_config(Method method) const;

    /// Labels declared, the formula parses, horizon and bound admissible.
    void validate() const;
};

Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace atr
