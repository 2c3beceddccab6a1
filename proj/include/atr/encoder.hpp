#pragma once

#include "atr/formula.hpp"
#include "atr/mip/model.hpp"
#include "atr/shiftsets.hpp"
#include "atr/system.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace atr {

struct ObjectiveSpec {
    enum class Kind { input_l1, input_linf, linear, exported_quadratic };

    Kind kind = Kind::input_l1;
    /// Per stacked input coordinate; empty means all ones.
    std::vector<double> input_weights;
    /// Per stacked state coordinate; empty means all zeros.
    std::vector<double> state_weights;
};

const char* to_string(ObjectiveSpec::Kind k);
ObjectiveSpec::Kind parse_objective_kind(const std::string& s);

struct EncoderConfig {
    double M = 0.0;      // big-M; 0 derives it from the state ranges
    double eps = 1e-4;   // strictness margin of predicate rows
    double constraint_margin = 1e-6;  // constraint-task rows read mu >= margin
    Method method = Method::reduced;
    bool merge_boundary = false;  // clamp negative indices in literal/constraint keys
    int horizon = 0;              // 0 derives it from the task
    ObjectiveSpec objective;
};

/// Variable ids of the trajectory: x(0..T+E) and u(0..T-1), E extension states.
struct VarMaps {
    int horizon = 0;
    int extension = 0;
    std::vector<std::vector<int>> state;  // [k][stacked coord]
    std::vector<std::vector<int>> input;  // [k][stacked coord]
    std::vector<int> state_offset;        // per agent, plus total

    /// x_agent[coord] at raw index k (below zero reads x(0)). Throws ExtensionError past T+E.
    int state_var(int agent, int coord, int k) const;
};

struct Bookkeeping {
    std::int64_t predicate_binaries = 0;
    std::int64_t temporal_binaries = 0;
    std::int64_t boolean_binaries = 0;
    std::int64_t until_aux = 0;
    std::int64_t task_rows = 0;     // constraint-task inequalities
    std::int64_t big_m_rows = 0;
    std::int64_t logic_rows = 0;    // boolean/temporal linking rows
    std::int64_t covering_rows = 0; // enforced disjunctions
    std::int64_t root_rows_raw = 0; // one per enforced node and shift vector
    std::int64_t root_rows = 0;     // after collapsing shared keys
    std::int64_t dynamics_rows = 0;
    std::int64_t objective_rows = 0;

    std::int64_t stl_binaries() const { return predicate_binaries + temporal_binaries + boolean_binaries; }
};

struct EncodedProblem {
    mip::MipModel model;
    VarMaps vars;
    Bookkeeping counts;
    double M = 0.0;
    double eps = 0.0;
    ShiftBound bound;
    /// Binary ids per pre-order node and pair-set id (literal nodes point at their group).
    std::vector<std::vector<int>> node_binaries;
    std::vector<PairSetIndex> node_index;

    /// Binary of `node` for the pair (k, kappa), or -1.
    int binary(int node, int k, const ShiftVector& kappa) const;
};

/// State/input variables, dynamics equalities (zero input past T) and boxes.
/// x(0) is fixed through its bounds; extension states carry implied bounds
/// from interval propagation of the state box instead of the box itself.
VarMaps encode_dynamics(const MultiAgentSystem& sys, int T, int theta2, mip::MipModel& model,
                        std::int64_t* rows = nullptr);

/// Interval hull of each stacked state coordinate over x(0..T+extension).
std::vector<Box> state_ranges(const MultiAgentSystem& sys, int extension);

/// One row mu(x^kappa(k)) >= margin per affine member and pair-set representative.
EncodedProblem encode_constraint_task(const ConstraintTask& task, const MultiAgentSystem& sys, ShiftBound bound,
                                      const EncoderConfig& config);

/// Big-M encoding of a normalized formula with one binary per (node, pair set).
EncodedProblem encode_stl(const Formula& phi, const MultiAgentSystem& sys, ShiftBound bound,
                          const EncoderConfig& config);

void attach_objective(const ObjectiveSpec& spec, const MultiAgentSystem& sys, const VarMaps& vars,
                      mip::MipModel& model, std::int64_t* rows = nullptr);

/// Trajectory from a solution: inputs are clipped to their box (solver
/// tolerance) and the dynamics re-simulated with the extension.
Trajectory decode(const EncodedProblem& problem, const MultiAgentSystem& sys, const std::vector<double>& x);

}  // namespace atr
