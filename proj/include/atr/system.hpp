#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace atr {

/// Row-major dense matrix, small sizes only (agent dynamics).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    static Matrix identity(int n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct Box {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-agent LTI block x(k+1) = A x(k) + B u(k) with box constraints.
struct AgentModel {
    Matrix A;
    Matrix B;
    std::vector<Box> state_box;
    std::vector<Box> input_box;

    int n() const { return A.rows; }
    int m() const { return B.cols; }
    std::vector<double> step(std::span<const double> x, std::span<const double> u) const;
    void validate() const;
};

class MultiAgentSystem {
public:
    MultiAgentSystem() = default;
    MultiAgentSystem(std::vector<AgentModel> agents, std::vector<double> x0);

    int num_agents() const { return static_cast<int>(agents_.size()); }
    const AgentModel& agent(int i) const { return agents_[static_cast<std::size_t>(i)]; }
    const std::vector<AgentModel>& agents() const { return agents_; }
    const std::vector<double>& x0() const { return x0_; }

    int state_dim() const { return state_offset_.back(); }
    int input_dim() const { return input_offset_.back(); }
    int state_offset(int agent) const { return state_offset_[static_cast<std::size_t>(agent)]; }
    int input_offset(int agent) const { return input_offset_[static_cast<std::size_t>(agent)]; }

    /// Throws ValidationError on inconsistent dimensions, bad boxes or x0 outside its box.
    void validate() const;

private:
    std::vector<AgentModel> agents_;
    std::vector<double> x0_;
    std::vector<int> state_offset_{0};
    std::vector<int> input_offset_{0};
};

/// Finite-horizon stacked signal x(0..T), u(0..T-1), plus zero-input
/// extension states x(T+1..T+E) used when a shift reads past the horizon.
struct Trajectory {
    int horizon = 0;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> extension;
    std::vector<int> state_offset;  // per agent, plus total at the end
    std::vector<int> input_offset;

    int num_agents() const { return static_cast<int>(state_offset.size()) - 1; }
    int agent_dim(int agent) const {
        return state_offset[static_cast<std::size_t>(agent) + 1] - state_offset[static_cast<std::size_t>(agent)];
    }

    /// Agent block of the stored state at raw time index `index`: clamps below
    /// zero to x(0), reads the extension above T. Throws ExtensionError past it.
    std::span<const double> agent_state(int agent, int index) const;

    /// Value of one coordinate at raw index (same boundary rules).
    double value(int agent, int coord, int index) const { return agent_state(agent, index)[static_cast<std::size_t>(coord)]; }
};

using ShiftVector = std::vector<int>;

/// Optional nonlinear per-agent step used only by verification workflows.
using StepFunction =
    std::function<std::vector<double>(int agent, std::span<const double> x, std::span<const double> u)>;

/// Rolls the dynamics forward from x0 and appends `extension` zero-input
/// states. Throws ValidationError on dimension mismatch, inputs outside their
/// box, or a state-box violation (reported with k and coordinate).
Trajectory simulate(const MultiAgentSystem& sys, const std::vector<std::vector<double>>& inputs,
                    int extension, const StepFunction& step = {}, double box_tol = 1e-6);

/// Trajectory whose states are given directly (measured or imported); the
/// extension is computed from the last state with zero input.
Trajectory from_states(const MultiAgentSystem& sys, std::vector<std::vector<double>> states,
                       std::vector<std::vector<double>> inputs, int extension);

/// Recomputes the zero-input extension so that it has at least `length` states.
void extend(Trajectory& traj, const MultiAgentSystem& sys, int length);

enum class IndexMode { raw, clamped };

/// k + kappa_i, optionally clamped at 0 (all negative indices read x(0)).
constexpr int effective_index(int k, int kappa_i, IndexMode mode) {
    const int e = k + kappa_i;
    return (mode == IndexMode::clamped && e < 0) ? 0 : e;
}

/// Stacked time-shifted state: agent i read at k + kappa_i with the clamp
/// (below 0) and zero-input extension (above T) rules.
std::vector<double> shifted_state(const Trajectory& traj, int k, const ShiftVector& kappa);

/// Long-format CSV `k,agent,coord,value` (agent 1-based, extension rows have k > T).
void write_states_csv(std::ostream& out, const Trajectory& traj);
void write_inputs_csv(std::ostream& out, const Trajectory& traj);
/// Reads a states CSV for a system with the given horizon. Rows with k > T
/// become the extension; it is then regenerated from x(T) to cover `extension`.
Trajectory read_states_csv(std::istream& in, const MultiAgentSystem& sys, int horizon, int extension);

}  // namespace atr
