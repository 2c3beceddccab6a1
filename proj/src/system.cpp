#include "atr/system.hpp"

#include "atr/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace atr {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows.front().size()) : 0;
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
            throw ValidationError("matrix rows have different lengths");
        for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

std::vector<double> AgentModel::step(std::span<const double> x, std::span<const double> u) const {
    std::vector<double> next(static_cast<std::size_t>(n()), 0.0);
    for (int r = 0; r < n(); ++r) {
        double acc = 0.0;
        for (int c = 0; c < n(); ++c) acc += A(r, c) * x[static_cast<std::size_t>(c)];
        for (int c = 0; c < m(); ++c) acc += B(r, c) * u[static_cast<std::size_t>(c)];
        next[static_cast<std::size_t>(r)] = acc;
    }
    return next;
}

void AgentModel::validate() const {
    if (A.rows < 1 || A.rows != A.cols) throw ValidationError("A must be square and non-empty");
    if (B.rows != A.rows) throw ValidationError("B must have as many rows as A");
    if (static_cast<int>(state_box.size()) != n())
        throw ValidationError("state box has " + std::to_string(state_box.size()) + " entries, expected " +
                              std::to_string(n()));
    if (static_cast<int>(input_box.size()) != m())
        throw ValidationError("input box has " + std::to_string(input_box.size()) + " entries, expected " +
                              std::to_string(m()));
    for (const auto* boxes : {&state_box, &input_box})
        for (const auto& b : *boxes)
            if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
                throw ValidationError("box bounds must be finite with lo <= hi");
}

MultiAgentSystem::MultiAgentSystem(std::vector<AgentModel> agents, std::vector<double> x0)
    : agents_(std::move(agents)), x0_(std::move(x0)) {
    for (const auto& a : agents_) {
        state_offset_.push_back(state_offset_.back() + a.n());
        input_offset_.push_back(input_offset_.back() + a.m());
    }
    validate();
}

void MultiAgentSystem::validate() const {
    if (agents_.empty()) throw ValidationError("system needs at least one agent");
    for (const auto& a : agents_) a.validate();
    if (static_cast<int>(x0_.size()) != state_dim())
        throw ValidationError("x0 has " + std::to_string(x0_.size()) + " entries, expected " +
                              std::to_string(state_dim()));
    for (int i = 0; i < num_agents(); ++i) {
        for (int c = 0; c < agent(i).n(); ++c) {
            const double v = x0_[static_cast<std::size_t>(state_offset(i) + c)];
            const Box& b = agent(i).state_box[static_cast<std::size_t>(c)];
            if (v < b.lo || v > b.hi)
                throw ValidationError("x0 of agent " + std::to_string(i + 1) + " coordinate " +
                                      std::to_string(c) + " lies outside the state box");
        }
    }
}

// ---------------------------------------------------------------------------

std::span<const double> Trajectory::agent_state(int agent, int index) const {
    const auto lo = static_cast<std::size_t>(state_offset[static_cast<std::size_t>(agent)]);
    const auto len = static_cast<std::size_t>(agent_dim(agent));
    const std::vector<double>* row = nullptr;
    if (index <= 0) {
        row = &states.front();
    } else if (index <= horizon) {
        row = &states[static_cast<std::size_t>(index)];
    } else {
        const int e = index - horizon - 1;
        if (e >= static_cast<int>(extension.size()))
            throw ExtensionError("index " + std::to_string(index) + " exceeds horizon " +
                                 std::to_string(horizon) + " plus extension " +
                                 std::to_string(extension.size()));
        row = &extension[static_cast<std::size_t>(e)];
    }
    return std::span<const double>(row->data() + lo, len);
}

namespace {

Trajectory empty_like(const MultiAgentSystem& sys) {
    Trajectory t;
    t.state_offset.push_back(0);
    t.input_offset.push_back(0);
    for (int i = 0; i < sys.num_agents(); ++i) {
        t.state_offset.push_back(sys.state_offset(i) + sys.agent(i).n());
        t.input_offset.push_back(sys.input_offset(i) + sys.agent(i).m());
    }
    return t;
}

std::vector<double> step_all(const MultiAgentSystem& sys, const std::vector<double>& x,
                             const std::vector<double>& u, const StepFunction& step) {
    std::vector<double> next(x.size());
    for (int i = 0; i < sys.num_agents(); ++i) {
        const auto so = static_cast<std::size_t>(sys.state_offset(i));
        const auto io = static_cast<std::size_t>(sys.input_offset(i));
        std::span<const double> xi(x.data() + so, static_cast<std::size_t>(sys.agent(i).n()));
        std::span<const double> ui(u.data() + io, static_cast<std::size_t>(sys.agent(i).m()));
        auto ni = step ? step(i, xi, ui) : sys.agent(i).step(xi, ui);
        if (static_cast<int>(ni.size()) != sys.agent(i).n())
            throw ValidationError("step function returned wrong dimension for agent " + std::to_string(i + 1));
        std::copy(ni.begin(), ni.end(), next.begin() + static_cast<std::ptrdiff_t>(so));
    }
    return next;
}

void check_state_box(const MultiAgentSystem& sys, const std::vector<double>& x, int k, double tol) {
    for (int i = 0; i < sys.num_agents(); ++i) {
        for (int c = 0; c < sys.agent(i).n(); ++c) {
            const double v = x[static_cast<std::size_t>(sys.state_offset(i) + c)];
            const Box& b = sys.agent(i).state_box[static_cast<std::size_t>(c)];
            if (v < b.lo - tol || v > b.hi + tol) {
                std::ostringstream msg;
                msg << "state-box violation at k=" << k << ", agent " << i + 1 << ", coordinate " << c
                    << ": " << v << " not in [" << b.lo << ", " << b.hi << "]";
                throw ValidationError(msg.str());
            }
        }
    }
}

}  // namespace

void extend(Trajectory& traj, const MultiAgentSystem& sys, int length) {
    traj.extension.clear();
    std::vector<double> x = traj.states.back();
    const std::vector<double> zero(static_cast<std::size_t>(sys.input_dim()), 0.0);
    for (int p = 0; p < length; ++p) {
        x = step_all(sys, x, zero, {});
        traj.extension.push_back(x);
    }
}

Trajectory simulate(const MultiAgentSystem& sys, const std::vector<std::vector<double>>& inputs,
                    int extension, const StepFunction& step, double box_tol) {
    if (extension < 0) throw ValidationError("extension length must be non-negative");
    Trajectory t = empty_like(sys);
    t.horizon = static_cast<int>(inputs.size());
    t.inputs = inputs;
    t.states.push_back(sys.x0());
    for (int k = 0; k < t.horizon; ++k) {
        const auto& u = inputs[static_cast<std::size_t>(k)];
        if (static_cast<int>(u.size()) != sys.input_dim())
            throw ValidationError("input at k=" + std::to_string(k) + " has dimension " +
                                  std::to_string(u.size()) + ", expected " + std::to_string(sys.input_dim()));
        for (int i = 0; i < sys.num_agents(); ++i)
            for (int c = 0; c < sys.agent(i).m(); ++c) {
                const double v = u[static_cast<std::size_t>(sys.input_offset(i) + c)];
                const Box& b = sys.agent(i).input_box[static_cast<std::size_t>(c)];
                if (v < b.lo - box_tol || v > b.hi + box_tol)
                    throw ValidationError("input-box violation at k=" + std::to_string(k) + ", agent " +
                                          std::to_string(i + 1) + ", coordinate " + std::to_string(c));
            }
        auto next = step_all(sys, t.states.back(), u, step);
        check_state_box(sys, next, k + 1, box_tol);
        t.states.push_back(std::move(next));
    }
    std::vector<double> x = t.states.back();
    const std::vector<double> zero(static_cast<std::size_t>(sys.input_dim()), 0.0);
    for (int p = 0; p < extension; ++p) {
        x = step_all(sys, x, zero, step);
        t.extension.push_back(x);
    }
    return t;
}

Trajectory from_states(const MultiAgentSystem& sys, std::vector<std::vector<double>> states,
                       std::vector<std::vector<double>> inputs, int extension) {
    if (states.empty()) throw ValidationError("trajectory needs at least one state");
    for (const auto& s : states)
        if (static_cast<int>(s.size()) != sys.state_dim())
            throw ValidationError("state dimension mismatch");
    Trajectory t = empty_like(sys);
    t.horizon = static_cast<int>(states.size()) - 1;
    t.states = std::move(states);
    t.inputs = std::move(inputs);
    extend(t, sys, extension);
    return t;
}

std::vector<double> shifted_state(const Trajectory& traj, int k, const ShiftVector& kappa) {
    if (static_cast<int>(kappa.size()) != traj.num_agents())
        throw ValidationError("shift vector length does not match the number of agents");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(traj.state_offset.back()));
    for (int i = 0; i < traj.num_agents(); ++i) {
        auto s = traj.agent_state(i, k + kappa[static_cast<std::size_t>(i)]);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

void write_rows(std::ostream& out, int k0, const std::vector<std::vector<double>>& rows,
                const std::vector<int>& offsets) {
    const int agents = static_cast<int>(offsets.size()) - 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < agents; ++i) {
            const int lo = offsets[static_cast<std::size_t>(i)];
            const int hi = offsets[static_cast<std::size_t>(i) + 1];
            for (int c = lo; c < hi; ++c) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", rows[r][static_cast<std::size_t>(c)]);
                out << k0 + static_cast<int>(r) << ',' << i + 1 << ',' << c - lo << ',' << buf << '\n';
            }
        }
    }
}

}  // namespace

void write_states_csv(std::ostream& out, const Trajectory& traj) {
    out << "k,agent,coord,value\n";
    write_rows(out, 0, traj.states, traj.state_offset);
    write_rows(out, traj.horizon + 1, traj.extension, traj.state_offset);
}

void write_inputs_csv(std::ostream& out, const Trajectory& traj) {
    out << "k,agent,coord,value\n";
    write_rows(out, 0, traj.inputs, traj.input_offset);
}

Trajectory read_states_csv(std::istream& in, const MultiAgentSystem& sys, int horizon, int extension) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty trajectory file");
    if (line.rfind("k,agent,coord,value", 0) != 0)
        throw ValidationError("trajectory file must start with header 'k,agent,coord,value'");
    std::map<std::tuple<int, int, int>, double> cells;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        int k = 0, agent = 0, coord = 0;
        double v = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(ls >> k >> c1 >> agent >> c2 >> coord >> c3 >> v) || c1 != ',' || c2 != ',' || c3 != ',')
            throw ValidationError("malformed trajectory row at line " + std::to_string(lineno));
        if (agent < 1 || agent > sys.num_agents() || coord < 0 || coord >= sys.agent(agent - 1).n())
            throw ValidationError("trajectory row at line " + std::to_string(lineno) +
                                  " references an unknown agent/coordinate");
        cells[{k, agent - 1, coord}] = v;
    }
    std::vector<std::vector<double>> states;
    for (int k = 0; k <= horizon; ++k) {
        std::vector<double> x(static_cast<std::size_t>(sys.state_dim()));
        for (int i = 0; i < sys.num_agents(); ++i)
            for (int c = 0; c < sys.agent(i).n(); ++c) {
                auto it = cells.find({k, i, c});
                if (it == cells.end())
                    throw ValidationError("trajectory file is missing k=" + std::to_string(k) + ", agent " +
                                          std::to_string(i + 1) + ", coordinate " + std::to_string(c));
                x[static_cast<std::size_t>(sys.state_offset(i) + c)] = it->second;
            }
        states.push_back(std::move(x));
    }
    return from_states(sys, std::move(states), {}, extension);
}

}  // namespace atr
