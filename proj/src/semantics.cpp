#include "atr/semantics.hpp"

#include "atr/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace atr {

namespace {

struct ShiftedSignal {
    const Trajectory& traj;
    const ShiftVector& kappa;

    double literal_value(const Predicate& p, int t) const {
        return p.value([&](VarRef v) {
            if (v.agent < 0 || v.agent >= traj.num_agents() || v.coord < 0 || v.coord >= traj.agent_dim(v.agent))
                throw ValidationError("predicate '" + p.label + "' references x" + std::to_string(v.agent + 1) +
                                      "[" + std::to_string(v.coord) + "], which does not exist");
            return traj.value(v.agent, v.coord, t + kappa[static_cast<std::size_t>(v.agent)]);
        });
    }

    bool holds(const Predicate& p, int t) const { return literal_value(p, t) >= 0.0; }
};

bool eval(const Formula& f, const ShiftedSignal& sig, int t) {
    switch (f.op()) {
        case Op::True: return true;
        case Op::Pred: return sig.holds(f.predicate(), t);
        case Op::Not: return !eval(f.children().front(), sig, t);
        case Op::And:
            return std::all_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return eval(c, sig, t); });
        case Op::Or:
            return std::any_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return eval(c, sig, t); });
        case Op::Always:
            for (int j = f.interval().lo; j <= f.interval().hi; ++j)
                if (!eval(f.children().front(), sig, t + j)) return false;
            return true;
        case Op::Eventually:
            for (int j = f.interval().lo; j <= f.interval().hi; ++j)
                if (eval(f.children().front(), sig, t + j)) return true;
            return false;
        case Op::Until: {
            const Formula& left = f.children()[0];
            const Formula& right = f.children()[1];
            // left must hold on [t, t+j]; track the first instant where it fails
            int left_ok_until = t - 1;
            for (int j = 0; j <= f.interval().hi; ++j) {
                if (left_ok_until == t + j - 1 && eval(left, sig, t + j)) left_ok_until = t + j;
                if (left_ok_until < t + j) return false;
                if (j >= f.interval().lo && eval(right, sig, t + j)) return true;
            }
            return false;
        }
    }
    return false;
}

/// A failing literal explaining why f is false at t, when one can be singled
/// out (conjunction-like nodes); otherwise the node text.
std::pair<std::string, int> blame(const Formula& f, const ShiftedSignal& sig, int t) {
    switch (f.op()) {
        case Op::Pred: return {f.predicate().label, t};
        case Op::Not: return {"!" + f.children().front().predicate().label, t};
        case Op::And:
            for (const auto& c : f.children())
                if (!eval(c, sig, t)) return blame(c, sig, t);
            break;
        case Op::Always:
            for (int j = f.interval().lo; j <= f.interval().hi; ++j)
                if (!eval(f.children().front(), sig, t + j)) return blame(f.children().front(), sig, t + j);
            break;
        default: break;
    }
    return {to_string(f), t};
}

bool satisfied(const Task& task, const Trajectory& traj, const ShiftVector& kappa) {
    if (const auto* c = std::get_if<ConstraintTask>(&task)) return eval_constraint_task(*c, traj, kappa).satisfied;
    return eval_stl(std::get<Formula>(task), traj, kappa, 0);
}

}  // namespace

Verdict eval_constraint_task(const ConstraintTask& task, const Trajectory& traj, const ShiftVector& kappa) {
    if (static_cast<int>(kappa.size()) != traj.num_agents())
        throw ValidationError("shift vector length does not match the number of agents");
    const ShiftedSignal sig{traj, kappa};
    std::optional<Witness> best;
    for (const auto& piece : task.pieces) {
        for (int k : piece.times) {
            if (best && k >= best->k) break;
            for (const auto& member : piece.members) {
                if (!sig.holds(member, k)) {
                    best = Witness{kappa, k, member.label};
                    break;
                }
            }
        }
    }
    return {!best.has_value(), best};
}

bool eval_stl(const Formula& phi, const Trajectory& traj, const ShiftVector& kappa, int at) {
    if (static_cast<int>(kappa.size()) != traj.num_agents())
        throw ValidationError("shift vector length does not match the number of agents");
    return eval(phi, ShiftedSignal{traj, kappa}, at);
}

Verdict robust_check(const Task& task, const Trajectory& traj, ShiftBound bound, std::size_t cap) {
    bound.validate();
    for (const auto& kappa : enumerate_shifts(bound, traj.num_agents(), cap)) {
        if (const auto* c = std::get_if<ConstraintTask>(&task)) {
            Verdict v = eval_constraint_task(*c, traj, kappa);
            if (!v.satisfied) return v;
            continue;
        }
        const Formula& phi = std::get<Formula>(task);
        const ShiftedSignal sig{traj, kappa};
        if (!eval(phi, sig, 0)) {
            auto [label, k] = blame(phi, sig, 0);
            return {false, Witness{kappa, k, label}};
        }
    }
    return {true, std::nullopt};
}

AtrValue atr(const Task& task, const Trajectory& traj, int tau_max) {
    if (tau_max < 0) throw ValidationError("tau_max must be non-negative");
    const int n = traj.num_agents();
    const bool nominal = satisfied(task, traj, ShiftVector(static_cast<std::size_t>(n), 0));
    AtrValue out{0, nominal ? 1 : -1};
    for (int tau = 1; tau <= tau_max; ++tau) {
        for (const auto& kappa : enumerate_shifts({-tau, tau}, n)) {
            // shifts strictly inside [-tau+1, tau-1]^N were checked at smaller radii
            const bool on_ring = std::any_of(kappa.begin(), kappa.end(), [&](int c) { return std::abs(c) == tau; });
            if (on_ring && satisfied(task, traj, kappa) != nominal) return out;
        }
        out.tau = tau;
    }
    return out;
}

ShiftBound atr_sides(const Task& task, const Trajectory& traj, int tau_max) {
    ShiftBound out{0, 0};
    const int n = traj.num_agents();
    if (!satisfied(task, traj, ShiftVector(static_cast<std::size_t>(n), 0))) return out;
    for (int t = 1; t <= tau_max; ++t) {
        if (!robust_check(task, traj, {-t, 0}).satisfied) break;
        out.theta1 = -t;
    }
    for (int t = 1; t <= tau_max; ++t) {
        if (!robust_check(task, traj, {0, t}).satisfied) break;
        out.theta2 = t;
    }
    return out;
}

}  // namespace atr
