#pragma once

#include "atr/formula.hpp"
#include "atr/shiftsets.hpp"
#include "atr/system.hpp"

#include <optional>
#include <string>
#include <variant>

namespace atr {

/// Brute-force ground truth. Everything here enumerates shifts and instants
/// directly on a stored trajectory; nothing is shared with the encoder.

struct Witness {
    ShiftVector kappa;
    int k = 0;
    std::string predicate;  // failing member label, or failing literal of the formula
};

struct Verdict {
    bool satisfied = true;
    std::optional<Witness> witness;

    int sign() const { return satisfied ? 1 : -1; }
};

/// theta(x) = sign * tau, tau the largest symmetric shift radius that keeps the verdict.
struct AtrValue {
    int tau = 0;
    int sign = 1;

    int value() const { return sign * tau; }
};

using Task = std::variant<ConstraintTask, Formula>;

/// beta^c on the shifted trajectory; the witness (smallest failing k, then
/// piece and member order) is filled in when it is violated.
Verdict eval_constraint_task(const ConstraintTask& task, const Trajectory& traj, const ShiftVector& kappa);

/// Bounded discrete-time STL satisfaction at instant `at` of the shifted signal.
/// Until is inclusive: exists j in [a,b] with right at at+j and left on [at, at+j].
bool eval_stl(const Formula& phi, const Trajectory& traj, const ShiftVector& kappa, int at);

/// Satisfaction under every shift vector in bound^N. The witness is the
/// lexicographically first failing shift vector.
Verdict robust_check(const Task& task, const Trajectory& traj, ShiftBound bound, std::size_t cap = shift_cap());

/// Asynchronous temporal robustness with search radius capped at tau_max.
/// The trajectory extension must cover tau_max.
AtrValue atr(const Task& task, const Trajectory& traj, int tau_max);

/// Largest one-sided bounds [theta1, 0] and [0, theta2] (searched
/// independently, each capped at tau_max) that preserve satisfaction.
/// Both are zero when the trajectory violates the task.
ShiftBound atr_sides(const Task& task, const Trajectory& traj, int tau_max);

}  // namespace atr
