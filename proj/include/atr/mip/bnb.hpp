#pragma once

#include "atr/mip/lp.hpp"
#include "atr/mip/model.hpp"

namespace atr::mip {

struct MipLimits {
    long node_cap = 1'000'000;
    double time_cap = 3600.0;  // seconds
    double rel_gap = 1e-6;
    double int_tol = 1e-6;
};

/// Best-first branch-and-bound over the LP relaxation.
///
/// Nodes are ordered by their parent's LP bound, FIFO among equal bounds;
/// a node's own LP is solved when it is popped. Branching picks the most
/// fractional binary (lowest id on ties). Every incumbent is re-solved with
/// its binaries fixed, so reported points satisfy all rows within 1e-7.
/// Stops with `optimal` once the best open bound is within
/// rel_gap * max(1, |incumbent|) of the incumbent.
SolveResult solve_mip(const MipModel& model, const MipLimits& limits = {});

}  // namespace atr::mip
