#pragma once

#include "atr/mip/model.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <vector>

namespace atr::mip {

enum class Status { optimal, infeasible, unbounded, cap_reached };

const char* to_string(Status s);

struct SolveStats {
    long nodes = 0;
    long lp_iterations = 0;
    double wall_time = 0.0;  // seconds
    double best_bound = -inf;
};

struct SolveResult {
    Status status = Status::infeasible;
    std::vector<double> x;  // empty when no solution is available
    double objective = inf;
    SolveStats stats;

    bool has_solution() const { return !x.empty(); }
};

using Clock = std::chrono::steady_clock;

struct LpOptions {
    double feasibility_tol = 1e-9;  // internal primal tolerance
    double optimality_tol = 1e-9;   // reduced-cost tolerance
    double verify_tol = 1e-7;       // residual accepted on the original rows
    int bland_after = 1000;         // consecutive degenerate pivots before Bland's rule
    std::optional<Clock::time_point> deadline;
};

/// Row/column data of a model prepared once and solved under varying bounds.
class LpRelaxation {
public:
    explicit LpRelaxation(const MipModel& model);

    int num_columns() const { return n_; }
    int num_rows() const { return m_; }
    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }

    /// Solves min c'x over the rows with column bounds [lo, hi]; binaries relaxed.
    /// Throws NumericalError when the basis cannot be recovered.
    SolveResult solve(const std::vector<double>& lo, const std::vector<double>& hi,
                      const LpOptions& options = {}) const;

private:
    friend class DenseSimplex;

    int n_ = 0;
    int m_ = 0;
    std::vector<double> cost_;
    double constant_ = 0.0;
    std::vector<double> lo_, hi_;
    std::vector<double> row_lo_, row_hi_;
    // rows (CSR) and columns (CSC) of the structural matrix
    std::vector<int> row_start_, row_col_;
    std::vector<double> row_val_;
    std::vector<int> col_start_, col_row_;
    std::vector<double> col_val_;
};

class DenseSimplex;

/// Sequence of solves of one relaxation under changing column bounds. Each
/// solve after the first starts from the previous final basis (dual simplex),
/// falling back to a cold start when that basis cannot be recovered.
class LpSession {
public:
    LpSession(const LpRelaxation& lp, LpOptions options = {});
    ~LpSession();
    LpSession(const LpSession&) = delete;
    LpSession& operator=(const LpSession&) = delete;

    SolveResult solve(const std::vector<double>& lo, const std::vector<double>& hi);

    long warm_solves() const { return warm_solves_; }
    long cold_solves() const { return cold_solves_; }

private:
    const LpRelaxation& lp_;
    LpOptions opt_;
    std::unique_ptr<DenseSimplex> simplex_;
    long warm_solves_ = 0;
    long cold_solves_ = 0;
};

/// LP relaxation of the model (binaries relaxed to [0,1]).
SolveResult solve_lp(const MipModel& model, const LpOptions& options = {});

}  // namespace atr::mip
