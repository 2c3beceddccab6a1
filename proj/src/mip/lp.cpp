#include "atr/mip/lp.hpp"

#include "atr/errors.hpp"
#include "atr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

namespace atr::mip {

const char* to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        default: return "cap_reached";
    }
}

LpRelaxation::LpRelaxation(const MipModel& model) {
    model.validate();
    if (!model.objective().quadratic.empty())
        throw ValidationError("quadratic objectives are export-only; the built-in solver needs a linear objective");
    n_ = model.num_variables();
    m_ = model.num_constraints();
    cost_ = model.objective().linear;
    constant_ = model.objective().constant;
    for (const auto& v : model.variables()) {
        lo_.push_back(v.lo);
        hi_.push_back(v.hi);
    }
    row_start_.push_back(0);
    std::vector<int> col_count(static_cast<std::size_t>(n_), 0);
    for (const auto& r : model.constraints()) {
        row_lo_.push_back(r.rel == Relation::le ? -inf : r.rhs);
        row_hi_.push_back(r.rel == Relation::ge ? inf : r.rhs);
        for (const auto& t : r.terms) {
            row_col_.push_back(t.var);
            row_val_.push_back(t.coef);
            ++col_count[static_cast<std::size_t>(t.var)];
        }
        row_start_.push_back(static_cast<int>(row_col_.size()));
    }
    col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + col_count[j];
    col_row_.resize(row_col_.size());
    col_val_.resize(row_col_.size());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i)
        for (int p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            const int at = fill[row_col_[p]]++;
            col_row_[at] = i;
            col_val_[at] = row_val_[p];
        }
}

namespace {
enum class VarState : std::uint8_t { basic, lower, upper, zero };
constexpr double pivot_tol = 1e-9;
constexpr double degenerate_step = 1e-12;
}  // namespace

// Columns: structurals [0,n), row activities s_i [n, n+m), artificials after.
// Row i reads  a_i x - s_i + sigma_i art_i = 0, with s_i bounded by the row's
// relation. The full tableau B^-1 [A | -I | art] is kept dense.
class DenseSimplex {
public:
    DenseSimplex(const LpRelaxation& lp, const std::vector<double>& lo, const std::vector<double>& hi,
                 const LpOptions& opt)
        : lp_(lp), opt_(opt), n_(lp.n_), m_(lp.m_) {
        lo_ = lo;
        hi_ = hi;
        lo_.insert(lo_.end(), lp.row_lo_.begin(), lp.row_lo_.end());
        hi_.insert(hi_.end(), lp.row_hi_.begin(), lp.row_hi_.end());
    }

    SolveResult run() {
        SolveResult out;
        for (int j = 0; j < n_; ++j)
            if (lo_[j] > hi_[j]) return out;  // infeasible bounds
        initial_basis();

        if (na_ > 0) {
            cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
            for (int k = 0; k < na_; ++k) cost_[static_cast<std::size_t>(n_ + m_ + k)] = 1.0;
            compute_reduced_costs();
            const Outcome o = iterate(true);
            if (o == Outcome::deadline) return finish(Status::cap_reached);
            double infeas = 0.0;
            for (int k = 0; k < na_; ++k) infeas += std::max(0.0, val_[static_cast<std::size_t>(n_ + m_ + k)]);
            if (infeas > opt_.verify_tol) return finish(Status::infeasible);
            for (int k = 0; k < na_; ++k) {
                const auto j = static_cast<std::size_t>(n_ + m_ + k);
                hi_[j] = 0.0;
                if (state_[j] != VarState::basic) {
                    val_[j] = 0.0;
                    state_[j] = VarState::lower;
                }
            }
        }

        cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
        std::copy(lp_.cost_.begin(), lp_.cost_.end(), cost_.begin());
        compute_reduced_costs();
        warm_ = true;
        return phase2();
    }

    /// Re-solves under new structural bounds starting from the current basis.
    /// Changed nonbasic columns move to the bound their reduced cost prefers,
    /// which keeps the basis dual feasible; the bounded dual simplex then
    /// restores primal feasibility. Throws NumericalError when it cannot.
    SolveResult resolve(const std::vector<double>& lo, const std::vector<double>& hi) {
        iters_ = 0;
        bland_ = false;
        degenerate_run_ = 0;
        for (int j = 0; j < n_; ++j)
            if (lo[j] > hi[j]) return finish(Status::infeasible);
        for (int j = 0; j < n_; ++j) {
            if (lo[j] == lo_[j] && hi[j] == hi_[j]) continue;
            lo_[j] = lo[j];
            hi_[j] = hi[j];
            if (state_[j] == VarState::basic) continue;
            double target;
            if (lo_[j] == hi_[j] || d_[j] > 0.0 || (d_[j] == 0.0 && val_[j] <= lo_[j])) {
                target = lo_[j];
                state_[j] = VarState::lower;
            } else {
                target = hi_[j];
                state_[j] = VarState::upper;
            }
            if (!std::isfinite(target)) throw NumericalError("warm start needs a finite bound on column " + std::to_string(j));
            move_nonbasic(j, target - val_[j]);
        }
        const Outcome o = dual_iterate();
        if (o == Outcome::deadline) return finish(Status::cap_reached);
        if (o == Outcome::infeasible) return finish(Status::infeasible);
        return phase2();
    }

    bool warm() const { return warm_; }

private:
    enum class Outcome { optimal, unbounded, infeasible, deadline };

    const LpRelaxation& lp_;
    const LpOptions& opt_;
    int n_, m_;
    int na_ = 0;
    int ncols_ = 0;
    std::vector<double> lo_, hi_, val_, cost_, d_;
    std::vector<VarState> state_;
    std::vector<int> head_;
    std::vector<int> art_of_row_;  // artificial column or -1
    std::vector<double> sigma_;    // per row, sign of its artificial
    std::vector<double> tab_;
    long iters_ = 0;
    long since_refactor_ = 0;
    bool bland_ = false;
    int degenerate_run_ = 0;
    bool warm_ = false;  // tableau holds a phase-2 basis

    SolveResult phase2() {
        for (int round = 0;; ++round) {
            const Outcome o = iterate(false);
            if (o == Outcome::deadline) return finish(Status::cap_reached);
            if (o == Outcome::unbounded) return finish(Status::unbounded);
            if (residual() <= opt_.verify_tol * 1e-2 && bound_violation() <= opt_.verify_tol) break;
            refactor();
            if (bound_violation() > opt_.verify_tol) {
                // refactorization exposed infeasibility hidden by drift
                const Outcome d = dual_iterate();
                if (d == Outcome::deadline) return finish(Status::cap_reached);
                if (d == Outcome::infeasible) return finish(Status::infeasible);
            }
            if (round >= 3)
                throw NumericalError("simplex lost primal feasibility after refactorization (" +
                                     std::to_string(iters_) + " pivots, residual " +
                                     std::to_string(residual()) + ")");
        }
        return finish(Status::optimal);
    }

    void move_nonbasic(int j, double delta) {
        if (delta == 0.0) return;
        for (int i = 0; i < m_; ++i) {
            const double a = row(i)[j];
            if (a != 0.0) val_[head_[i]] -= a * delta;
        }
        val_[j] += delta;
    }

    /// Bounded dual simplex: the most infeasible basic variable leaves at its
    /// violated bound; Harris ratio test over the dual slacks of its row.
    Outcome dual_iterate() {
        const long max_iters = iters_ + 200000 + 100L * (n_ + m_);
        const long refactor_every = std::max(100, m_);
        for (;;) {
            if (opt_.deadline && (iters_ & 31) == 0 && Clock::now() > *opt_.deadline) return Outcome::deadline;
            if (iters_ > max_iters)
                throw NumericalError("dual simplex iteration limit reached after " + std::to_string(iters_) + " pivots");
            int r = -1;
            double worst = opt_.feasibility_tol;
            for (int i = 0; i < m_; ++i) {
                const int b = head_[i];
                const double v = std::max(lo_[b] - val_[b], val_[b] - hi_[b]);
                if (v > worst) {
                    worst = v;
                    r = i;
                }
            }
            if (r < 0) return Outcome::optimal;
            const int b = head_[r];
            const bool up = val_[b] < lo_[b];
            const double* t = row(r);
            // x_b moves by -t_j dx_j; dir is the move of column j that helps
            auto direction = [&](int j) {
                const double a = t[j];
                if (std::fabs(a) <= pivot_tol || state_[j] == VarState::basic || !(hi_[j] > lo_[j])) return 0;
                const int dir = (up == (a < 0.0)) ? 1 : -1;
                if (dir > 0 && state_[j] == VarState::upper) return 0;
                if (dir < 0 && state_[j] == VarState::lower) return 0;
                return dir;
            };
            double tmax = inf;
            for (int j = 0; j < ncols_; ++j) {
                const int dir = direction(j);
                if (dir == 0) continue;
                tmax = std::min(tmax, (std::max(0.0, d_[j] * dir) + opt_.optimality_tol) / std::fabs(t[j]));
            }
            if (!std::isfinite(tmax)) return Outcome::infeasible;
            int q = -1;
            double best = 0.0;
            for (int j = 0; j < ncols_; ++j) {
                const int dir = direction(j);
                if (dir == 0) continue;
                const double a = std::fabs(t[j]);
                if (std::max(0.0, d_[j] * dir) / a <= tmax && a > best) {
                    best = a;
                    q = j;
                }
            }
            const double target = up ? lo_[b] : hi_[b];
            move_nonbasic(q, -(target - val_[b]) / t[q]);
            val_[b] = target;
            state_[b] = (up || lo_[b] == hi_[b]) ? VarState::lower : VarState::upper;
            head_[r] = q;
            state_[q] = VarState::basic;
            ++iters_;
            pivot(r, q);
            if (++since_refactor_ >= refactor_every) refactor();
        }
    }

    double* row(int i) { return tab_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_); }
    std::span<double> row_span(int i) { return {row(i), static_cast<std::size_t>(ncols_)}; }

    SolveResult finish(Status status) const {
        SolveResult out;
        out.status = status;
        out.stats.lp_iterations = iters_;
        if (status == Status::optimal) {
            out.x.assign(val_.begin(), val_.begin() + n_);
            double obj = lp_.constant_;
            for (int j = 0; j < n_; ++j) obj += lp_.cost_[j] * out.x[j];
            out.objective = obj;
            out.stats.best_bound = obj;
        }
        return out;
    }

    void initial_basis() {
        val_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
        state_.assign(static_cast<std::size_t>(n_ + m_), VarState::lower);
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lo_[j])) {
                val_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                val_[j] = hi_[j];
                state_[j] = VarState::upper;
            } else {
                state_[j] = VarState::zero;
            }
        }
        std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
        art_of_row_.assign(static_cast<std::size_t>(m_), -1);
        sigma_.assign(static_cast<std::size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            double r = 0.0;
            for (int p = lp_.row_start_[i]; p < lp_.row_start_[i + 1]; ++p) r += lp_.row_val_[p] * val_[lp_.row_col_[p]];
            activity[i] = r;
            const int s = n_ + i;
            if (r < lo_[s] || r > hi_[s]) art_of_row_[i] = n_ + m_ + na_++;
        }
        ncols_ = n_ + m_ + na_;
        lo_.resize(static_cast<std::size_t>(ncols_), 0.0);
        hi_.resize(static_cast<std::size_t>(ncols_), inf);
        val_.resize(static_cast<std::size_t>(ncols_), 0.0);
        state_.resize(static_cast<std::size_t>(ncols_), VarState::lower);
        head_.assign(static_cast<std::size_t>(m_), -1);
        tab_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(ncols_), 0.0);

        for (int i = 0; i < m_; ++i) {
            const int s = n_ + i;
            double* t = row(i);
            const int a = art_of_row_[i];
            if (a < 0) {
                head_[i] = s;
                state_[s] = VarState::basic;
                val_[s] = activity[i];
                for (int p = lp_.row_start_[i]; p < lp_.row_start_[i + 1]; ++p) t[lp_.row_col_[p]] = -lp_.row_val_[p];
                t[s] = 1.0;
                continue;
            }
            const double v = activity[i] > hi_[s] ? hi_[s] : lo_[s];
            val_[s] = v;
            state_[s] = (v == hi_[s] && v != lo_[s]) ? VarState::upper : VarState::lower;
            const double sg = v > activity[i] ? 1.0 : -1.0;
            sigma_[i] = sg;
            head_[i] = a;
            state_[a] = VarState::basic;
            val_[a] = std::fabs(v - activity[i]);
            for (int p = lp_.row_start_[i]; p < lp_.row_start_[i + 1]; ++p) t[lp_.row_col_[p]] = sg * lp_.row_val_[p];
            t[s] = -sg;
            t[a] = 1.0;
        }
    }

    void compute_reduced_costs() {
        d_ = cost_;
        for (int i = 0; i < m_; ++i) {
            const double cb = cost_[head_[i]];
            if (cb != 0.0) kernels::axpy(d_, -cb, row_span(i));
        }
        for (int i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
    }

    bool eligible(int j, double& score, int& dir) const {
        const VarState st = state_[j];
        if (st == VarState::basic || !(hi_[j] > lo_[j])) return false;
        const double dj = d_[j];
        if (st != VarState::upper && dj < -opt_.optimality_tol) {
            score = -dj;
            dir = 1;
            return true;
        }
        if (st != VarState::lower && dj > opt_.optimality_tol) {
            score = dj;
            dir = -1;
            return true;
        }
        return false;
    }

    int price(int& dir) const {
        int best = -1;
        double best_score = 0.0;
        for (int j = 0; j < ncols_; ++j) {
            double score;
            int dj;
            if (!eligible(j, score, dj)) continue;
            if (bland_) {
                dir = dj;
                return j;
            }
            if (score > best_score) {
                best_score = score;
                best = j;
                dir = dj;
            }
        }
        return best;
    }

    /// Step limit of basic row i when the entering column moves with rate a (> 0 decreases it).
    double row_limit(int i, double a, double slack) const {
        const int b = head_[i];
        if (a > 0.0) return std::isfinite(lo_[b]) ? (val_[b] - lo_[b] + slack) / a : inf;
        return std::isfinite(hi_[b]) ? (hi_[b] - val_[b] + slack) / -a : inf;
    }

    /// Leaving row, or -1 for a bound flip of the entering column, -2 when unbounded.
    int ratio_test(int q, int dir, double& step) {
        const double range = hi_[q] - lo_[q];
        if (bland_) {
            double tmin = inf;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                const double a = row(i)[q] * dir;
                if (std::fabs(a) <= pivot_tol) continue;
                const double t = std::max(0.0, row_limit(i, a, 0.0));
                if (t < tmin - degenerate_step || (t <= tmin + degenerate_step && r >= 0 && head_[i] < head_[r])) {
                    if (t < tmin) tmin = t;
                    r = i;
                }
            }
            if (range <= tmin) {
                step = range;
                return -1;
            }
            if (r < 0) return -2;
            step = tmin;
            return r;
        }
        // Harris two-pass: relaxed bound first, then the largest pivot within it
        double tmax = inf;
        for (int i = 0; i < m_; ++i) {
            const double a = row(i)[q] * dir;
            if (std::fabs(a) <= pivot_tol) continue;
            tmax = std::min(tmax, row_limit(i, a, opt_.feasibility_tol));
        }
        if (range <= tmax) {
            if (!std::isfinite(range)) return -2;
            step = range;
            return -1;
        }
        int r = -1;
        double best = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = row(i)[q] * dir;
            if (std::fabs(a) <= pivot_tol) continue;
            if (row_limit(i, a, 0.0) <= tmax && std::fabs(a) > best) {
                best = std::fabs(a);
                r = i;
            }
        }
        step = std::max(0.0, row_limit(r, row(r)[q] * dir, 0.0));
        return r;
    }

    void pivot(int r, int q) {
        double* pr = row(r);
        kernels::scale(row_span(r), 1.0 / pr[q]);
        pr[q] = 1.0;
        const std::span<const double> prs(pr, static_cast<std::size_t>(ncols_));
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            const double a = ri[q];
            if (a == 0.0) continue;
            kernels::axpy(row_span(i), -a, prs);
            ri[q] = 0.0;
        }
        const double dq = d_[q];
        if (dq != 0.0) kernels::axpy(d_, -dq, prs);
        d_[q] = 0.0;
    }

    Outcome iterate(bool phase1) {
        const long max_iters = 200000 + 100L * (n_ + m_);
        const long refactor_every = std::max(100, m_);
        for (;;) {
            if (opt_.deadline && (iters_ & 31) == 0 && Clock::now() > *opt_.deadline) return Outcome::deadline;
            if (iters_ > max_iters)
                throw NumericalError("simplex iteration limit reached after " + std::to_string(iters_) + " pivots");
            int dir = 0;
            const int q = price(dir);
            if (q < 0) return Outcome::optimal;
            double step = 0.0;
            const int r = ratio_test(q, dir, step);
            if (r == -2) return Outcome::unbounded;
            ++iters_;
            degenerate_run_ = step <= degenerate_step ? degenerate_run_ + 1 : 0;
            if (degenerate_run_ >= opt_.bland_after) bland_ = true;

            const double delta = dir * step;
            if (delta != 0.0) {
                for (int i = 0; i < m_; ++i) {
                    const double a = row(i)[q];
                    if (a != 0.0) val_[head_[i]] -= a * delta;
                }
                val_[q] += delta;
            }
            if (r == -1) {
                state_[q] = dir > 0 ? VarState::upper : VarState::lower;
                val_[q] = dir > 0 ? hi_[q] : lo_[q];
                continue;
            }
            const int b = head_[r];
            const bool to_lower = row(r)[q] * dir > 0.0;
            state_[b] = to_lower ? VarState::lower : VarState::upper;
            val_[b] = to_lower ? lo_[b] : hi_[b];
            if (lo_[b] == hi_[b]) state_[b] = VarState::lower;
            if (phase1 && b >= n_ + m_) hi_[b] = 0.0, val_[b] = 0.0, state_[b] = VarState::lower;
            head_[r] = q;
            state_[q] = VarState::basic;
            pivot(r, q);
            if (++since_refactor_ >= refactor_every) refactor();
        }
    }

    /// Dense row i of the extended matrix [A | -I | art] added into out with weight w.
    void add_row(int i, double w, double* out) const {
        for (int p = lp_.row_start_[i]; p < lp_.row_start_[i + 1]; ++p) out[lp_.row_col_[p]] += w * lp_.row_val_[p];
        out[n_ + i] -= w;
        if (art_of_row_[i] >= 0) out[art_of_row_[i]] += w * sigma_[i];
    }

    void column(int j, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (j < n_) {
            for (int p = lp_.col_start_[j]; p < lp_.col_start_[j + 1]; ++p) out[lp_.col_row_[p]] = lp_.col_val_[p];
        } else if (j < n_ + m_) {
            out[j - n_] = -1.0;
        } else {
            for (int i = 0; i < m_; ++i)
                if (art_of_row_[i] == j) out[i] = sigma_[i];
        }
    }

    /// Rebuilds the tableau, basic values and reduced costs from the original data.
    void refactor() {
        since_refactor_ = 0;
        const auto mm = static_cast<std::size_t>(m_);
        // Gauss-Jordan on [B | I]
        std::vector<double> B(mm * mm), inv(mm * mm, 0.0), col(mm);
        for (int r = 0; r < m_; ++r) {
            column(head_[r], col);
            for (std::size_t i = 0; i < mm; ++i) B[i * mm + r] = col[i];
            inv[r * mm + r] = 1.0;
        }
        for (std::size_t c = 0; c < mm; ++c) {
            std::size_t p = c;
            for (std::size_t i = c + 1; i < mm; ++i)
                if (std::fabs(B[i * mm + c]) > std::fabs(B[p * mm + c])) p = i;
            if (std::fabs(B[p * mm + c]) < 1e-11)
                throw NumericalError("singular basis during refactorization (column " + std::to_string(c) + ", " +
                                     std::to_string(iters_) + " pivots)");
            if (p != c) {
                std::swap_ranges(B.begin() + p * mm, B.begin() + (p + 1) * mm, B.begin() + c * mm);
                std::swap_ranges(inv.begin() + p * mm, inv.begin() + (p + 1) * mm, inv.begin() + c * mm);
            }
            const double s = 1.0 / B[c * mm + c];
            kernels::scale({B.data() + c * mm, mm}, s);
            kernels::scale({inv.data() + c * mm, mm}, s);
            for (std::size_t i = 0; i < mm; ++i) {
                if (i == c) continue;
                const double f = B[i * mm + c];
                if (f == 0.0) continue;
                kernels::axpy({B.data() + i * mm, mm}, -f, {B.data() + c * mm, mm});
                kernels::axpy({inv.data() + i * mm, mm}, -f, {inv.data() + c * mm, mm});
            }
        }
        // tableau = B^-1 [A | -I | art]
        std::fill(tab_.begin(), tab_.end(), 0.0);
        for (int r = 0; r < m_; ++r) {
            double* t = row(r);
            for (int i = 0; i < m_; ++i) {
                const double w = inv[static_cast<std::size_t>(r) * mm + i];
                if (w != 0.0) add_row(i, w, t);
            }
        }
        for (int r = 0; r < m_; ++r) {
            double* t = row(r);
            for (int i = 0; i < m_; ++i) t[head_[i]] = i == r ? 1.0 : 0.0;
        }
        // x_B = -B^-1 N x_N
        std::vector<double> rhs(mm, 0.0);
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == VarState::basic || val_[j] == 0.0) continue;
            column(j, col);
            for (std::size_t i = 0; i < mm; ++i) rhs[i] += col[i] * val_[j];
        }
        for (int r = 0; r < m_; ++r) {
            double v = 0.0;
            for (std::size_t i = 0; i < mm; ++i) v -= inv[r * mm + i] * rhs[i];
            val_[head_[r]] = v;
        }
        compute_reduced_costs();
    }

    double residual() const {
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            double r = -val_[n_ + i];
            for (int p = lp_.row_start_[i]; p < lp_.row_start_[i + 1]; ++p) r += lp_.row_val_[p] * val_[lp_.row_col_[p]];
            if (art_of_row_[i] >= 0) r += sigma_[i] * val_[art_of_row_[i]];
            worst = std::max(worst, std::fabs(r));
        }
        return worst;
    }

    double bound_violation() const {
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int b = head_[i];
            worst = std::max({worst, lo_[b] - val_[b], val_[b] - hi_[b]});
        }
        return worst;
    }
};

SolveResult LpRelaxation::solve(const std::vector<double>& lo, const std::vector<double>& hi,
                                const LpOptions& options) const {
    DenseSimplex s(*this, lo, hi, options);
    return s.run();
}

LpSession::LpSession(const LpRelaxation& lp, LpOptions options) : lp_(lp), opt_(std::move(options)) {}
LpSession::~LpSession() = default;

SolveResult LpSession::solve(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (simplex_ && simplex_->warm()) {
        try {
            SolveResult r = simplex_->resolve(lo, hi);
            ++warm_solves_;
            return r;
        } catch (const NumericalError&) {
            simplex_.reset();
        }
    }
    simplex_ = std::make_unique<DenseSimplex>(lp_, lo, hi, opt_);
    ++cold_solves_;
    return simplex_->run();
}

SolveResult solve_lp(const MipModel& model, const LpOptions& options) {
    const auto start = Clock::now();
    const LpRelaxation lp(model);
    SolveResult res = lp.solve(lp.lower(), lp.upper(), options);
    res.stats.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

}  // namespace atr::mip
