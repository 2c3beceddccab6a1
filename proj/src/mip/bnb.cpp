#include "atr/mip/bnb.hpp"

#include "atr/errors.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <utility>

namespace atr::mip {

namespace {

struct Node {
    double bound = -inf;
    long seq = 0;
    std::vector<std::pair<int, double>> fixings;  // binary id -> 0 or 1
};

struct Later {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.seq > b.seq;
    }
};

double gap_tolerance(double incumbent, double rel_gap) { return rel_gap * std::max(1.0, std::fabs(incumbent)); }

}  // namespace

SolveResult solve_mip(const MipModel& model, const MipLimits& limits) {
    const auto start = Clock::now();
    const LpRelaxation lp(model);
    LpOptions lp_opt;
    lp_opt.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limits.time_cap));
    LpSession session(lp, lp_opt);

    std::vector<int> binaries;
    for (int j = 0; j < model.num_variables(); ++j)
        if (model.variable(j).kind == VarKind::binary) binaries.push_back(j);

    SolveResult out;
    SolveStats& stats = out.stats;
    double root_bound = -inf;
    bool capped = false;

    auto cutoff = [&] { return out.has_solution() ? out.objective - gap_tolerance(out.objective, limits.rel_gap) : inf; };
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    // Re-solves with the binaries of x fixed to their rounded values.
    auto polish = [&](const std::vector<double>& x) {
        std::vector<double> lo = lp.lower(), hi = lp.upper();
        for (int b : binaries) lo[b] = hi[b] = std::round(x[static_cast<std::size_t>(b)]);
        SolveResult r = session.solve(lo, hi);
        stats.lp_iterations += r.stats.lp_iterations;
        if (r.status == Status::cap_reached) capped = true;
        if (r.status != Status::optimal) return;
        for (int b : binaries) r.x[static_cast<std::size_t>(b)] = lo[b];
        if (model.max_violation(r.x) > 1e-7) return;
        if (r.objective < out.objective) {
            if (std::isfinite(root_bound) && r.objective < root_bound - gap_tolerance(root_bound, 1e-6))
                throw NumericalError("incumbent objective " + std::to_string(r.objective) +
                                     " lies below the root relaxation bound " + std::to_string(root_bound));
            out.objective = r.objective;
            out.x = std::move(r.x);
        }
    };

    std::priority_queue<Node, std::vector<Node>, Later> open;
    open.push(Node{});
    long seq = 1;
    double open_bound = -inf;

    while (!open.empty()) {
        if (open.top().bound >= cutoff()) {
            open = {};
            break;
        }
        if (stats.nodes >= limits.node_cap || elapsed() > limits.time_cap) {
            capped = true;
            break;
        }
        Node node = open.top();
        open.pop();
        ++stats.nodes;

        std::vector<double> lo = lp.lower(), hi = lp.upper();
        for (const auto& [b, v] : node.fixings) lo[b] = hi[b] = v;
        SolveResult r = session.solve(lo, hi);
        stats.lp_iterations += r.stats.lp_iterations;
        if (r.status == Status::cap_reached) {
            capped = true;
            open.push(std::move(node));
            break;
        }
        if (r.status == Status::unbounded) {
            out.status = Status::unbounded;
            out.x.clear();
            stats.wall_time = elapsed();
            return out;
        }
        if (r.status == Status::infeasible) continue;

        if (node.fixings.empty()) root_bound = r.objective;
        if (std::isfinite(node.bound) && r.objective < node.bound - gap_tolerance(node.bound, 1e-6))
            throw NumericalError("node relaxation " + std::to_string(r.objective) + " is below its parent bound " +
                                 std::to_string(node.bound));
        if (r.objective >= cutoff()) continue;

        int branch = -1;
        double best_frac = limits.int_tol;
        for (int b : binaries) {
            const double v = r.x[static_cast<std::size_t>(b)];
            const double frac = std::fabs(v - std::round(v));
            if (frac > best_frac) {
                best_frac = frac;
                branch = b;
            }
        }
        if (branch < 0) {
            polish(r.x);
            continue;
        }
        if (node.fixings.empty()) polish(r.x);

        const double v = r.x[static_cast<std::size_t>(branch)];
        const double first = v >= 0.5 ? 1.0 : 0.0;
        for (double value : {first, 1.0 - first}) {
            Node child{r.objective, seq++, node.fixings};
            child.fixings.emplace_back(branch, value);
            open.push(std::move(child));
        }
    }

    open_bound = open.empty() ? out.objective : open.top().bound;
    stats.best_bound = out.has_solution() ? std::min(open_bound, out.objective) : open_bound;
    stats.wall_time = elapsed();
    if (capped)
        out.status = Status::cap_reached;
    else
        out.status = out.has_solution() ? Status::optimal : Status::infeasible;
    return out;
}

}  // namespace atr::mip
