#pragma once

// Small systems, tasks and random scenarios shared by the tests and the
// acceptance binary.

#include "atr/expr.hpp"
#include "atr/formula.hpp"
#include "atr/shiftsets.hpp"
#include "atr/system.hpp"

#include <random>
#include <string>
#include <vector>

namespace atr::fixtures {

/// N decoupled scalar integrators x(k+1) = x(k) + u(k).
inline MultiAgentSystem integrators(int n, double box = 2.0, double input = 2.0, std::vector<double> x0 = {}) {
    std::vector<AgentModel> agents;
    for (int i = 0; i < n; ++i)
        agents.push_back({Matrix::identity(1), Matrix::from_rows({{1.0}}), {{-box, box}}, {{-input, input}}});
    if (x0.empty()) x0.assign(static_cast<std::size_t>(n), 0.0);
    return MultiAgentSystem(std::move(agents), std::move(x0));
}

inline Predicate pred(std::string label, std::string_view text) { return {std::move(label), parse_expr(text), {}}; }

inline Formula leaf(std::string label, std::string_view text) { return Formula::pred(pred(std::move(label), text)); }

inline ConstraintTask c1_task() {
    return {{{"c1a", {pred("c1a", "x1 + x2 - 1")}, time_range(5, 10)},
             {"c1b", {pred("c1b", "x1 - x2 - 2")}, time_range(17, 25)}}};
}

/// c2 with its bilinear first piece; counts only.
inline ConstraintTask c2_task() {
    return {{{"c2a", {pred("c2a", "(x1 - x2) * x3 - 1")}, time_range(5, 6)},
             {"c2b", {pred("c2b", "x1 + x2 + x3 - 3")}, time_range(11, 15)}}};
}

inline Formula phi1() { return Formula::always({1, 10}, leaf("p", "1 - (x1 - x2) * (x1 - x2)")); }

inline Formula phi2() {
    return Formula::conj({Formula::always({7, 15}, leaf("q", "x1 - x2 + x3 - 0.5")),
                          Formula::eventually({1, 9}, leaf("r", "0.2 - x1 * (x2 - x3)"))});
}

inline Formula phi3() {
    return Formula::eventually({3, 15}, Formula::always({0, 8}, leaf("s", "x1 + x2 + x3 - 1")));
}

/// Random bounded formula of temporal depth <= 2 over half-plane predicates
/// on N scalar agents, horizon at most `max_horizon`.
class FormulaGen {
public:
    FormulaGen(std::mt19937& rng, int agents, int max_horizon) : rng_(rng), agents_(agents), max_h_(max_horizon) {}

    Formula operator()() { return temporal(2, max_h_); }

private:
    std::mt19937& rng_;
    int agents_;
    int max_h_;
    int next_ = 0;

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Formula atom() {
        const int a = uniform(1, agents_);
        std::string text;
        const int shape = uniform(0, agents_ > 1 ? 2 : 1);
        const double c = uniform(-6, 6) * 0.25;
        if (shape == 0)
            text = "x" + std::to_string(a) + " - " + format_double(c);
        else if (shape == 1)
            text = format_double(c) + " - x" + std::to_string(a);
        else
            text = "x1 + x2 - " + format_double(c);
        Formula f = leaf("p" + std::to_string(next_++), text);
        return uniform(0, 5) == 0 ? Formula::negation(f) : f;
    }

    Formula temporal(int depth, int budget) {
        const int kind = uniform(0, depth > 1 ? 6 : 3);
        auto iv = [&](int room) {
            const int lo = uniform(0, std::max(0, room / 2));
            const int hi = uniform(lo, std::max(lo, room));
            return Interval{lo, hi};
        };
        switch (kind) {
            case 0: {
                const Interval i = iv(budget);
                return Formula::eventually(i, atom());
            }
            case 1: {
                const Interval i = iv(budget);
                return Formula::always(i, atom());
            }
            case 2: {
                const Interval i = iv(budget);
                return Formula::until(i, atom(), atom());
            }
            case 3:
                return Formula::disj({atom(), atom()});
            case 4: {
                const Interval i = iv(budget / 2);
                const Formula inner = temporal(depth - 1, budget - i.hi);
                return uniform(0, 1) ? Formula::eventually(i, inner) : Formula::always(i, inner);
            }
            case 5:
                return Formula::conj({temporal(depth - 1, budget), temporal(depth - 1, budget)});
            default:
                return Formula::disj({temporal(depth - 1, budget), temporal(depth - 1, budget)});
        }
    }
};

/// Random admissible bound with Theta <= max_theta.
inline ShiftBound random_bound(std::mt19937& rng, int max_theta) {
    const int width = std::uniform_int_distribution<int>(1, max_theta)(rng);
    const int lo = -std::uniform_int_distribution<int>(0, width - 1)(rng);
    return {lo, lo + width - 1};
}

}  // namespace atr::fixtures
