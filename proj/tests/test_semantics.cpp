#include "atr/errors.hpp"
#include "atr/semantics.hpp"
#include "support/builders.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

using namespace atr;
using fixtures::leaf;
using fixtures::pred;

namespace {

/// Scalar single-agent trajectory with the given states (inputs implied).
Trajectory scalar(std::vector<double> xs, int extension = 4) {
    std::vector<std::vector<double>> states;
    for (double x : xs) states.push_back({x});
    return from_states(fixtures::integrators(1, 100.0, 100.0, {xs.front()}), states, {}, extension);
}

/// Two planar agents with states read straight from `positions`.
struct Plan2 {
    MultiAgentSystem sys;
    Trajectory traj;
};

Plan2 two_agents(const std::vector<std::array<double, 4>>& positions) {
    AgentModel a{Matrix::identity(2), Matrix::identity(2), {{-20, 20}, {-20, 20}}, {{-20, 20}, {-20, 20}}};
    std::vector<std::vector<double>> states;
    for (const auto& p : positions) states.push_back({p[0], p[1], p[2], p[3]});
    MultiAgentSystem sys({a, a}, states.front());
    Trajectory t = from_states(sys, states, {}, 4);
    return {std::move(sys), std::move(t)};
}

/// Box [lo, hi]^2 for agent `who` as member predicates.
std::vector<Predicate> box(const std::string& name, int who, double lo, double hi) {
    const std::string x = "x" + std::to_string(who) + "[0]", y = "x" + std::to_string(who) + "[1]";
    return {pred(name + "_xl", x + " - " + format_double(lo)), pred(name + "_xh", format_double(hi) + " - " + x),
            pred(name + "_yl", y + " - " + format_double(lo)), pred(name + "_yh", format_double(hi) + " - " + y)};
}

/// |dx| + |dy| <= 1.5 between the agents, as four half-planes.
std::vector<Predicate> near() {
    std::vector<Predicate> out;
    for (int sx : {1, -1})
        for (int sy : {1, -1}) {
            const std::string e = "1.5 - (" + std::to_string(sx) + ") * (x1[0] - x2[0]) - (" + std::to_string(sy) +
                                  ") * (x1[1] - x2[1])";
            out.push_back(pred("near", e));
        }
    return out;
}

}  // namespace

TEST(ConstraintTask, AlwaysTrueTask) {
    const ConstraintTask t{{{"one", {pred("one", "1")}, time_range(0, 3)}}};
    EXPECT_TRUE(eval_constraint_task(t, scalar({0, 1, 2, 3}), {0}).satisfied);
}

// Both agents visit a goal region together; a delay of agent 2 breaks the
// meeting and the witness names the distance predicate.
TEST(ConstraintTask, MeetingAndDelayedAgent) {
    std::vector<std::array<double, 4>> pos;
    for (int k = 0; k <= 12; ++k) {
        const bool one = k >= 4 && k <= 9, two = k >= 6 && k <= 11;
        pos.push_back({one ? 5.0 : 0.0, one ? 5.0 : 0.0, two ? 5.5 : 10.0, two ? 5.5 : 10.0});
    }
    const auto [sys, traj] = two_agents(pos);
    std::vector<Predicate> meet = box("goal1", 1, 4, 6);
    for (auto& p : near()) meet.push_back(p);
    const ConstraintTask task{{{"meet", meet, time_range(6, 9)}}};
    EXPECT_TRUE(eval_constraint_task(task, traj, {0, 0}).satisfied);
    const Verdict v = eval_constraint_task(task, traj, {0, -2});
    ASSERT_FALSE(v.satisfied);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->predicate, "near");
    EXPECT_EQ(v.witness->k, 6);
}

TEST(ConstraintTask, VerdictIsSignOfPiecewiseMinimum) {
    std::mt19937 rng(1);
    const auto sys = fixtures::integrators(2, 100.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> u;
        for (int k = 0; k < 8; ++k)
            u.push_back({std::uniform_real_distribution<double>(-2, 2)(rng), std::uniform_real_distribution<double>(-2, 2)(rng)});
        const Trajectory t = simulate(sys, u, 3);
        const ConstraintTask task{{{"a", {pred("a", "x1 + x2 + 1"), pred("b", "2 - x1")}, {2, 3, 5}},
                                   {"c", {pred("c", "x2 - x1 + 3")}, time_range(6, 8)}}};
        const ShiftVector kappa{std::uniform_int_distribution<int>(-2, 2)(rng), std::uniform_int_distribution<int>(-3, 3)(rng)};
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& piece : task.pieces)
            for (int k : piece.times) {
                const auto x = shifted_state(t, k, kappa);
                for (const auto& m : piece.members)
                    lo = std::min(lo, m.value([&](VarRef v) { return x[static_cast<std::size_t>(v.agent)]; }));
            }
        EXPECT_EQ(eval_constraint_task(task, t, kappa).satisfied, lo >= 0.0);
    }
}

TEST(Stl, Examples) {
    const Trajectory t = scalar({1, 2, -1, 5});
    const Formula g = Formula::always({0, 2}, leaf("p", "x1"));
    EXPECT_TRUE(eval_stl(Formula::truth(), t, {0}, 0));
    EXPECT_FALSE(eval_stl(g, t, {0}, 0));
    EXPECT_FALSE(eval_stl(g, t, {1}, 0));
    EXPECT_TRUE(eval_stl(g, t, {-1}, 0));
    EXPECT_TRUE(eval_stl(Formula::eventually({0, 1}, leaf("q", "x1 - 3")), scalar({0, 3}), {0}, 0));
    EXPECT_FALSE(eval_stl(Formula::eventually({0, 1}, leaf("q", "x1 - 3")), scalar({0, 2.5}), {0}, 0));
}

TEST(Stl, ClosedAtZero) {
    EXPECT_TRUE(eval_stl(leaf("p", "x1 - 1"), scalar({1}), {0}, 0));
    EXPECT_FALSE(eval_stl(Formula::negation(leaf("p", "x1 - 1")), scalar({1}), {0}, 0));
}

TEST(Stl, UntilIsInclusive) {
    const Formula u = Formula::until({1, 2}, leaf("l", "x1"), leaf("r", "x1 - 5"));
    // right at k=2 and left on [0,2] (left is checked at the switching instant too)
    EXPECT_TRUE(eval_stl(u, scalar({0, 1, 5}), {0}, 0));
    EXPECT_FALSE(eval_stl(u, scalar({0, -1, 5}), {0}, 0));
    EXPECT_FALSE(eval_stl(u, scalar({5, 1, 1}), {0}, 0));  // k=0 is outside [1,2]
}

// Shifting the evaluation instant and the shift vector together changes nothing.
TEST(Stl, ShiftConsistency) {
    std::mt19937 rng(2);
    const auto sys = fixtures::integrators(2, 100.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        fixtures::FormulaGen gen(rng, 2, 6);
        const Formula phi = normalize(gen());
        std::vector<std::vector<double>> u;
        for (int k = 0; k < 10; ++k)
            u.push_back({std::uniform_int_distribution<int>(-4, 4)(rng) * 0.25,
                         std::uniform_int_distribution<int>(-4, 4)(rng) * 0.25});
        const Trajectory t = simulate(sys, u, 8);
        const int at = std::uniform_int_distribution<int>(0, 3)(rng);
        const int at2 = std::uniform_int_distribution<int>(0, 3)(rng);
        const ShiftVector k1{std::uniform_int_distribution<int>(-1, 2)(rng), std::uniform_int_distribution<int>(-1, 2)(rng)};
        const ShiftVector k2{k1[0] + at - at2, k1[1] + at - at2};
        EXPECT_EQ(eval_stl(phi, t, k1, at), eval_stl(phi, t, k2, at2)) << to_string(phi);
    }
}

TEST(RobustCheck, TrivialBoundIsNominal) {
    const Formula g = Formula::always({0, 2}, leaf("p", "x1"));
    for (const auto& xs : {std::vector<double>{1, 2, -1, 5}, std::vector<double>{1, 2, 1, 5}}) {
        const Trajectory t = scalar(xs);
        EXPECT_EQ(robust_check(g, t, {0, 0}).satisfied, eval_stl(g, t, {0}, 0));
    }
}

TEST(RobustCheck, WitnessIsLexicographicallyFirst) {
    // agent 2 must be high at k=2; agent 1 irrelevant
    AgentModel a{Matrix::identity(1), Matrix::identity(1), {{-9, 9}}, {{-9, 9}}};
    MultiAgentSystem sys({a, a}, {0, 0});
    const Trajectory t = from_states(sys, {{0, 0}, {0, 0}, {0, 1}, {0, 0}}, {}, 3);
    const Formula phi = Formula::always({2, 2}, leaf("hi2", "x2 - 1"));
    const Verdict v = robust_check(phi, t, {-1, 1});
    ASSERT_FALSE(v.satisfied);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->kappa, (ShiftVector{-1, -1}));
    EXPECT_EQ(v.witness->predicate, "hi2");
    EXPECT_TRUE(robust_check(phi, t, {0, 0}).satisfied);
}

TEST(RobustCheck, ExtensionShortfallThrows) {
    const Trajectory t = scalar({0, 1, 2}, 1);
    EXPECT_THROW(robust_check(Formula::always({0, 2}, leaf("p", "x1")), t, {0, 2}), ExtensionError);
}

TEST(Atr, Examples) {
    const Formula g0 = Formula::always({0, 0}, leaf("p", "x1"));
    const AtrValue v = atr::atr(g0, scalar({1, 1, -1}), 3);
    EXPECT_EQ(v.sign, 1);
    EXPECT_EQ(v.tau, 1);
    const AtrValue bad = atr::atr(g0, scalar({-1, 1}), 3);
    EXPECT_EQ(bad.sign, -1);
}

TEST(Atr, MonotoneInTheBound) {
    std::mt19937 rng(3);
    const auto sys = fixtures::integrators(2, 100.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        fixtures::FormulaGen gen(rng, 2, 5);
        const Formula phi = normalize(gen());
        std::vector<std::vector<double>> u;
        for (int k = 0; k < 6; ++k)
            u.push_back({std::uniform_int_distribution<int>(-2, 2)(rng) * 0.5,
                         std::uniform_int_distribution<int>(-2, 2)(rng) * 0.5});
        const Trajectory t = simulate(sys, u, 4);
        const AtrValue v = atr::atr(phi, t, 4);
        if (v.sign < 0) {
            EXPECT_FALSE(eval_stl(phi, t, {0, 0}, 0));
            continue;
        }
        for (int tau = 0; tau <= v.tau; ++tau) EXPECT_TRUE(robust_check(phi, t, {-tau, tau}).satisfied);
        if (v.tau < 4) EXPECT_FALSE(robust_check(phi, t, {-v.tau - 1, v.tau + 1}).satisfied);
    }
}

TEST(Atr, OneSidedBounds) {
    // x(k) = k must lie in [0.5, 3] at the read index 2 + kappa
    const Formula phi = Formula::always({2, 2}, Formula::conj({leaf("lo", "x1 - 0.5"), leaf("hi", "3 - x1")}));
    const ShiftBound sides = atr_sides(phi, scalar({0, 1, 2, 3, 4, 5, 6}), 6);
    EXPECT_EQ(sides.theta1, -1);
    EXPECT_EQ(sides.theta2, 1);
    const ShiftBound none = atr_sides(phi, scalar({5, 5}), 3);
    EXPECT_EQ(none.theta1, 0);
    EXPECT_EQ(none.theta2, 0);
}
