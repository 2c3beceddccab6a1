#include "atr/errors.hpp"
#include "atr/shiftsets.hpp"
#include "support/builders.hpp"
#include "support/dedup.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

using namespace atr;
using fixtures::dedup_oracle;

namespace {

TimeSet random_instants(std::mt19937& rng) {
    TimeSet s;
    const int len = std::uniform_int_distribution<int>(1, 15)(rng);
    for (int t = 0; t < len; ++t)
        if (std::uniform_int_distribution<int>(0, 2)(rng)) s.push_back(t);
    if (s.empty()) s.push_back(len);
    return s;
}

}  // namespace

TEST(EnumerateShifts, Examples) {
    EXPECT_EQ(enumerate_shifts({0, 0}, 3), (std::vector<ShiftVector>{{0, 0, 0}}));
    const auto nine = enumerate_shifts({-1, 1}, 2);
    ASSERT_EQ(nine.size(), 9u);
    EXPECT_EQ(nine.front(), (ShiftVector{-1, -1}));
    EXPECT_EQ(nine.back(), (ShiftVector{1, 1}));
    EXPECT_TRUE(std::is_sorted(nine.begin(), nine.end()));
    EXPECT_EQ(enumerate_shifts({-4, 4}, 2).size(), 81u);
    EXPECT_THROW(enumerate_shifts({-4, 4}, 3, 100), CapExceeded);
}

TEST(ShiftBounds, Validation) {
    EXPECT_THROW((ShiftBound{1, 2}).validate(), ValidationError);
    EXPECT_THROW((ShiftBound{-2, -1}).validate(), ValidationError);
    EXPECT_NO_THROW((ShiftBound{0, 0}).validate());
}

TEST(BuildIndex, TableRowsForConstraintTasks) {
    // one index per piece; the task count is their sum
    const auto c1 = build_index(time_range(5, 10), {-4, 4}, 2, KeyMode::raw).size() +
                    build_index(time_range(17, 25), {-4, 4}, 2, KeyMode::raw).size();
    EXPECT_EQ(c1, 383);
    // over the union, 4 keys are shared across the gap between the pieces
    const TimeSet c1_union = time_union(time_range(5, 10), time_range(17, 25));
    EXPECT_EQ(build_index(c1_union, {-4, 4}, 2, KeyMode::raw).size(), 379);
    EXPECT_EQ(dedup_oracle(c1_union, {-4, 4}, 2), 379u);

    EXPECT_EQ(build_index(time_union({5, 6}, time_range(11, 15)), {-1, 1}, 3, KeyMode::raw).size(), 149);
    EXPECT_EQ(count_constraint_rows(fixtures::c1_task(), {-4, 4}, 2, Method::naive), 1215);
    EXPECT_EQ(count_constraint_rows(fixtures::c2_task(), {-1, 1}, 3, Method::reduced), 149);
    EXPECT_EQ(count_constraint_rows(fixtures::c2_task(), {-1, 1}, 3, Method::naive), 189);
}

TEST(BuildIndex, ClosedFormOnContiguousInstants) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const int T = std::uniform_int_distribution<int>(0, 12)(rng);
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        const ShiftBound b = fixtures::random_bound(rng, 5);
        const auto size = build_index(time_range(0, T), b, n, KeyMode::raw).size();
        EXPECT_EQ(size, closed_form_count(T, b.width(), n));
        EXPECT_EQ(static_cast<std::size_t>(size), dedup_oracle(time_range(0, T), b, n));
    }
}

TEST(BuildIndex, MatchesDedupOracleOnArbitraryInstants) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const TimeSet s = random_instants(rng);
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        const ShiftBound b = fixtures::random_bound(rng, 5);
        EXPECT_EQ(static_cast<std::size_t>(build_index(s, b, n, KeyMode::raw).size()), dedup_oracle(s, b, n));
        EXPECT_EQ(static_cast<std::size_t>(build_index(s, b, n, KeyMode::clamped).size()), dedup_oracle(s, b, n, true));
    }
}

TEST(BuildIndex, RepresentativesAreSmallestMembersOfTheirKey) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const TimeSet s = random_instants(rng);
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        const ShiftBound b = fixtures::random_bound(rng, 4);
        const KeyMode mode = trial % 2 ? KeyMode::raw : KeyMode::clamped;
        const PairSetIndex idx = build_index(s, b, n, mode);
        for (int id = 0; id < idx.size(); ++id) {
            const InstantShift& rep = idx.representative(id);
            EXPECT_EQ(make_key(rep.k, rep.kappa, mode), idx.key(id));
            EXPECT_EQ(idx.find(rep.k, rep.kappa), id);
        }
        // every pair maps to a key whose representative is no larger
        for (int k : s)
            for (const auto& kappa : enumerate_shifts(b, n)) {
                const int id = idx.find(k, kappa);
                ASSERT_GE(id, 0);
                const InstantShift& rep = idx.representative(id);
                EXPECT_LE(std::tie(rep.k, rep.kappa), std::tie(k, kappa));
            }
    }
}

TEST(BuildIndex, ReducedNeverExceedsNaive) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const TimeSet s = random_instants(rng);
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        const ShiftBound b = fixtures::random_bound(rng, 4);
        const auto reduced = build_index(s, b, n, KeyMode::raw).size();
        const auto naive = build_index(s, b, n, KeyMode::naive).size();
        EXPECT_EQ(naive, static_cast<int>(s.size()) * ipow(b.width(), n));
        EXPECT_LE(reduced, naive);
        // sharing needs two instants closer than Theta
        bool close = false;
        for (std::size_t i = 1; i < s.size(); ++i) close |= s[i] - s[i - 1] < b.width();
        if (close)
            EXPECT_LT(reduced, naive);
        else
            EXPECT_EQ(reduced, naive);
    }
}

TEST(CountStl, TableRows) {
    auto both = [](const Formula& f, ShiftBound b, int n) {
        return std::pair{count_stl_binaries(f, b, n, Method::naive).total(),
                         count_stl_binaries(f, b, n, Method::reduced).total()};
    };
    EXPECT_EQ(both(fixtures::phi1(), {-3, 3}, 2), (std::pair<std::int64_t, std::int64_t>{539, 215}));
    EXPECT_EQ(both(fixtures::phi3(), {-3, 4}, 3), (std::pair<std::int64_t, std::int64_t>{17920, 6944}));
    // reduced 848 where the published table lists 875; the naive count matches
    EXPECT_EQ(both(fixtures::phi2(), {-1, 2}, 3), (std::pair<std::int64_t, std::int64_t>{1280, 848}));
}

TEST(CountStl, TrivialBoundSumsRequiredInstants) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        fixtures::FormulaGen gen(rng, 2, 8);
        const Formula f = normalize(gen());
        const StlPlan plan = plan_stl(f, {0, 0}, 2, Method::reduced);
        std::int64_t expected = 0;
        for (const auto& g : plan.groups) expected += static_cast<std::int64_t>(g.instants.size());
        for (std::size_t id = 0; id < plan.nodes.size(); ++id)
            if (plan.has_var[id] && plan.group[id] < 0) expected += static_cast<std::int64_t>(plan.instants[id].size());
        EXPECT_EQ(count_stl_binaries(f, {0, 0}, 2, Method::naive).total(), expected);
        EXPECT_EQ(count_stl_binaries(f, {0, 0}, 2, Method::reduced).total(), expected);
    }
}

TEST(CountStl, ReducedNeverExceedsNaive) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        fixtures::FormulaGen gen(rng, n, 10);
        const Formula f = normalize(gen());
        const ShiftBound b = fixtures::random_bound(rng, 4);
        EXPECT_LE(count_stl_binaries(f, b, n, Method::reduced).total(),
                  count_stl_binaries(f, b, n, Method::naive).total());
    }
}

TEST(CountStl, ClampedKeysOnlyMergeLiterals) {
    const Formula phi = Formula::always({0, 3}, fixtures::leaf("p", "x1 - x2"));
    const auto raw = count_stl_binaries(phi, {-2, 1}, 2, Method::reduced, false);
    const auto merged = count_stl_binaries(phi, {-2, 1}, 2, Method::reduced, true);
    EXPECT_EQ(raw.temporal, merged.temporal);
    EXPECT_LT(merged.predicate, raw.predicate);
    EXPECT_EQ(merged.predicate, static_cast<std::int64_t>(dedup_oracle(time_range(0, 3), {-2, 1}, 2, true)));
}

TEST(ShiftCap, EnvironmentOverride) {
    ::setenv("ATR_SHIFT_CAP", "50", 1);
    EXPECT_EQ(shift_cap(), 50u);
    EXPECT_THROW(build_index({0}, {-4, 4}, 2, KeyMode::raw), CapExceeded);
    ::unsetenv("ATR_SHIFT_CAP");
    EXPECT_EQ(shift_cap(), 10'000'000u);
}
