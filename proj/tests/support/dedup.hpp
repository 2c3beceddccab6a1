#pragma once

#include "atr/shiftsets.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace atr::fixtures {

/// Distinct tuples (k + kappa_1, ..., k + kappa_N) by direct enumeration,
/// optionally with negative entries clamped to 0.
inline std::size_t dedup_oracle(const TimeSet& instants, ShiftBound b, int n, bool clamp = false) {
    std::set<std::vector<int>> seen;
    std::vector<int> kappa(static_cast<std::size_t>(n), b.theta1);
    for (;;) {
        for (int k : instants) {
            std::vector<int> key;
            for (int s : kappa) key.push_back(clamp ? std::max(0, k + s) : k + s);
            seen.insert(key);
        }
        int i = n - 1;
        while (i >= 0 && kappa[static_cast<std::size_t>(i)] == b.theta2) kappa[static_cast<std::size_t>(i--)] = b.theta1;
        if (i < 0) break;
        ++kappa[static_cast<std::size_t>(i)];
    }
    return seen.size();
}

}  // namespace atr::fixtures
