#pragma once

#include "atr/formula.hpp"
#include "atr/system.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace atr {

/// Admissible per-agent shifts [theta1, theta2] with theta1 <= 0 <= theta2.
struct ShiftBound {
    int theta1 = 0;
    int theta2 = 0;

    int width() const { return theta2 - theta1 + 1; }
    void validate() const;
};

enum class Method { naive, reduced };

Method parse_method(const std::string& s);
const char* to_string(Method m);

/// How an instant-shift pair (k, kappa) is identified.
///   naive:   the pair itself, (k, kappa_1, ..., kappa_N); no sharing.
///   raw:     effective indices (k + kappa_i); one key per instant-shift pair set.
///   clamped: raw with negative indices merged at 0 (state-only consumers).
enum class KeyMode { naive, raw, clamped };

using ShiftKey = std::vector<int>;

struct ShiftKeyHash {
    std::size_t operator()(const ShiftKey& key) const noexcept;
};

struct InstantShift {
    int k = 0;
    ShiftVector kappa;
};

ShiftKey make_key(int k, const ShiftVector& kappa, KeyMode mode);

/// Shift-vector enumeration cap; ATR_SHIFT_CAP overrides the default 10^7.
std::size_t shift_cap();

/// All Theta^N shift vectors in lexicographic order. Throws CapExceeded.
std::vector<ShiftVector> enumerate_shifts(ShiftBound bound, int num_agents, std::size_t cap = shift_cap());

/// Registry of instant-shift pair sets: one dense id per distinct key, with the
/// lexicographically smallest (k, kappa) seen as its representative when pairs
/// are inserted in (k, kappa) order.
class PairSetIndex {
public:
    explicit PairSetIndex(KeyMode mode = KeyMode::raw) : mode_(mode) {}

    KeyMode mode() const { return mode_; }
    int size() const { return static_cast<int>(keys_.size()); }

    int insert(int k, const ShiftVector& kappa);
    /// Dense id, or -1 when the pair's class is not registered.
    int find(int k, const ShiftVector& kappa) const;
    int find(const ShiftKey& key) const;

    const ShiftKey& key(int id) const { return keys_[static_cast<std::size_t>(id)]; }
    const InstantShift& representative(int id) const { return reps_[static_cast<std::size_t>(id)]; }

private:
    KeyMode mode_;
    std::vector<ShiftKey> keys_;
    std::vector<InstantShift> reps_;
    std::unordered_map<ShiftKey, int, ShiftKeyHash> ids_;
};

PairSetIndex build_index(const TimeSet& instants, ShiftBound bound, int num_agents, KeyMode mode,
                         std::size_t cap = shift_cap());

/// Number of pair sets over contiguous instants [0, T]: (T+1) Theta^N - T (Theta-1)^N.
std::int64_t closed_form_count(int T, int theta, int num_agents);

std::int64_t ipow(std::int64_t base, int exp);

// ---------------------------------------------------------------------------
// Variable plans shared by counting and encoding

/// How the STL encoding treats each formula node.
///
/// Literal leaves (predicates and negated predicates) with the same label
/// and polarity share one group of binaries over the union of their required
/// instants. Temporal nodes always get binaries. Conjunctions/disjunctions
/// whose truth is enforced (the root, and children of enforced
/// conjunctions) get none: an enforced conjunction forwards enforcement, an
/// enforced disjunction becomes a covering row over its children.
struct StlPlan {
    struct LiteralGroup {
        std::string label;
        bool negated = false;
        const Formula* literal = nullptr;
        TimeSet instants;
        PairSetIndex index;
    };

    std::vector<const Formula*> nodes;  // pre-order
    std::vector<TimeSet> instants;      // per node
    std::vector<bool> enforced;         // per node
    std::vector<int> group;             // per node: literal group id or -1
    std::vector<PairSetIndex> index;    // per node; empty for literals and elided nodes
    std::vector<bool> has_var;          // per node
    std::vector<LiteralGroup> groups;
    Method method = Method::reduced;
    ShiftBound bound;
    int num_agents = 0;
};

StlPlan plan_stl(const Formula& phi, ShiftBound bound, int num_agents, Method method,
                 bool merge_boundary = false, std::size_t cap = shift_cap());

struct StlBinaryCount {
    std::int64_t predicate = 0;
    std::int64_t temporal = 0;
    std::int64_t boolean = 0;
    std::int64_t until_aux = 0;  // reported separately, not in total()

    std::int64_t total() const { return predicate + temporal + boolean; }
};

StlBinaryCount count_plan(const StlPlan& plan);

StlBinaryCount count_stl_binaries(const Formula& phi, ShiftBound bound, int num_agents, Method method,
                                  bool merge_boundary = false);

/// Task inequalities: sum over pieces of (pair sets x members).
std::int64_t count_constraint_rows(const ConstraintTask& task, ShiftBound bound, int num_agents,
                                   Method method, bool merge_boundary = false);

}  // namespace atr
