#include "atr/shiftsets.hpp"

#include "atr/errors.hpp"

#include <cstdlib>
#include <map>

namespace atr {

void ShiftBound::validate() const {
    if (theta1 > 0 || theta2 < 0)
        throw ValidationError("shift bound [" + std::to_string(theta1) + "," + std::to_string(theta2) +
                              "] must satisfy theta1 <= 0 <= theta2");
}

Method parse_method(const std::string& s) {
    if (s == "naive") return Method::naive;
    if (s == "reduced") return Method::reduced;
    throw ValidationError("unknown method '" + s + "' (expected naive or reduced)");
}

const char* to_string(Method m) { return m == Method::naive ? "naive" : "reduced"; }

std::size_t ShiftKeyHash::operator()(const ShiftKey& key) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : key) {
        h ^= static_cast<std::size_t>(static_cast<unsigned>(v));
        h *= 1099511628211ull;
    }
    return h;
}

ShiftKey make_key(int k, const ShiftVector& kappa, KeyMode mode) {
    ShiftKey key;
    if (mode == KeyMode::naive) {
        key.reserve(kappa.size() + 1);
        key.push_back(k);
        key.insert(key.end(), kappa.begin(), kappa.end());
        return key;
    }
    const IndexMode im = mode == KeyMode::clamped ? IndexMode::clamped : IndexMode::raw;
    key.reserve(kappa.size());
    for (int c : kappa) key.push_back(effective_index(k, c, im));
    return key;
}

std::size_t shift_cap() {
    if (const char* env = std::getenv("ATR_SHIFT_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 10'000'000;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<ShiftVector> enumerate_shifts(ShiftBound bound, int num_agents, std::size_t cap) {
    bound.validate();
    if (num_agents < 1) throw ValidationError("number of agents must be at least 1");
    const auto theta = static_cast<std::size_t>(bound.width());
    std::size_t total = 1;
    for (int i = 0; i < num_agents; ++i) {
        if (total > cap / theta)
            throw CapExceeded("shift enumeration exceeds cap of " + std::to_string(cap) + " vectors");
        total *= theta;
    }
    if (total > cap) throw CapExceeded("shift enumeration exceeds cap of " + std::to_string(cap) + " vectors");

    std::vector<ShiftVector> out;
    out.reserve(total);
    ShiftVector cur(static_cast<std::size_t>(num_agents), bound.theta1);
    for (std::size_t n = 0; n < total; ++n) {
        out.push_back(cur);
        for (int i = num_agents - 1; i >= 0; --i) {
            auto& c = cur[static_cast<std::size_t>(i)];
            if (c < bound.theta2) {
                ++c;
                break;
            }
            c = bound.theta1;
        }
    }
    return out;
}

int PairSetIndex::insert(int k, const ShiftVector& kappa) {
    ShiftKey key = make_key(k, kappa, mode_);
    auto [it, fresh] = ids_.try_emplace(key, size());
    if (fresh) {
        keys_.push_back(std::move(key));
        reps_.push_back({k, kappa});
    }
    return it->second;
}

int PairSetIndex::find(int k, const ShiftVector& kappa) const { return find(make_key(k, kappa, mode_)); }

int PairSetIndex::find(const ShiftKey& key) const {
    auto it = ids_.find(key);
    return it == ids_.end() ? -1 : it->second;
}

PairSetIndex build_index(const TimeSet& instants, ShiftBound bound, int num_agents, KeyMode mode,
                         std::size_t cap) {
    const auto shifts = enumerate_shifts(bound, num_agents, cap);
    PairSetIndex index(mode);
    for (int k : instants)
        for (const auto& kappa : shifts) index.insert(k, kappa);
    return index;
}

std::int64_t closed_form_count(int T, int theta, int num_agents) {
    return (T + 1) * ipow(theta, num_agents) - T * ipow(theta - 1, num_agents);
}

// ---------------------------------------------------------------------------

namespace {

struct Planner {
    StlPlan& plan;
    std::map<std::pair<std::string, bool>, int> group_ids;
    int next = 0;

    void visit(const Formula& f, bool enforced) {
        const int id = next++;
        plan.enforced[static_cast<std::size_t>(id)] = enforced;
        if (f.is_literal()) {
            const bool negated = f.op() == Op::Not;
            const Formula& leaf = negated ? f.children().front() : f;
            const auto gkey = std::make_pair(leaf.predicate().label, negated);
            auto [it, fresh] = group_ids.try_emplace(gkey, static_cast<int>(plan.groups.size()));
            if (fresh) {
                StlPlan::LiteralGroup g;
                g.label = gkey.first;
                g.negated = negated;
                g.literal = &f;
                plan.groups.push_back(std::move(g));
            }
            auto& g = plan.groups[static_cast<std::size_t>(it->second)];
            g.instants = time_union(g.instants, plan.instants[static_cast<std::size_t>(id)]);
            plan.group[static_cast<std::size_t>(id)] = it->second;
            plan.has_var[static_cast<std::size_t>(id)] = true;
            if (negated) ++next;  // the predicate under the negation is part of the literal
            return;
        }
        switch (f.op()) {
            case Op::True:
                break;
            case Op::And:
                plan.has_var[static_cast<std::size_t>(id)] = !enforced;
                for (const auto& c : f.children()) visit(c, enforced);
                break;
            case Op::Or:
                plan.has_var[static_cast<std::size_t>(id)] = !enforced;
                for (const auto& c : f.children()) visit(c, false);
                break;
            case Op::Not:
                throw ValidationError("formula is not in negation normal form");
            default:  // temporal
                plan.has_var[static_cast<std::size_t>(id)] = true;
                for (const auto& c : f.children()) visit(c, false);
                break;
        }
    }
};

}  // namespace

StlPlan plan_stl(const Formula& phi, ShiftBound bound, int num_agents, Method method, bool merge_boundary,
                 std::size_t cap) {
    bound.validate();
    StlPlan plan;
    plan.method = method;
    plan.bound = bound;
    plan.num_agents = num_agents;
    plan.nodes = preorder(phi);
    plan.instants = required_instants(phi, 0);
    const std::size_t n = plan.nodes.size();
    plan.enforced.assign(n, false);
    plan.group.assign(n, -1);
    plan.has_var.assign(n, false);
    plan.index.assign(n, PairSetIndex{});

    Planner planner{plan, {}, 0};
    planner.visit(phi, true);

    const KeyMode node_mode = method == Method::naive ? KeyMode::naive : KeyMode::raw;
    const KeyMode leaf_mode =
        method == Method::naive ? KeyMode::naive : (merge_boundary ? KeyMode::clamped : KeyMode::raw);
    for (auto& g : plan.groups) g.index = build_index(g.instants, bound, num_agents, leaf_mode, cap);
    for (std::size_t id = 0; id < n; ++id) {
        const Formula& f = *plan.nodes[id];
        if (plan.group[id] >= 0) continue;
        const bool covering_or = f.op() == Op::Or && plan.enforced[id];
        if (plan.has_var[id] || covering_or)
            plan.index[id] = build_index(plan.instants[id], bound, num_agents, node_mode, cap);
    }
    return plan;
}

StlBinaryCount count_plan(const StlPlan& plan) {
    StlBinaryCount c;
    for (const auto& g : plan.groups) c.predicate += g.index.size();
    for (std::size_t id = 0; id < plan.nodes.size(); ++id) {
        if (!plan.has_var[id] || plan.group[id] >= 0) continue;
        const Formula& f = *plan.nodes[id];
        const auto size = static_cast<std::int64_t>(plan.index[id].size());
        if (f.is_temporal())
            c.temporal += size;
        else
            c.boolean += size;
        if (f.op() == Op::Until) c.until_aux += size * (f.interval().hi - f.interval().lo + 1);
    }
    return c;
}

StlBinaryCount count_stl_binaries(const Formula& phi, ShiftBound bound, int num_agents, Method method,
                                  bool merge_boundary) {
    return count_plan(plan_stl(phi, bound, num_agents, method, merge_boundary));
}

std::int64_t count_constraint_rows(const ConstraintTask& task, ShiftBound bound, int num_agents,
                                   Method method, bool merge_boundary) {
    const KeyMode mode =
        method == Method::naive ? KeyMode::naive : (merge_boundary ? KeyMode::clamped : KeyMode::raw);
    std::int64_t rows = 0;
    for (const auto& piece : task.pieces)
        rows += static_cast<std::int64_t>(build_index(piece.times, bound, num_agents, mode).size()) *
                static_cast<std::int64_t>(piece.members.size());
    return rows;
}

}  // namespace atr
