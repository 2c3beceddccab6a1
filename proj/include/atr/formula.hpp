#pragma once

#include "atr/expr.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace atr {

/// Sorted set of non-negative time instants.
using TimeSet = std::vector<int>;

TimeSet time_range(int first, int last);
TimeSet time_union(const TimeSet& a, const TimeSet& b);
/// Minkowski sum { s + d | s in set, d in [lo, hi] }.
TimeSet dilate(const TimeSet& set, int lo, int hi);

/// Atomic proposition: true iff `expr(x) >= 0`.
///
/// `evaluator` optionally replaces `expr` for the brute-force oracle, which
/// lets verification-only workflows check an exact nonlinear predicate.
struct Predicate {
    std::string label;
    Expr expr;
    std::function<double(const std::function<double(VarRef)>&)> evaluator;

    double value(const std::function<double(VarRef)>& state) const {
        return evaluator ? evaluator(state) : expr.eval(state);
    }
};

enum class Op { True, Pred, Not, And, Or, Always, Eventually, Until };

struct Interval {
    int lo = 0;
    int hi = 0;
    bool operator==(const Interval&) const = default;
};

/// Bounded STL formula. Immutable; copies share structure.
class Formula {
public:
    static Formula truth();
    static Formula pred(Predicate p);
    static Formula negation(Formula child);
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);
    static Formula always(Interval iv, Formula child);
    static Formula eventually(Interval iv, Formula child);
    static Formula until(Interval iv, Formula left, Formula right);

    Op op() const { return node_->op; }
    const Interval& interval() const { return node_->interval; }
    const Predicate& predicate() const { return *node_->predicate; }
    const std::vector<Formula>& children() const { return node_->children; }

    bool is_temporal() const {
        return op() == Op::Always || op() == Op::Eventually || op() == Op::Until;
    }
    bool is_boolean() const { return op() == Op::And || op() == Op::Or; }
    /// Predicate leaf or negated predicate leaf.
    bool is_literal() const {
        return op() == Op::Pred || (op() == Op::Not && children().front().op() == Op::Pred);
    }

    /// Structural equality; predicates compare by label and expression.
    bool operator==(const Formula& other) const;

private:
    struct Node {
        Op op = Op::True;
        Interval interval;
        std::shared_ptr<const Predicate> predicate;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Op op, Interval iv, std::vector<Formula> children);

    std::shared_ptr<const Node> node_;
};

/// Negation normal form: negations sit directly above predicates, nested
/// conjunctions/disjunctions are flattened, single-child ones collapsed.
/// A negated until is rewritten as
///   AND_{j=a..b} ( G[j,j] !right | F[0,j] !left ).
Formula normalize(const Formula& f);

/// Label -> formula it denotes. Plain predicates map to a leaf; shape
/// templates (boxes, balls) map to a conjunction of half-plane leaves whose
/// own labels are registered too.
using PredicateTable = std::map<std::string, Formula>;

/// Grammar (whitespace-insensitive), precedence ! > G/F prefix > U > & > |:
///   formula := "true" | IDENT | "!" formula | formula "&" formula
///            | formula "|" formula | "G[" INT "," INT "]" formula
///            | "F[" INT "," INT "]" formula | formula "U[" INT "," INT "]" formula
///            | "(" formula ")"
/// The result is normalized. Throws ParseError (with line/column) on syntax
/// errors, unknown labels and malformed intervals.
Formula parse_formula(std::string_view text, const PredicateTable& table);

/// Inverse of parse_formula up to whitespace for normalized formulas.
std::string to_string(const Formula& f);

/// Sum of nested upper interval bounds; the trajectory x(0..horizon)
/// determines satisfaction at time 0.
int horizon(const Formula& f);

/// Nodes in pre-order (until: left subtree before right). Node ids used by
/// required_instants and the encoder are positions in this list.
std::vector<const Formula*> preorder(const Formula& f);

/// Instants at which each node's truth value is needed when the root is
/// evaluated at `root_instant`, indexed by pre-order id.
std::vector<TimeSet> required_instants(const Formula& f, int root_instant);

/// Constraint-function task: every piece must hold at each of its times.
struct ConstraintPiece {
    std::string name;
    std::vector<Predicate> members;  // piece value = min over members
    TimeSet times;
};

struct ConstraintTask {
    std::vector<ConstraintPiece> pieces;

    int max_time() const;
    void validate() const;
};

}  // namespace atr
