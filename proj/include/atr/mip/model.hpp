#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace atr::mip {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Relation { le, eq, ge };

const char* to_string(Relation r);

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lo = 0.0;
    double hi = inf;
};

struct Term {
    int var = 0;
    double coef = 0.0;
    bool operator==(const Term&) const = default;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;  // sorted by var, no duplicates, no zeros
    Relation rel = Relation::le;
    double rhs = 0.0;
};

/// q * x_i * x_j inside the bracketed block, which is halved: [ ... ] / 2.
struct QuadTerm {
    int i = 0;
    int j = 0;
    double coef = 0.0;
    bool operator==(const QuadTerm&) const = default;
};

/// Minimize  constant + sum linear_j x_j + (sum_q coef x_i x_j) / 2.
struct Objective {
    std::vector<double> linear;  // per variable
    double constant = 0.0;
    std::vector<QuadTerm> quadratic;  // export-only
};

class MipModel {
public:
    int add_variable(std::string name, VarKind kind, double lo, double hi);
    int add_continuous(std::string name, double lo, double hi) {
        return add_variable(std::move(name), VarKind::continuous, lo, hi);
    }
    int add_binary(std::string name) { return add_variable(std::move(name), VarKind::binary, 0.0, 1.0); }

    /// Merges duplicate variables and drops zero coefficients. Returns the row id.
    int add_constraint(std::string name, std::vector<Term> terms, Relation rel, double rhs);

    void set_objective_coef(int var, double coef);
    void add_objective_coef(int var, double coef);
    void set_objective_constant(double c) { objective_.constant = c; }
    void add_quadratic(int i, int j, double coef);

    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }
    int num_binaries() const;

    const Variable& variable(int id) const { return vars_[static_cast<std::size_t>(id)]; }
    Variable& variable(int id) { return vars_[static_cast<std::size_t>(id)]; }
    const std::vector<Variable>& variables() const { return vars_; }
    const Constraint& constraint(int id) const { return rows_[static_cast<std::size_t>(id)]; }
    const std::vector<Constraint>& constraints() const { return rows_; }
    const Objective& objective() const { return objective_; }

    /// -1 when unknown.
    int find_variable(const std::string& name) const;

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;

    /// Largest row violation of `x` (relations and variable bounds).
    double max_violation(const std::vector<double>& x) const;
    double evaluate_objective(const std::vector<double>& x) const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    Objective objective_;
    std::unordered_map<std::string, int> var_ids_;
    std::unordered_map<std::string, int> row_ids_;
};

/// Names accepted by the LP writer: [A-Za-z_][A-Za-z0-9_.]*, not a section keyword.
bool valid_name(const std::string& name);

}  // namespace atr::mip
