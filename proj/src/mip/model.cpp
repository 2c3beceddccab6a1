#include "atr/mip/model.hpp"

#include "atr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace atr::mip {

const char* to_string(Relation r) {
    switch (r) {
        case Relation::le: return "<=";
        case Relation::ge: return ">=";
        default: return "=";
    }
}

bool valid_name(const std::string& name) {
    if (name.empty()) return false;
    const auto c0 = static_cast<unsigned char>(name[0]);
    if (!std::isalpha(c0) && c0 != '_') return false;
    for (char ch : name) {
        const auto c = static_cast<unsigned char>(ch);
        if (!std::isalnum(c) && c != '_' && c != '.') return false;
    }
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    static const char* reserved[] = {"minimize", "minimum", "min", "maximize", "maximum", "max", "subject",
                                     "such", "st", "s.t.", "bounds", "bound", "binaries", "binary", "bin",
                                     "generals", "general", "gen", "end", "free", "inf", "infinity"};
    return std::none_of(std::begin(reserved), std::end(reserved), [&](const char* r) { return lower == r; });
}

int MipModel::add_variable(std::string name, VarKind kind, double lo, double hi) {
    if (!valid_name(name)) throw ValidationError("invalid variable name '" + name + "'");
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
        throw ValidationError("variable '" + name + "' has empty bounds");
    if (kind == VarKind::binary && (lo < 0.0 || hi > 1.0))
        throw ValidationError("binary variable '" + name + "' must have bounds within [0,1]");
    const int id = num_variables();
    if (!var_ids_.emplace(name, id).second) throw ValidationError("duplicate variable name '" + name + "'");
    vars_.push_back({std::move(name), kind, lo, hi});
    objective_.linear.push_back(0.0);
    return id;
}

int MipModel::add_constraint(std::string name, std::vector<Term> terms, Relation rel, double rhs) {
    if (!valid_name(name)) throw ValidationError("invalid constraint name '" + name + "'");
    if (!std::isfinite(rhs)) throw ValidationError("constraint '" + name + "' has a non-finite right-hand side");
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (t.var < 0 || t.var >= num_variables())
            throw ValidationError("constraint '" + name + "' references unknown variable " + std::to_string(t.var));
        if (!std::isfinite(t.coef)) throw ValidationError("constraint '" + name + "' has a non-finite coefficient");
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    const int id = num_constraints();
    if (!row_ids_.emplace(name, id).second) throw ValidationError("duplicate constraint name '" + name + "'");
    rows_.push_back({std::move(name), std::move(merged), rel, rhs});
    return id;
}

void MipModel::set_objective_coef(int var, double coef) { objective_.linear.at(static_cast<std::size_t>(var)) = coef; }

void MipModel::add_objective_coef(int var, double coef) { objective_.linear.at(static_cast<std::size_t>(var)) += coef; }

void MipModel::add_quadratic(int i, int j, double coef) {
    if (i < 0 || j < 0 || i >= num_variables() || j >= num_variables())
        throw ValidationError("quadratic term references unknown variable");
    if (i > j) std::swap(i, j);
    objective_.quadratic.push_back({i, j, coef});
}

int MipModel::num_binaries() const {
    return static_cast<int>(std::count_if(vars_.begin(), vars_.end(),
                                          [](const Variable& v) { return v.kind == VarKind::binary; }));
}

int MipModel::find_variable(const std::string& name) const {
    const auto it = var_ids_.find(name);
    return it == var_ids_.end() ? -1 : it->second;
}

void MipModel::validate() const {
    for (const auto& v : vars_) {
        if (v.lo > v.hi) throw ValidationError("variable '" + v.name + "' has empty bounds");
        if (v.kind == VarKind::binary && (v.lo < 0.0 || v.hi > 1.0))
            throw ValidationError("binary variable '" + v.name + "' must have bounds within [0,1]");
    }
    for (const auto& r : rows_)
        for (const auto& t : r.terms)
            if (t.var < 0 || t.var >= num_variables())
                throw ValidationError("constraint '" + r.name + "' references unknown variable");
    for (double c : objective_.linear)
        if (!std::isfinite(c)) throw ValidationError("objective has a non-finite coefficient");
}

double MipModel::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        worst = std::max(worst, vars_[j].lo - x[j]);
        worst = std::max(worst, x[j] - vars_[j].hi);
    }
    for (const auto& r : rows_) {
        double a = 0.0;
        for (const auto& t : r.terms) a += t.coef * x[static_cast<std::size_t>(t.var)];
        if (r.rel != Relation::ge) worst = std::max(worst, a - r.rhs);
        if (r.rel != Relation::le) worst = std::max(worst, r.rhs - a);
    }
    return worst;
}

double MipModel::evaluate_objective(const std::vector<double>& x) const {
    double v = objective_.constant;
    for (std::size_t j = 0; j < vars_.size(); ++j) v += objective_.linear[j] * x[j];
    double q = 0.0;
    for (const auto& t : objective_.quadratic)
        q += t.coef * x[static_cast<std::size_t>(t.i)] * x[static_cast<std::size_t>(t.j)];
    return v + q / 2.0;
}

}  // namespace atr::mip
