#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace atr {

/// One state coordinate of one agent. Both indices are 0-based internally;
/// the textual form `x<agent>[<coord>]` uses a 1-based agent number.
struct VarRef {
    int agent = 0;
    int coord = 0;

    auto operator<=>(const VarRef&) const = default;
};

/// Affine function of the stacked state: sum of coefficient * x + constant.
struct AffineExpr {
    std::map<VarRef, double> coefficients;
    double constant = 0.0;

    double eval(const std::function<double(VarRef)>& value) const;
    std::set<int> agents() const;
};

/// Polynomial in state coordinates. Affine predicates are the degree <= 1
/// case; higher degrees are kept for counting and oracle evaluation only.
class Expr {
public:
    using Monomial = std::vector<VarRef>;  // sorted, repeated entries for powers

    Expr() = default;
    static Expr constant(double c);
    static Expr variable(VarRef v);
    static Expr from_affine(const AffineExpr& a);

    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr operator-() const;

    int degree() const;
    bool is_affine() const { return degree() <= 1; }
    std::optional<AffineExpr> affine() const;
    double constant_term() const;
    std::set<int> agents() const;
    const std::map<Monomial, double>& terms() const { return terms_; }

    double eval(const std::function<double(VarRef)>& value) const;

    /// Round-trippable text in the `parse_expr` syntax.
    std::string str() const;

    bool operator==(const Expr&) const = default;

private:
    void prune();
    std::map<Monomial, double> terms_;
};

/// Parses arithmetic over `x<agent>` / `x<agent>[<coord>]`, numbers, + - * and
/// parentheses, e.g. "(x1[0] - x2[0]) * x3 - 1". Throws ParseError.
Expr parse_expr(std::string_view text);

std::string format_double(double v);

}  // namespace atr
