#include "atr/expr.hpp"

#include "atr/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>

namespace atr {

double AffineExpr::eval(const std::function<double(VarRef)>& value) const {
    double acc = constant;
    for (const auto& [v, c] : coefficients) acc += c * value(v);
    return acc;
}

std::set<int> AffineExpr::agents() const {
    std::set<int> out;
    for (const auto& [v, c] : coefficients) out.insert(v.agent);
    return out;
}

Expr Expr::constant(double c) {
    Expr e;
    e.terms_[{}] = c;
    e.prune();
    return e;
}

Expr Expr::variable(VarRef v) {
    Expr e;
    e.terms_[{v}] = 1.0;
    return e;
}

Expr Expr::from_affine(const AffineExpr& a) {
    Expr e = constant(a.constant);
    for (const auto& [v, c] : a.coefficients) e.terms_[{v}] += c;
    e.prune();
    return e;
}

void Expr::prune() {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

Expr Expr::operator+(const Expr& o) const {
    Expr r = *this;
    for (const auto& [m, c] : o.terms_) r.terms_[m] += c;
    r.prune();
    return r;
}

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
    Expr r;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            r.terms_[m] += ca * cb;
        }
    }
    r.prune();
    return r;
}

int Expr::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
}

std::optional<AffineExpr> Expr::affine() const {
    if (!is_affine()) return std::nullopt;
    AffineExpr a;
    for (const auto& [m, c] : terms_) {
        if (m.empty())
            a.constant = c;
        else
            a.coefficients[m.front()] = c;
    }
    return a;
}

double Expr::constant_term() const {
    auto it = terms_.find({});
    return it == terms_.end() ? 0.0 : it->second;
}

std::set<int> Expr::agents() const {
    std::set<int> out;
    for (const auto& [m, c] : terms_)
        for (const auto& v : m) out.insert(v.agent);
    return out;
}

double Expr::eval(const std::function<double(VarRef)>& value) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = c;
        for (const auto& v : m) t *= value(v);
        acc += t;
    }
    return acc;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string var_name(VarRef v) {
    return "x" + std::to_string(v.agent + 1) + "[" + std::to_string(v.coord) + "]";
}

}  // namespace

std::string Expr::str() const {
    std::string out;
    auto emit = [&](double c, const Monomial& m) {
        const bool neg = c < 0;
        const double mag = std::fabs(c);
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (m.empty()) {
            out += format_double(mag);
            return;
        }
        if (mag != 1.0) out += format_double(mag) + "*";
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i) out += "*";
            out += var_name(m[i]);
        }
    };
    for (const auto& [m, c] : terms_)
        if (!m.empty()) emit(c, m);
    auto it = terms_.find({});
    if (it != terms_.end()) emit(it->second, {});
    return out.empty() ? "0" : out;
}

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    Expr parse() {
        Expr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression: " + msg, 1, static_cast<int>(pos_) + 1);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int integer() {
        skip();
        int v = 0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec != std::errc{}) fail("expected integer");
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return v;
    }

    Expr sum() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = power();
        while (accept('*')) e = e * power();
        return e;
    }

    Expr power() {
        Expr base = unary();
        if (accept('^')) {
            const int n = integer();
            if (n < 0) fail("negative exponent");
            Expr r = Expr::constant(1.0);
            for (int i = 0; i < n; ++i) r = r * base;
            return r;
        }
        return base;
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            Expr e = sum();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (c == 'x') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected agent number after 'x'");
            const int agent = integer();
            if (agent < 1) fail("agent numbers start at 1");
            int coord = 0;
            if (accept('[')) {
                coord = integer();
                if (coord < 0) fail("negative coordinate");
                if (!accept(']')) fail("expected ']'");
            }
            return Expr::variable({agent - 1, coord});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0;
            auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (res.ec != std::errc{}) fail("malformed number");
            pos_ = static_cast<std::size_t>(res.ptr - s_.data());
            return Expr::constant(v);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

}  // namespace atr
