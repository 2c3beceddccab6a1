#include "atr/formula.hpp"

#include "atr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace atr {

TimeSet time_range(int first, int last) {
    TimeSet out;
    for (int k = first; k <= last; ++k) out.push_back(k);
    return out;
}

TimeSet time_union(const TimeSet& a, const TimeSet& b) {
    TimeSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

TimeSet dilate(const TimeSet& set, int lo, int hi) {
    std::set<int> acc;
    for (int s : set)
        for (int d = lo; d <= hi; ++d) acc.insert(s + d);
    return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------------------
// Formula construction

Formula Formula::make(Op op, Interval iv, std::vector<Formula> children) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->interval = iv;
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::truth() { return make(Op::True, {}, {}); }

Formula Formula::pred(Predicate p) {
    auto n = std::make_shared<Node>();
    n->op = Op::Pred;
    n->predicate = std::make_shared<const Predicate>(std::move(p));
    return Formula(std::move(n));
}

Formula Formula::negation(Formula child) { return make(Op::Not, {}, {std::move(child)}); }

Formula Formula::conj(std::vector<Formula> children) {
    if (children.empty()) throw ValidationError("conjunction needs at least one operand");
    return make(Op::And, {}, std::move(children));
}

Formula Formula::disj(std::vector<Formula> children) {
    if (children.empty()) throw ValidationError("disjunction needs at least one operand");
    return make(Op::Or, {}, std::move(children));
}

namespace {

void check_interval(Interval iv) {
    if (iv.lo < 0 || iv.lo > iv.hi)
        throw ValidationError("malformed interval [" + std::to_string(iv.lo) + "," +
                              std::to_string(iv.hi) + "]");
}

}  // namespace

Formula Formula::always(Interval iv, Formula child) {
    check_interval(iv);
    return make(Op::Always, iv, {std::move(child)});
}

Formula Formula::eventually(Interval iv, Formula child) {
    check_interval(iv);
    return make(Op::Eventually, iv, {std::move(child)});
}

Formula Formula::until(Interval iv, Formula left, Formula right) {
    check_interval(iv);
    return make(Op::Until, iv, {std::move(left), std::move(right)});
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (op() != other.op() || !(interval() == other.interval())) return false;
    if (op() == Op::Pred)
        return predicate().label == other.predicate().label &&
               predicate().expr == other.predicate().expr;
    return children() == other.children();
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

Formula flatten(Op op, std::vector<Formula> parts) {
    std::vector<Formula> flat;
    for (auto& p : parts) {
        if (p.op() == op)
            flat.insert(flat.end(), p.children().begin(), p.children().end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.size() == 1) return flat.front();
    return op == Op::And ? Formula::conj(std::move(flat)) : Formula::disj(std::move(flat));
}

Formula nnf(const Formula& f, bool negate) {
    switch (f.op()) {
        case Op::True:
            if (negate) throw ValidationError("negation of 'true' is not representable");
            return f;
        case Op::Pred:
            return negate ? Formula::negation(f) : f;
        case Op::Not:
            return nnf(f.children().front(), !negate);
        case Op::And:
        case Op::Or: {
            std::vector<Formula> parts;
            for (const auto& c : f.children()) parts.push_back(nnf(c, negate));
            const bool conj = (f.op() == Op::And) != negate;
            return flatten(conj ? Op::And : Op::Or, std::move(parts));
        }
        case Op::Always:
            return negate ? Formula::eventually(f.interval(), nnf(f.children().front(), true))
                          : Formula::always(f.interval(), nnf(f.children().front(), false));
        case Op::Eventually:
            return negate ? Formula::always(f.interval(), nnf(f.children().front(), true))
                          : Formula::eventually(f.interval(), nnf(f.children().front(), false));
        case Op::Until: {
            const auto& l = f.children()[0];
            const auto& r = f.children()[1];
            if (!negate) return Formula::until(f.interval(), nnf(l, false), nnf(r, false));
            std::vector<Formula> parts;
            for (int j = f.interval().lo; j <= f.interval().hi; ++j) {
                parts.push_back(flatten(Op::Or, {Formula::always({j, j}, nnf(r, true)),
                                                 Formula::eventually({0, j}, nnf(l, true))}));
            }
            return flatten(Op::And, std::move(parts));
        }
    }
    return f;
}

}  // namespace

Formula normalize(const Formula& f) { return nnf(f, false); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { True, Ident, Not, And, Or, LParen, RParen, Always, Eventually, Until, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Interval interval;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= s_.size()) return t;
        const char c = s_[pos_];
        switch (c) {
            case '!': advance(); t.kind = Tok::Not; return t;
            case '&': advance(); t.kind = Tok::And; return t;
            case '|': advance(); t.kind = Tok::Or; return t;
            case '(': advance(); t.kind = Tok::LParen; return t;
            case ')': advance(); t.kind = Tok::RParen; return t;
            default: break;
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
            throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        std::string word;
        while (pos_ < s_.size()) {
            const char d = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '#' || d == '.') {
                word += d;
                advance();
            } else {
                break;
            }
        }
        if (word == "G" || word == "F" || word == "U") {
            skip_space();
            if (pos_ < s_.size() && s_[pos_] == '[') {
                t.kind = word == "G" ? Tok::Always : word == "F" ? Tok::Eventually : Tok::Until;
                t.interval = interval();
                t.text = word;
                return t;
            }
        }
        t.kind = word == "true" ? Tok::True : Tok::Ident;
        t.text = std::move(word);
        return t;
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "' in interval", line_, col_);
        advance();
    }

    int bound() {
        skip_space();
        const int line = line_, col = col_;
        if (pos_ < s_.size() && s_[pos_] == '-')
            throw ParseError("malformed interval: negative bound", line, col);
        int v = 0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec != std::errc{}) throw ParseError("malformed interval: expected integer", line, col);
        const auto n = static_cast<std::size_t>(res.ptr - (s_.data() + pos_));
        for (std::size_t i = 0; i < n; ++i) advance();
        return v;
    }

    Interval interval() {
        const int line = line_, col = col_;
        expect('[');
        Interval iv;
        iv.lo = bound();
        expect(',');
        iv.hi = bound();
        expect(']');
        if (iv.lo > iv.hi)
            throw ParseError("malformed interval: lower bound exceeds upper bound", line, col);
        return iv;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::string_view s, const PredicateTable& table) : lex_(s), table_(table) {
        cur_ = lex_.next();
    }

    Formula parse() {
        Formula f = disjunction();
        if (cur_.kind != Tok::End) fail("unexpected token");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, cur_.line, cur_.column);
    }

    void shift() { cur_ = lex_.next(); }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (cur_.kind == Tok::Or) {
            shift();
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? parts.front() : Formula::disj(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{until()};
        while (cur_.kind == Tok::And) {
            shift();
            parts.push_back(until());
        }
        return parts.size() == 1 ? parts.front() : Formula::conj(std::move(parts));
    }

    Formula until() {
        Formula left = unary();
        while (cur_.kind == Tok::Until) {
            const Interval iv = cur_.interval;
            shift();
            left = Formula::until(iv, left, unary());
        }
        return left;
    }

    Formula unary() {
        switch (cur_.kind) {
            case Tok::Not: {
                shift();
                return Formula::negation(unary());
            }
            case Tok::Always:
            case Tok::Eventually: {
                const Tok kind = cur_.kind;
                const Interval iv = cur_.interval;
                shift();
                Formula child = unary();
                return kind == Tok::Always ? Formula::always(iv, child) : Formula::eventually(iv, child);
            }
            default:
                return primary();
        }
    }

    Formula primary() {
        switch (cur_.kind) {
            case Tok::True:
                shift();
                return Formula::truth();
            case Tok::Ident: {
                auto it = table_.find(cur_.text);
                if (it == table_.end()) fail("unknown predicate label '" + cur_.text + "'");
                shift();
                return it->second;
            }
            case Tok::LParen: {
                shift();
                Formula f = disjunction();
                if (cur_.kind != Tok::RParen) fail("expected ')'");
                shift();
                return f;
            }
            case Tok::End:
                fail("unexpected end of formula");
            default:
                fail("unexpected token");
        }
    }

    Lexer lex_;
    const PredicateTable& table_;
    Token cur_;
};

}  // namespace

Formula parse_formula(std::string_view text, const PredicateTable& table) {
    return normalize(Parser(text, table).parse());
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string interval_text(const Interval& iv) {
    return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

std::string print(const Formula& f, bool top);

std::string operand(const Formula& f) { return print(f, false); }

std::string print(const Formula& f, bool top) {
    switch (f.op()) {
        case Op::True: return "true";
        case Op::Pred: return f.predicate().label;
        case Op::Not: return "!" + operand(f.children().front());
        case Op::Always: return "G" + interval_text(f.interval()) + " " + operand(f.children().front());
        case Op::Eventually:
            return "F" + interval_text(f.interval()) + " " + operand(f.children().front());
        case Op::Until: {
            std::string s = operand(f.children()[0]) + " U" + interval_text(f.interval()) + " " +
                            operand(f.children()[1]);
            return top ? s : "(" + s + ")";
        }
        case Op::And:
        case Op::Or: {
            const char* sep = f.op() == Op::And ? " & " : " | ";
            std::string s;
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) s += sep;
                s += operand(f.children()[i]);
            }
            return top ? s : "(" + s + ")";
        }
    }
    return {};
}

}  // namespace

std::string to_string(const Formula& f) { return print(f, true); }

// ---------------------------------------------------------------------------
// Horizon and instant propagation

int horizon(const Formula& f) {
    switch (f.op()) {
        case Op::True:
        case Op::Pred: return 0;
        case Op::Not: return horizon(f.children().front());
        case Op::And:
        case Op::Or: {
            int h = 0;
            for (const auto& c : f.children()) h = std::max(h, horizon(c));
            return h;
        }
        case Op::Always:
        case Op::Eventually: return f.interval().hi + horizon(f.children().front());
        case Op::Until:
            return f.interval().hi + std::max(horizon(f.children()[0]), horizon(f.children()[1]));
    }
    return 0;
}

namespace {

void collect(const Formula& f, std::vector<const Formula*>& out) {
    out.push_back(&f);
    for (const auto& c : f.children()) collect(c, out);
}

void propagate(const Formula& f, const TimeSet& needed, std::vector<TimeSet>& out) {
    out.push_back(needed);
    switch (f.op()) {
        case Op::Always:
        case Op::Eventually:
            propagate(f.children().front(), dilate(needed, f.interval().lo, f.interval().hi), out);
            break;
        case Op::Until:
            propagate(f.children()[0], dilate(needed, 0, f.interval().hi), out);
            propagate(f.children()[1], dilate(needed, f.interval().lo, f.interval().hi), out);
            break;
        default:
            for (const auto& c : f.children()) propagate(c, needed, out);
            break;
    }
}

}  // namespace

std::vector<const Formula*> preorder(const Formula& f) {
    std::vector<const Formula*> out;
    collect(f, out);
    return out;
}

std::vector<TimeSet> required_instants(const Formula& f, int root_instant) {
    std::vector<TimeSet> out;
    propagate(f, TimeSet{root_instant}, out);
    return out;
}

// ---------------------------------------------------------------------------

int ConstraintTask::max_time() const {
    int t = 0;
    for (const auto& p : pieces)
        if (!p.times.empty()) t = std::max(t, p.times.back());
    return t;
}

void ConstraintTask::validate() const {
    for (const auto& p : pieces) {
        if (p.times.empty()) throw ValidationError("constraint piece '" + p.name + "' has no times");
        if (p.members.empty())
            throw ValidationError("constraint piece '" + p.name + "' has no members");
        if (!std::is_sorted(p.times.begin(), p.times.end()) ||
            std::adjacent_find(p.times.begin(), p.times.end()) != p.times.end())
            throw ValidationError("constraint piece '" + p.name + "' times must be sorted and unique");
        if (p.times.front() < 0)
            throw ValidationError("constraint piece '" + p.name + "' has a negative time");
    }
}

}  // namespace atr
