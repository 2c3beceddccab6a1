#include "atr/mip/lp_format.hpp"

#include "atr/errors.hpp"
#include "atr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace atr::mip {

namespace {

/// Accumulates " + 3 x" style terms and wraps long lines at term boundaries.
class LineWriter {
public:
    explicit LineWriter(std::ostream& out) : out_(out) {}

    void start(const std::string& head) {
        line_ = head;
        first_ = true;
    }

    void term(double coef, const std::string& body) {
        std::string t = first_ ? std::string(coef < 0 ? " -" : " ") : std::string(coef < 0 ? " - " : " + ");
        t += format_double(std::fabs(coef));
        if (!body.empty()) t += " " + body;
        append(t);
        first_ = false;
    }

    void raw(const std::string& text, bool restart_terms = false) {
        append(text);
        if (restart_terms) first_ = true;
    }

    bool empty() const { return first_; }

    void end() {
        out_ << line_ << '\n';
        line_.clear();
    }

private:
    void append(const std::string& piece) {
        if (line_.size() + piece.size() > 240 && !line_.empty()) {
            out_ << line_ << '\n';
            line_ = "  ";
        }
        line_ += piece;
    }

    std::ostream& out_;
    std::string line_;
    bool first_ = true;
};

std::string bound_text(double v) {
    if (v == inf) return "+inf";
    if (v == -inf) return "-inf";
    return format_double(v);
}

}  // namespace

void write_lp(std::ostream& out, const MipModel& model) {
    const auto& vars = model.variables();
    const auto& obj = model.objective();
    LineWriter w(out);

    out << "\\ generated by atr\nMinimize\n";
    w.start(" obj:");
    for (std::size_t j = 0; j < vars.size(); ++j)
        if (obj.linear[j] != 0.0) w.term(obj.linear[j], vars[j].name);
    if (obj.constant != 0.0 || (w.empty() && obj.quadratic.empty())) w.term(obj.constant, "");
    if (!obj.quadratic.empty()) {
        w.raw(w.empty() ? " [" : " + [", true);
        for (const auto& q : obj.quadratic) {
            const auto& a = vars[static_cast<std::size_t>(q.i)].name;
            const auto& b = vars[static_cast<std::size_t>(q.j)].name;
            w.term(q.coef, q.i == q.j ? a + " ^ 2" : a + " * " + b);
        }
        w.raw(" ] / 2");
    }
    w.end();

    out << "Subject To\n";
    for (const auto& r : model.constraints()) {
        w.start(" " + r.name + ":");
        if (r.terms.empty()) {
            if (vars.empty()) throw ValidationError("cannot write constraint '" + r.name + "' of a model without variables");
            w.term(0.0, vars.front().name);
        }
        for (const auto& t : r.terms) w.term(t.coef, vars[static_cast<std::size_t>(t.var)].name);
        w.raw(std::string(" ") + to_string(r.rel) + " " + format_double(r.rhs));
        w.end();
    }

    out << "Bounds\n";
    for (const auto& v : vars) {
        if (v.lo == -inf && v.hi == inf)
            out << ' ' << v.name << " free\n";
        else if (v.lo == v.hi)
            out << ' ' << v.name << " = " << format_double(v.lo) << '\n';
        else
            out << ' ' << bound_text(v.lo) << " <= " << v.name << " <= " << bound_text(v.hi) << '\n';
    }

    out << "Binaries\n";
    for (const auto& v : vars)
        if (v.kind == VarKind::binary) out << ' ' << v.name << '\n';
    out << "Generals\nEnd\n";
}

void export_model(const MipModel& model, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    write_lp(f, model);
    f.flush();
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum Kind { ident, number, op, end } kind = end;
    std::string text;
    double value = 0.0;
    int line = 1;
    int col = 1;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '\\') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            const std::string rest(s.substr(i, std::min<std::size_t>(64, s.size() - i)));
            char* endp = nullptr;
            t.value = std::strtod(rest.c_str(), &endp);
            const auto len = static_cast<std::size_t>(endp - rest.c_str());
            t.kind = Token::number;
            t.text = rest.substr(0, len);
            advance(len);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
            t.kind = Token::ident;
            t.text = std::string(s.substr(i, j - i));
            advance(j - i);
        } else {
            static const char* two[] = {"<=", "=<", ">=", "=>"};
            t.kind = Token::op;
            for (const char* op : two)
                if (s.substr(i, 2) == op) t.text = op;
            if (t.text.empty()) {
                if (std::string_view("<>=+-*^[]/:").find(c) == std::string_view::npos)
                    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
                t.text = std::string(1, c);
            }
            const std::size_t consumed = t.text.size();
            if (t.text == "=<") t.text = "<=";
            if (t.text == "=>") t.text = ">=";
            if (t.text == "<") t.text = "<=";
            if (t.text == ">") t.text = ">=";
            advance(consumed);
        }
        out.push_back(std::move(t));
    }
    Token e;
    e.line = line;
    e.col = col;
    out.push_back(e);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

enum class Section { none, objective, rows, bounds, binaries, generals, end };

class LpReader {
public:
    explicit LpReader(std::string_view text) : toks_(tokenize(text)) {}

    MipModel read() {
        split_sections();
        // Bounds first so that ids follow the Bounds order.
        for (const auto& [begin, end] : ranges_[Section::bounds]) parse_bounds(begin, end);
        for (const auto& [begin, end] : ranges_[Section::objective]) parse_objective(begin, end);
        for (const auto& [begin, end] : ranges_[Section::rows]) parse_rows(begin, end);
        for (const auto& [begin, end] : ranges_[Section::binaries])
            for (std::size_t p = begin; p < end; ++p) {
                expect_ident(p);
                binary_.push_back(var(toks_[p].text));
            }
        for (const auto& [begin, end] : ranges_[Section::generals])
            if (begin < end) fail(toks_[begin], "general integer variables are not supported");

        MipModel m;
        for (std::size_t j = 0; j < names_.size(); ++j) {
            const bool is_bin = std::find(binary_.begin(), binary_.end(), static_cast<int>(j)) != binary_.end();
            double lo = lo_[j], hi = hi_[j];
            if (is_bin && !bounded_[j]) lo = 0.0, hi = 1.0;
            m.add_variable(names_[j], is_bin ? VarKind::binary : VarKind::continuous, lo, hi);
        }
        for (std::size_t j = 0; j < obj_.size(); ++j) m.set_objective_coef(static_cast<int>(j), obj_[j]);
        m.set_objective_constant(constant_);
        for (const auto& q : quad_) m.add_quadratic(q.i, q.j, q.coef);
        for (auto& r : rows_) m.add_constraint(r.name, std::move(r.terms), r.rel, r.rhs);
        return m;
    }

private:
    struct RowData {
        std::string name;
        std::vector<Term> terms;
        Relation rel;
        double rhs;
    };

    std::vector<Token> toks_;
    std::map<Section, std::vector<std::pair<std::size_t, std::size_t>>> ranges_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
    std::vector<double> lo_, hi_, obj_;
    std::vector<bool> bounded_;
    std::vector<int> binary_;
    std::vector<QuadTerm> quad_;
    double constant_ = 0.0;
    std::vector<RowData> rows_;

    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.col); }

    int var(const std::string& name) {
        const auto [it, inserted] = ids_.emplace(name, static_cast<int>(names_.size()));
        if (inserted) {
            names_.push_back(name);
            lo_.push_back(0.0);
            hi_.push_back(inf);
            obj_.push_back(0.0);
            bounded_.push_back(false);
        }
        return it->second;
    }

    void expect_ident(std::size_t p) const {
        if (toks_[p].kind != Token::ident) fail(toks_[p], "expected a variable name");
    }

    /// Section keyword at p; `width` receives its token count.
    std::optional<Section> keyword(std::size_t p, std::size_t& width) const {
        if (toks_[p].kind != Token::ident) return std::nullopt;
        const std::string w = lower(toks_[p].text);
        width = 1;
        if (w == "minimize" || w == "minimum" || w == "min") return Section::objective;
        if (w == "maximize" || w == "maximum" || w == "max") fail(toks_[p], "maximization is not supported");
        auto next_is = [&](const char* word) {
            return toks_[p + 1].kind == Token::ident && lower(toks_[p + 1].text) == word;
        };
        if ((w == "subject" && next_is("to")) || (w == "such" && next_is("that"))) {
            width = 2;
            return Section::rows;
        }
        if (w == "st" || w == "s.t.") return Section::rows;
        if (w == "bounds" || w == "bound") return Section::bounds;
        if (w == "binaries" || w == "binary" || w == "bin") return Section::binaries;
        if (w == "generals" || w == "general" || w == "gen") return Section::generals;
        if (w == "end") return Section::end;
        return std::nullopt;
    }

    void split_sections() {
        Section current = Section::none;
        std::size_t begin = 0;
        for (std::size_t p = 0;; ++p) {
            std::size_t width = 0;
            const bool at_end = toks_[p].kind == Token::end;
            const auto kw = at_end ? std::optional<Section>(Section::end) : keyword(p, width);
            if (!kw) continue;
            if (current == Section::none && p > begin) fail(toks_[begin], "expected a section keyword");
            if (current != Section::none) ranges_[current].emplace_back(begin, p);
            if (*kw == Section::end) {
                if (!at_end && toks_[p + 1].kind != Token::end) fail(toks_[p + 1], "text after End");
                break;
            }
            current = *kw;
            begin = p + width;
            p += width - 1;
        }
        if (ranges_[Section::objective].empty()) fail(toks_.front(), "missing Minimize section");
    }

    double signed_number(std::size_t& p) const {
        double sign = 1.0;
        while (toks_[p].kind == Token::op && (toks_[p].text == "+" || toks_[p].text == "-")) {
            if (toks_[p].text == "-") sign = -sign;
            ++p;
        }
        const Token& t = toks_[p];
        if (t.kind == Token::number) {
            ++p;
            return sign * t.value;
        }
        if (t.kind == Token::ident && (lower(t.text) == "inf" || lower(t.text) == "infinity")) {
            ++p;
            return sign * inf;
        }
        fail(t, "expected a number");
    }

    bool is_op(std::size_t p, const char* op) const { return toks_[p].kind == Token::op && toks_[p].text == op; }

    /// [sign] [number] (ident | ident ^ 2 | ident * ident) or a bare constant.
    struct ParsedTerm {
        double coef = 1.0;
        int a = -1;
        int b = -1;  // second factor of a quadratic term
    };

    ParsedTerm term(std::size_t& p, std::size_t end, bool first, bool quadratic) {
        ParsedTerm t;
        bool signed_ = false;
        while (p < end && (is_op(p, "+") || is_op(p, "-"))) {
            if (is_op(p, "-")) t.coef = -t.coef;
            signed_ = true;
            ++p;
        }
        if (!signed_ && !first) fail(toks_[p], "expected '+' or '-'");
        if (p < end && toks_[p].kind == Token::number) t.coef *= toks_[p++].value;
        if (p < end && toks_[p].kind == Token::ident) {
            t.a = var(toks_[p++].text);
            if (quadratic) {
                if (p < end && is_op(p, "^")) {
                    if (p + 1 >= end || toks_[p + 1].kind != Token::number || toks_[p + 1].value != 2.0)
                        fail(toks_[p], "only squares are supported");
                    t.b = t.a;
                    p += 2;
                } else if (p < end && is_op(p, "*")) {
                    ++p;
                    if (p >= end) fail(toks_[p], "expected a variable name");
                    expect_ident(p);
                    t.b = var(toks_[p++].text);
                } else {
                    fail(toks_[p], "expected '^' or '*' in a quadratic term");
                }
            }
        } else if (quadratic) {
            fail(toks_[p], "expected a variable name");
        }
        return t;
    }

    void parse_objective(std::size_t p, std::size_t end) {
        if (p + 1 < end && toks_[p].kind == Token::ident && is_op(p + 1, ":")) p += 2;
        bool first = true;
        while (p < end) {
            if (is_op(p, "[") || ((is_op(p, "+")) && p + 1 < end && is_op(p + 1, "["))) {
                p += is_op(p, "[") ? 1 : 2;
                bool qfirst = true;
                while (p < end && !is_op(p, "]")) {
                    const ParsedTerm t = term(p, end, qfirst, true);
                    quad_.push_back({std::min(t.a, t.b), std::max(t.a, t.b), t.coef});
                    qfirst = false;
                }
                if (p + 2 >= end || !is_op(p, "]") || !is_op(p + 1, "/") || toks_[p + 2].kind != Token::number ||
                    toks_[p + 2].value != 2.0)
                    fail(toks_[std::min(p, end)], "expected '] / 2' after the quadratic block");
                p += 3;
                first = false;
                continue;
            }
            const ParsedTerm t = term(p, end, first, false);
            if (t.a < 0)
                constant_ += t.coef;
            else
                obj_[static_cast<std::size_t>(t.a)] += t.coef;
            first = false;
        }
    }

    void parse_rows(std::size_t p, std::size_t end) {
        while (p < end) {
            RowData r;
            if (p + 1 < end && toks_[p].kind == Token::ident && is_op(p + 1, ":")) {
                r.name = toks_[p].text;
                p += 2;
            } else {
                r.name = "R" + std::to_string(rows_.size() + 1);
            }
            bool first = true;
            while (p < end && !(is_op(p, "<=") || is_op(p, ">=") || is_op(p, "="))) {
                const ParsedTerm t = term(p, end, first, false);
                if (t.a < 0) fail(toks_[p - 1], "constants are not allowed on the left-hand side");
                r.terms.push_back({t.a, t.coef});
                first = false;
            }
            if (p >= end) fail(toks_[end], "expected a relation");
            r.rel = is_op(p, "<=") ? Relation::le : is_op(p, ">=") ? Relation::ge : Relation::eq;
            ++p;
            r.rhs = signed_number(p);
            if (p > end) fail(toks_[end], "unterminated constraint");
            rows_.push_back(std::move(r));
        }
    }

    void parse_bounds(std::size_t p, std::size_t end) {
        auto set = [&](int v, const char* rel, double x) {
            const auto j = static_cast<std::size_t>(v);
            bounded_[j] = true;
            if (std::string_view(rel) == "<=") hi_[j] = x;
            if (std::string_view(rel) == ">=") lo_[j] = x;
            if (std::string_view(rel) == "=") lo_[j] = hi_[j] = x;
        };
        while (p < end) {
            const Token& t = toks_[p];
            const bool name_first = t.kind == Token::ident && lower(t.text) != "inf" && lower(t.text) != "infinity";
            if (name_first) {
                const int v = var(t.text);
                ++p;
                if (p < end && toks_[p].kind == Token::ident && lower(toks_[p].text) == "free") {
                    lo_[static_cast<std::size_t>(v)] = -inf;
                    hi_[static_cast<std::size_t>(v)] = inf;
                    bounded_[static_cast<std::size_t>(v)] = true;
                    ++p;
                    continue;
                }
                const char* rel = is_op(p, "<=") ? "<=" : is_op(p, ">=") ? ">=" : is_op(p, "=") ? "=" : nullptr;
                if (!rel || p >= end) fail(toks_[p], "expected a bound relation");
                ++p;
                set(v, rel, signed_number(p));
                continue;
            }
            const double a = signed_number(p);
            if (p >= end) fail(toks_[p], "expected a bound relation");
            const char* rel = is_op(p, "<=") ? ">=" : is_op(p, ">=") ? "<=" : is_op(p, "=") ? "=" : nullptr;
            if (!rel) fail(toks_[p], "expected a bound relation");
            ++p;
            expect_ident(p);
            const int v = var(toks_[p].text);
            ++p;
            set(v, rel, a);
            if (p < end && (is_op(p, "<=") || is_op(p, ">="))) {
                const char* rel2 = is_op(p, "<=") ? "<=" : ">=";
                ++p;
                set(v, rel2, signed_number(p));
            }
        }
    }
};

}  // namespace

MipModel read_lp(std::string_view text) { return LpReader(text).read(); }

MipModel import_model(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return read_lp(ss.str());
}

}  // namespace atr::mip
