#include "atr/scenario.hpp"

#include "atr/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace atr {

using json = nlohmann::ordered_json;

namespace {

const char* const kShapes[] = {"box", "linf_ball", "l1_ball", "l2_ball_octagon", "l2_ball"};

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

Expr var(int agent, int coord) { return Expr::variable({agent - 1, coord}); }

/// Keeps cos/sin rounding noise out of the printed expressions.
double clean(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

TimeSet parse_times(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) invalid(where + ": times must be a non-empty array");
    TimeSet out;
    for (const auto& t : j) {
        if (t.is_number_integer()) {
            out = time_union(out, {t.get<int>()});
        } else if (t.is_array() && t.size() == 2 && t[0].is_number_integer() && t[1].is_number_integer()) {
            const int a = t[0].get<int>(), b = t[1].get<int>();
            if (a > b) invalid(where + ": empty time range [" + std::to_string(a) + "," + std::to_string(b) + "]");
            out = time_union(out, time_range(a, b));
        } else {
            invalid(where + ": times entries are integers or [first, last] pairs");
        }
    }
    if (out.front() < 0) invalid(where + ": negative time");
    return out;
}

json dump_times(const TimeSet& times) {
    json out = json::array();
    for (std::size_t i = 0; i < times.size();) {
        std::size_t j = i;
        while (j + 1 < times.size() && times[j + 1] == times[j] + 1) ++j;
        if (j == i)
            out.push_back(times[i]);
        else
            out.push_back({times[i], times[j]});
        i = j + 1;
    }
    return out;
}

Matrix parse_matrix(const json& j, const std::string& where) {
    try {
        const auto rows = j.get<std::vector<std::vector<double>>>();
        if (rows.empty()) invalid(where + " is empty");
        for (const auto& r : rows)
            if (r.size() != rows.front().size()) invalid(where + " has ragged rows");
        return Matrix::from_rows(rows);
    } catch (const json::exception&) {
        invalid(where + " must be an array of numeric rows");
    }
}

json dump_matrix(const Matrix& m) {
    json out = json::array();
    for (int r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

std::vector<Box> parse_boxes(const json& j, const std::string& where) {
    std::vector<Box> out;
    if (!j.is_array()) invalid(where + " must be an array of [lo, hi] pairs");
    for (const auto& b : j) {
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            invalid(where + " must be an array of [lo, hi] pairs");
        out.push_back({b[0].get<double>(), b[1].get<double>()});
    }
    return out;
}

json dump_boxes(const std::vector<Box>& boxes) {
    json out = json::array();
    for (const auto& b : boxes) out.push_back({b.lo, b.hi});
    return out;
}

template <class T>
T field(const json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->template get<T>();
    } catch (const json::exception&) {
        invalid(std::string("field '") + key + "' has the wrong type");
    }
}

PredicateDecl parse_predicate(const std::string& label, const json& j) {
    PredicateDecl d;
    d.label = label;
    if (j.is_string()) {
        d.expr = j.get<std::string>();
        return d;
    }
    if (!j.is_object()) invalid("predicate '" + label + "' must be an expression string or a template object");
    d.shape = field<std::string>(j, "shape", "");
    if (std::find(std::begin(kShapes), std::end(kShapes), d.shape) == std::end(kShapes))
        invalid("predicate '" + label + "': unknown shape '" + d.shape + "'");
    d.agent = field<int>(j, "agent", 1);
    d.other = field<int>(j, "other", 0);
    d.coords = field<std::vector<int>>(j, "coords", {0});
    d.center = field<std::vector<double>>(j, "center", {});
    d.lo = field<std::vector<double>>(j, "lo", {});
    d.hi = field<std::vector<double>>(j, "hi", {});
    d.radius = field<double>(j, "radius", 0.0);
    d.sides = field<int>(j, "sides", 8);
    return d;
}

json dump_predicate(const PredicateDecl& d) {
    if (d.shape.empty()) return d.expr;
    json j;
    j["shape"] = d.shape;
    j["agent"] = d.agent;
    if (d.other) j["other"] = d.other;
    j["coords"] = d.coords;
    if (d.shape == "box") {
        j["lo"] = d.lo;
        j["hi"] = d.hi;
        return j;
    }
    if (!d.other) j["center"] = d.center;
    j["radius"] = d.radius;
    if (d.shape == "l2_ball_octagon") j["sides"] = d.sides;
    return j;
}

void check_refs(const Expr& e, const MultiAgentSystem& sys, const std::string& label) {
    for (const auto& [mono, coef] : e.terms())
        for (const VarRef& v : mono) {
            if (v.agent < 0 || v.agent >= sys.num_agents())
                invalid("predicate '" + label + "' reads agent " + std::to_string(v.agent + 1) + " of " +
                        std::to_string(sys.num_agents()));
            if (v.coord < 0 || v.coord >= sys.agent(v.agent).n())
                invalid("predicate '" + label + "' reads coordinate " + std::to_string(v.coord) + " of agent " +
                        std::to_string(v.agent + 1));
        }
}

}  // namespace

std::vector<Predicate> PredicateDecl::expand() const {
    if (shape.empty()) return {{label, parse_expr(expr), {}}};

    const std::size_t d = coords.size();
    if (d == 0) invalid("predicate '" + label + "' has no coordinates");
    std::vector<Predicate> out;
    auto add = [&](Expr e) { out.push_back({label + "#" + std::to_string(out.size() + 1), std::move(e), {}}); };

    if (shape == "box") {
        if (lo.size() != d || hi.size() != d) invalid("box '" + label + "' needs lo and hi per coordinate");
        for (std::size_t j = 0; j < d; ++j) {
            if (lo[j] > hi[j]) invalid("box '" + label + "' has lo > hi");
            add(var(agent, coords[j]) - Expr::constant(lo[j]));
            add(Expr::constant(hi[j]) - var(agent, coords[j]));
        }
        return out;
    }

    if (radius < 0) invalid("ball '" + label + "' has a negative radius");
    if (!other && center.size() != d) invalid("ball '" + label + "' needs a center per coordinate (or `other`)");
    std::vector<Expr> diff;
    for (std::size_t j = 0; j < d; ++j)
        diff.push_back(var(agent, coords[j]) - (other ? var(other, coords[j]) : Expr::constant(center[j])));

    if (shape == "linf_ball") {
        for (const auto& e : diff) {
            add(Expr::constant(radius) - e);
            add(Expr::constant(radius) + e);
        }
    } else if (shape == "l1_ball") {
        if (d > 16) invalid("l1 ball '" + label + "' has too many coordinates");
        for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            Expr e = Expr::constant(radius);
            for (std::size_t j = 0; j < d; ++j) e = (mask >> j & 1) ? e + diff[j] : e - diff[j];
            add(e);
        }
    } else if (shape == "l2_ball_octagon") {
        if (d != 2) invalid("polygon ball '" + label + "' needs exactly two coordinates");
        if (sides < 3) invalid("polygon ball '" + label + "' needs at least 3 sides");
        // vertices on the circle, so the polygon lies inside the ball
        const double apothem = radius * std::cos(std::numbers::pi / sides);
        for (int j = 0; j < sides; ++j) {
            const double a = 2.0 * std::numbers::pi * j / sides;
            add(Expr::constant(apothem) - Expr::constant(clean(std::cos(a))) * diff[0] -
                Expr::constant(clean(std::sin(a))) * diff[1]);
        }
    } else {
        Expr e = Expr::constant(radius * radius);
        for (const auto& x : diff) e = e - x * x;
        out.push_back({label, e, {}});
    }
    return out;
}

PredicateTable Scenario::table() const {
    PredicateTable t;
    for (const auto& d : predicates) {
        const auto members = d.expand();
        std::vector<Formula> leaves;
        for (const auto& p : members) {
            leaves.push_back(Formula::pred(p));
            if (members.size() > 1) t.emplace(p.label, leaves.back());
        }
        t.emplace(d.label, leaves.size() == 1 ? leaves.front() : Formula::conj(leaves));
    }
    return t;
}

ConstraintTask Scenario::constraint_task() const {
    std::map<std::string, const PredicateDecl*> decls;
    for (const auto& d : predicates) decls.emplace(d.label, &d);
    ConstraintTask task;
    for (const auto& p : pieces) {
        ConstraintPiece piece{p.name, {}, p.times};
        for (const auto& m : p.members) {
            const auto it = decls.find(m);
            if (it == decls.end()) invalid("piece '" + p.name + "' uses undeclared predicate '" + m + "'");
            for (auto& pr : it->second->expand()) piece.members.push_back(std::move(pr));
        }
        task.pieces.push_back(std::move(piece));
    }
    return task;
}

Formula Scenario::stl() const { return parse_formula(formula, table()); }

Task Scenario::task() const {
    if (is_stl()) return stl();
    return constraint_task();
}

int Scenario::effective_horizon() const {
    if (is_stl()) return std::max(atr::horizon(stl()), 1);
    return std::max({constraint_task().max_time(), horizon, 1});
}

EncoderConfig Scenario::encoder_config(Method method) const {
    EncoderConfig c;
    c.M = M;
    c.eps = eps;
    c.method = method;
    c.merge_boundary = merge_boundary;
    c.horizon = horizon;
    c.objective = objective;
    return c;
}

void Scenario::validate() const {
    system.validate();
    bound.validate();
    if (eps <= 0) invalid("eps must be positive");
    if (M < 0) invalid("M must be non-negative");
    if (is_stl() == !pieces.empty()) invalid("scenario needs exactly one of a formula or constraint pieces");

    std::map<std::string, int> seen;
    for (const auto& d : predicates) {
        if (++seen[d.label] > 1) invalid("predicate '" + d.label + "' declared twice");
        if (!d.shape.empty() && (d.agent < 1 || d.agent > system.num_agents() || d.other < 0 ||
                                 d.other > system.num_agents() || d.other == d.agent))
            invalid("predicate '" + d.label + "' names an agent outside 1.." + std::to_string(system.num_agents()));
        for (const auto& p : d.expand()) check_refs(p.expr, system, d.label);
    }

    const int nx = system.num_agents() ? system.agent(0).n() : 0;
    for (int c : position_coords)
        for (const auto& a : system.agents())
            if (c < 0 || c >= std::min(nx, a.n())) invalid("position coordinate " + std::to_string(c) + " out of range");

    if (is_stl()) {
        const Formula f = stl();
        if (horizon != 0 && horizon != atr::horizon(f))
            invalid("horizon " + std::to_string(horizon) + " differs from the formula horizon " +
                    std::to_string(atr::horizon(f)));
    } else {
        const ConstraintTask t = constraint_task();
        t.validate();
        if (horizon != 0 && horizon < t.max_time())
            invalid("horizon " + std::to_string(horizon) + " is shorter than the last constrained instant " +
                    std::to_string(t.max_time()));
    }
    if (objective.kind != ObjectiveSpec::Kind::input_l1 && objective.kind != ObjectiveSpec::Kind::input_linf &&
        objective.state_weights.size() > static_cast<std::size_t>(system.state_dim()))
        invalid("more state weights than state coordinates");
    if (objective.input_weights.size() > static_cast<std::size_t>(system.input_dim()))
        invalid("more input weights than input coordinates");
}

Scenario scenario_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offsets only; report them as a column on line 1
        throw ParseError(std::string("malformed scenario JSON: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    if (!j.is_object()) invalid("scenario must be a JSON object");

    Scenario s;
    s.name = field<std::string>(j, "name", "scenario");
    s.horizon = field<int>(j, "horizon", 0);

    if (!j.contains("system") || !j["system"].contains("agents")) invalid("scenario needs system.agents");
    std::vector<AgentModel> agents;
    std::vector<double> x0;
    for (const auto& a : j["system"]["agents"]) {
        AgentModel m{parse_matrix(a.at("A"), "A"), parse_matrix(a.at("B"), "B"),
                     parse_boxes(a.at("state_box"), "state_box"), parse_boxes(a.at("input_box"), "input_box")};
        auto init = field<std::vector<double>>(a, "x0", std::vector<double>(static_cast<std::size_t>(m.n()), 0.0));
        const int count = field<int>(a, "count", 1);
        if (count < 1) invalid("agent count must be positive");
        for (int c = 0; c < count; ++c) {
            agents.push_back(m);
            x0.insert(x0.end(), init.begin(), init.end());
        }
    }
    if (agents.empty()) invalid("scenario has no agents");
    s.system = MultiAgentSystem(std::move(agents), std::move(x0));

    if (j.contains("predicates")) {
        if (!j["predicates"].is_object()) invalid("predicates must be an object");
        for (const auto& [label, decl] : j["predicates"].items()) s.predicates.push_back(parse_predicate(label, decl));
    }

    if (!j.contains("task")) invalid("scenario needs a task");
    const json& task = j["task"];
    s.formula = field<std::string>(task, "formula", "");
    if (task.contains("pieces"))
        for (const auto& p : task["pieces"]) {
            PieceDecl piece;
            piece.name = field<std::string>(p, "name", "c" + std::to_string(s.pieces.size() + 1));
            piece.members = field<std::vector<std::string>>(p, "members", {});
            if (!p.contains("times")) invalid("piece '" + piece.name + "' has no times");
            piece.times = parse_times(p["times"], "piece '" + piece.name + "'");
            s.pieces.push_back(std::move(piece));
        }

    const auto bound = field<std::vector<int>>(j, "bound", {0, 0});
    if (bound.size() != 2) invalid("bound must be [theta1, theta2]");
    s.bound = {bound[0], bound[1]};

    if (j.contains("objective")) {
        const json& o = j["objective"];
        s.objective.kind = parse_objective_kind(field<std::string>(o, "kind", "input_l1"));
        s.objective.input_weights = field<std::vector<double>>(o, "input_weights", {});
        s.objective.state_weights = field<std::vector<double>>(o, "state_weights", {});
    }
    if (j.contains("encoder")) {
        const json& e = j["encoder"];
        s.M = field<double>(e, "M", 0.0);
        s.eps = field<double>(e, "eps", 1e-4);
        s.merge_boundary = field<bool>(e, "merge_boundary", false);
    }
    if (j.contains("solver")) {
        const json& o = j["solver"];
        s.solver.time_cap = field<double>(o, "time_cap", s.solver.time_cap);
        s.solver.node_cap = field<long>(o, "node_cap", s.solver.node_cap);
        s.solver.rel_gap = field<double>(o, "rel_gap", s.solver.rel_gap);
    }
    s.position_coords = field<std::vector<int>>(j, "positions", {0});
    s.validate();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    if (s.horizon) j["horizon"] = s.horizon;
    json agents = json::array();
    for (int i = 0; i < s.system.num_agents(); ++i) {
        const AgentModel& a = s.system.agent(i);
        const auto first = s.system.x0().begin() + s.system.state_offset(i);
        agents.push_back({{"A", dump_matrix(a.A)},
                          {"B", dump_matrix(a.B)},
                          {"state_box", dump_boxes(a.state_box)},
                          {"input_box", dump_boxes(a.input_box)},
                          {"x0", std::vector<double>(first, first + a.n())}});
    }
    j["system"] = {{"agents", agents}};
    json preds = json::object();
    for (const auto& d : s.predicates) preds[d.label] = dump_predicate(d);
    j["predicates"] = preds;
    if (s.is_stl()) {
        j["task"] = {{"formula", s.formula}};
    } else {
        json pieces = json::array();
        for (const auto& p : s.pieces)
            pieces.push_back({{"name", p.name}, {"members", p.members}, {"times", dump_times(p.times)}});
        j["task"] = {{"pieces", pieces}};
    }
    j["bound"] = {s.bound.theta1, s.bound.theta2};
    j["objective"] = {{"kind", to_string(s.objective.kind)},
                      {"input_weights", s.objective.input_weights},
                      {"state_weights", s.objective.state_weights}};
    j["encoder"] = {{"M", s.M}, {"eps", s.eps}, {"merge_boundary", s.merge_boundary}};
    j["solver"] = {{"time_cap", s.solver.time_cap}, {"node_cap", s.solver.node_cap}, {"rel_gap", s.solver.rel_gap}};
    j["positions"] = s.position_coords;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << scenario_to_json(s);
}

}  // namespace atr
