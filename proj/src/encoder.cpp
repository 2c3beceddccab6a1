#include "atr/encoder.hpp"

#include "atr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace atr {

using mip::Relation;
using mip::Term;

const char* to_string(ObjectiveSpec::Kind k) {
    switch (k) {
        case ObjectiveSpec::Kind::input_l1: return "input_l1";
        case ObjectiveSpec::Kind::input_linf: return "input_linf";
        case ObjectiveSpec::Kind::linear: return "linear";
        default: return "exported_quadratic";
    }
}

ObjectiveSpec::Kind parse_objective_kind(const std::string& s) {
    if (s == "input_l1") return ObjectiveSpec::Kind::input_l1;
    if (s == "input_linf") return ObjectiveSpec::Kind::input_linf;
    if (s == "linear") return ObjectiveSpec::Kind::linear;
    if (s == "exported_quadratic" || s == "quadratic") return ObjectiveSpec::Kind::exported_quadratic;
    throw ValidationError("unknown objective kind '" + s + "'");
}

int VarMaps::state_var(int agent, int coord, int k) const {
    if (k < 0) k = 0;
    if (k > horizon + extension)
        throw ExtensionError("index " + std::to_string(k) + " is past the allocated extension (T=" +
                             std::to_string(horizon) + ", " + std::to_string(extension) + " extension states)");
    return state[static_cast<std::size_t>(k)][static_cast<std::size_t>(state_offset[static_cast<std::size_t>(agent)] + coord)];
}

int EncodedProblem::binary(int node, int k, const ShiftVector& kappa) const {
    const auto& idx = node_index.at(static_cast<std::size_t>(node));
    const int id = idx.find(k, kappa);
    return id < 0 ? -1 : node_binaries[static_cast<std::size_t>(node)][static_cast<std::size_t>(id)];
}

std::vector<Box> state_ranges(const MultiAgentSystem& sys, int extension) {
    std::vector<Box> hull;
    for (int i = 0; i < sys.num_agents(); ++i) {
        const AgentModel& a = sys.agent(i);
        std::vector<Box> cur = a.state_box;
        std::vector<Box> agent_hull = cur;
        for (int p = 0; p < extension; ++p) {
            std::vector<Box> next(static_cast<std::size_t>(a.n()));
            for (int r = 0; r < a.n(); ++r) {
                double lo = 0.0, hi = 0.0;
                for (int c = 0; c < a.n(); ++c) {
                    const double v1 = a.A(r, c) * cur[static_cast<std::size_t>(c)].lo;
                    const double v2 = a.A(r, c) * cur[static_cast<std::size_t>(c)].hi;
                    lo += std::min(v1, v2);
                    hi += std::max(v1, v2);
                }
                next[static_cast<std::size_t>(r)] = {lo, hi};
                auto& h = agent_hull[static_cast<std::size_t>(r)];
                h.lo = std::min(h.lo, lo);
                h.hi = std::max(h.hi, hi);
            }
            cur = std::move(next);
        }
        hull.insert(hull.end(), agent_hull.begin(), agent_hull.end());
    }
    return hull;
}

namespace {

std::string coord_name(char prefix, int agent, int k, int coord) {
    return std::string(1, prefix) + "_a" + std::to_string(agent + 1) + "_k" + std::to_string(k) + "_" +
           std::to_string(coord);
}

/// Extension-state bounds per step, from interval propagation of the box at T.
std::vector<std::vector<Box>> extension_bounds(const AgentModel& a, int extension) {
    std::vector<std::vector<Box>> out;
    std::vector<Box> cur = a.state_box;
    for (int p = 0; p < extension; ++p) {
        std::vector<Box> next(static_cast<std::size_t>(a.n()));
        for (int r = 0; r < a.n(); ++r) {
            double lo = 0.0, hi = 0.0;
            for (int c = 0; c < a.n(); ++c) {
                const double v1 = a.A(r, c) * cur[static_cast<std::size_t>(c)].lo;
                const double v2 = a.A(r, c) * cur[static_cast<std::size_t>(c)].hi;
                lo += std::min(v1, v2);
                hi += std::max(v1, v2);
            }
            next[static_cast<std::size_t>(r)] = {lo, hi};
        }
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

AffineExpr require_affine(const Predicate& p) {
    auto a = p.expr.affine();
    if (!a || p.evaluator)
        throw ValidationError("predicate '" + p.label +
                              "' is not affine; it can be counted and verified but not encoded");
    return *a;
}

void check_refs(const AffineExpr& a, const MultiAgentSystem& sys, const std::string& label) {
    for (const auto& [v, c] : a.coefficients)
        if (v.agent < 0 || v.agent >= sys.num_agents() || v.coord < 0 || v.coord >= sys.agent(v.agent).n())
            throw ValidationError("predicate '" + label + "' references x" + std::to_string(v.agent + 1) + "[" +
                                  std::to_string(v.coord) + "], which does not exist");
}

/// Terms of a(x^kappa(k)); the constant is returned separately.
std::vector<Term> shifted_terms(const AffineExpr& a, const VarMaps& vars, int k, const ShiftVector& kappa,
                                double scale = 1.0) {
    std::vector<Term> terms;
    terms.reserve(a.coefficients.size());
    for (const auto& [v, c] : a.coefficients)
        terms.push_back({vars.state_var(v.agent, v.coord, k + kappa[static_cast<std::size_t>(v.agent)]), scale * c});
    return terms;
}

double max_abs_over(const AffineExpr& a, const std::vector<Box>& ranges, const MultiAgentSystem& sys) {
    double lo = a.constant, hi = a.constant;
    for (const auto& [v, c] : a.coefficients) {
        const Box& b = ranges[static_cast<std::size_t>(sys.state_offset(v.agent) + v.coord)];
        lo += std::min(c * b.lo, c * b.hi);
        hi += std::max(c * b.lo, c * b.hi);
    }
    return std::max(std::fabs(lo), std::fabs(hi));
}

KeyMode leaf_key_mode(const EncoderConfig& cfg) {
    if (cfg.method == Method::naive) return KeyMode::naive;
    return cfg.merge_boundary ? KeyMode::clamped : KeyMode::raw;
}

}  // namespace

VarMaps encode_dynamics(const MultiAgentSystem& sys, int T, int theta2, mip::MipModel& model, std::int64_t* rows) {
    if (T < 1) throw ValidationError("horizon must be at least 1");
    if (theta2 < 0) throw ValidationError("extension length must be non-negative");
    sys.validate();
    VarMaps vm;
    vm.horizon = T;
    vm.extension = theta2;
    for (int i = 0; i < sys.num_agents(); ++i) vm.state_offset.push_back(sys.state_offset(i));
    vm.state_offset.push_back(sys.state_dim());

    std::vector<std::vector<std::vector<Box>>> ext(static_cast<std::size_t>(sys.num_agents()));
    for (int i = 0; i < sys.num_agents(); ++i) ext[static_cast<std::size_t>(i)] = extension_bounds(sys.agent(i), theta2);

    for (int k = 0; k <= T + theta2; ++k) {
        std::vector<int> ids;
        for (int i = 0; i < sys.num_agents(); ++i) {
            const AgentModel& a = sys.agent(i);
            for (int c = 0; c < a.n(); ++c) {
                Box b = a.state_box[static_cast<std::size_t>(c)];
                if (k == 0) {
                    const double x0 = sys.x0()[static_cast<std::size_t>(sys.state_offset(i) + c)];
                    b = {x0, x0};
                } else if (k > T) {
                    b = ext[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - T - 1)][static_cast<std::size_t>(c)];
                }
                ids.push_back(model.add_continuous(coord_name('x', i, k, c), b.lo, b.hi));
            }
        }
        vm.state.push_back(std::move(ids));
    }
    for (int k = 0; k < T; ++k) {
        std::vector<int> ids;
        for (int i = 0; i < sys.num_agents(); ++i) {
            const AgentModel& a = sys.agent(i);
            for (int c = 0; c < a.m(); ++c) {
                const Box& b = a.input_box[static_cast<std::size_t>(c)];
                ids.push_back(model.add_continuous(coord_name('u', i, k, c), b.lo, b.hi));
            }
        }
        vm.input.push_back(std::move(ids));
    }
    std::int64_t count = 0;
    for (int k = 0; k < T + theta2; ++k) {
        for (int i = 0; i < sys.num_agents(); ++i) {
            const AgentModel& a = sys.agent(i);
            const int so = sys.state_offset(i), io = sys.input_offset(i);
            for (int r = 0; r < a.n(); ++r) {
                std::vector<Term> terms{{vm.state[k + 1][so + r], 1.0}};
                for (int c = 0; c < a.n(); ++c)
                    if (a.A(r, c) != 0.0) terms.push_back({vm.state[k][so + c], -a.A(r, c)});
                if (k < T)
                    for (int c = 0; c < a.m(); ++c)
                        if (a.B(r, c) != 0.0) terms.push_back({vm.input[k][io + c], -a.B(r, c)});
                model.add_constraint(coord_name('d', i, k, r), std::move(terms), Relation::eq, 0.0);
                ++count;
            }
        }
    }
    if (rows) *rows += count;
    return vm;
}

void attach_objective(const ObjectiveSpec& spec, const MultiAgentSystem& sys, const VarMaps& vars,
                      mip::MipModel& model, std::int64_t* rows) {
    const auto nu = static_cast<std::size_t>(sys.input_dim());
    const auto nx = static_cast<std::size_t>(sys.state_dim());
    std::vector<double> wu = spec.input_weights.empty() ? std::vector<double>(nu, 1.0) : spec.input_weights;
    std::vector<double> wx = spec.state_weights.empty() ? std::vector<double>(nx, 0.0) : spec.state_weights;
    if (wu.size() != nu) throw ValidationError("objective input weights need " + std::to_string(nu) + " entries");
    if (wx.size() != nx) throw ValidationError("objective state weights need " + std::to_string(nx) + " entries");
    for (double w : wu)
        if (!std::isfinite(w)) throw ValidationError("objective weights must be finite");
    for (double w : wx)
        if (!std::isfinite(w)) throw ValidationError("objective weights must be finite");

    std::int64_t count = 0;
    const int T = vars.horizon;
    switch (spec.kind) {
        case ObjectiveSpec::Kind::input_l1:
            for (int k = 0; k < T; ++k)
                for (std::size_t c = 0; c < nu; ++c) {
                    if (wu[c] == 0.0) continue;
                    const int u = vars.input[k][c];
                    const std::string base = model.variable(u).name;
                    const int t = model.add_continuous("t_" + base, 0.0, mip::inf);
                    model.add_constraint("tp_" + base, {{t, 1.0}, {u, -1.0}}, Relation::ge, 0.0);
                    model.add_constraint("tn_" + base, {{t, 1.0}, {u, 1.0}}, Relation::ge, 0.0);
                    model.set_objective_coef(t, wu[c]);
                    count += 2;
                }
            break;
        case ObjectiveSpec::Kind::input_linf:
            for (int k = 0; k < T; ++k)
                for (int i = 0; i < sys.num_agents(); ++i) {
                    const std::string base = "a" + std::to_string(i + 1) + "_k" + std::to_string(k);
                    const int t = model.add_continuous("t_" + base, 0.0, mip::inf);
                    bool used = false;
                    for (int c = 0; c < sys.agent(i).m(); ++c) {
                        const auto s = static_cast<std::size_t>(sys.input_offset(i) + c);
                        if (wu[s] == 0.0) continue;
                        const int u = vars.input[k][s];
                        model.add_constraint("tp_" + model.variable(u).name, {{t, 1.0}, {u, -wu[s]}}, Relation::ge, 0.0);
                        model.add_constraint("tn_" + model.variable(u).name, {{t, 1.0}, {u, wu[s]}}, Relation::ge, 0.0);
                        count += 2;
                        used = true;
                    }
                    if (used) model.set_objective_coef(t, 1.0);
                }
            break;
        case ObjectiveSpec::Kind::linear:
            for (int k = 0; k <= T; ++k)
                for (std::size_t c = 0; c < nx; ++c)
                    if (wx[c] != 0.0) model.add_objective_coef(vars.state[k][c], wx[c]);
            for (int k = 0; k < T; ++k)
                for (std::size_t c = 0; c < nu; ++c)
                    if (wu[c] != 0.0) model.add_objective_coef(vars.input[k][c], wu[c]);
            break;
        case ObjectiveSpec::Kind::exported_quadratic:
            // sum w x^2 is written as [ 2w x^2 ] / 2
            for (int k = 0; k <= T; ++k)
                for (std::size_t c = 0; c < nx; ++c)
                    if (wx[c] != 0.0) model.add_quadratic(vars.state[k][c], vars.state[k][c], 2.0 * wx[c]);
            for (int k = 0; k < T; ++k)
                for (std::size_t c = 0; c < nu; ++c)
                    if (wu[c] != 0.0) model.add_quadratic(vars.input[k][c], vars.input[k][c], 2.0 * wu[c]);
            break;
    }
    if (rows) *rows += count;
}

EncodedProblem encode_constraint_task(const ConstraintTask& task, const MultiAgentSystem& sys, ShiftBound bound,
                                      const EncoderConfig& config) {
    task.validate();
    bound.validate();
    const int T = std::max(task.max_time(), config.horizon);
    EncodedProblem out;
    out.bound = bound;
    out.eps = config.eps;
    out.vars = encode_dynamics(sys, std::max(T, 1), bound.theta2, out.model, &out.counts.dynamics_rows);

    const KeyMode mode = leaf_key_mode(config);
    for (std::size_t j = 0; j < task.pieces.size(); ++j) {
        const ConstraintPiece& piece = task.pieces[j];
        std::vector<AffineExpr> members;
        for (const auto& m : piece.members) {
            members.push_back(require_affine(m));
            check_refs(members.back(), sys, m.label);
        }
        const PairSetIndex index = build_index(piece.times, bound, sys.num_agents(), mode);
        for (int id = 0; id < index.size(); ++id) {
            const InstantShift& rep = index.representative(id);
            for (std::size_t q = 0; q < members.size(); ++q) {
                const AffineExpr& a = members[q];
                out.model.add_constraint("c" + std::to_string(j + 1) + "_" + std::to_string(q + 1) + "_" +
                                             std::to_string(id),
                                         shifted_terms(a, out.vars, rep.k, rep.kappa), Relation::ge,
                                         config.constraint_margin - a.constant);
                ++out.counts.task_rows;
            }
        }
    }
    attach_objective(config.objective, sys, out.vars, out.model, &out.counts.objective_rows);
    return out;
}

namespace {

/// A child's truth value: a binary variable or a constant.
struct Ref {
    int var = -1;
    double constant = 0.0;
};

class StlEncoder {
public:
    StlEncoder(const StlPlan& plan, const MultiAgentSystem& sys, const EncoderConfig& cfg, EncodedProblem& out)
        : plan_(plan), sys_(sys), cfg_(cfg), out_(out), shifts_(enumerate_shifts(plan.bound, plan.num_agents)) {}

    void run() {
        const std::size_t n = plan_.nodes.size();
        out_.node_binaries.assign(n, {});
        out_.node_index.assign(n, PairSetIndex{});
        allocate();
        for (std::size_t g = 0; g < plan_.groups.size(); ++g) literal_rows(static_cast<int>(g));
        for (std::size_t id = 0; id < n; ++id) node_rows(static_cast<int>(id));
        enforce(0);
    }

private:
    const StlPlan& plan_;
    const MultiAgentSystem& sys_;
    const EncoderConfig& cfg_;
    EncodedProblem& out_;
    std::vector<ShiftVector> shifts_;
    std::vector<std::vector<int>> group_vars_;
    std::vector<int> child_base_;  // pre-order id of each node's first child

    mip::MipModel& model() { return out_.model; }

    void allocate() {
        for (std::size_t g = 0; g < plan_.groups.size(); ++g) {
            std::vector<int> ids;
            for (int p = 0; p < plan_.groups[g].index.size(); ++p)
                ids.push_back(model().add_binary("zp" + std::to_string(g) + "_" + std::to_string(p)));
            out_.counts.predicate_binaries += static_cast<std::int64_t>(ids.size());
            group_vars_.push_back(std::move(ids));
        }
        for (std::size_t id = 0; id < plan_.nodes.size(); ++id) {
            const int g = plan_.group[id];
            if (g >= 0) {
                out_.node_binaries[id] = group_vars_[static_cast<std::size_t>(g)];
                out_.node_index[id] = plan_.groups[static_cast<std::size_t>(g)].index;
                continue;
            }
            out_.node_index[id] = plan_.index[id];
            if (!plan_.has_var[id]) continue;
            const Formula& f = *plan_.nodes[id];
            std::vector<int> ids;
            for (int p = 0; p < plan_.index[id].size(); ++p)
                ids.push_back(model().add_binary("zn" + std::to_string(id) + "_" + std::to_string(p)));
            (f.is_temporal() ? out_.counts.temporal_binaries : out_.counts.boolean_binaries) +=
                static_cast<std::int64_t>(ids.size());
            out_.node_binaries[id] = std::move(ids);
        }
        // children ids in pre-order: walk subtree sizes
        child_base_.assign(plan_.nodes.size(), -1);
        std::vector<int> size(plan_.nodes.size(), 1);
        for (int id = static_cast<int>(plan_.nodes.size()) - 1; id >= 0; --id) {
            int s = 1, c = id + 1;
            for (std::size_t k = 0; k < plan_.nodes[static_cast<std::size_t>(id)]->children().size(); ++k) {
                s += size[static_cast<std::size_t>(c)];
                c += size[static_cast<std::size_t>(c)];
            }
            size[static_cast<std::size_t>(id)] = s;
        }
        size_ = std::move(size);
    }

    std::vector<int> size_;

    std::vector<int> children_of(int id) const {
        std::vector<int> out;
        int c = id + 1;
        for (std::size_t k = 0; k < plan_.nodes[static_cast<std::size_t>(id)]->children().size(); ++k) {
            out.push_back(c);
            c += size_[static_cast<std::size_t>(c)];
        }
        return out;
    }

    Ref ref(int node, int k, const ShiftVector& kappa) const {
        const Formula& f = *plan_.nodes[static_cast<std::size_t>(node)];
        if (f.op() == Op::True) return {-1, 1.0};
        const int var = out_.binary(node, k, kappa);
        if (var < 0)
            throw Error("internal: no binary for node " + std::to_string(node) + " at k=" + std::to_string(k));
        return {var, 0.0};
    }

    std::string row_name(const char* kind, int node, int id, int extra = -1) const {
        std::string s = std::string(kind) + std::to_string(node) + "_" + std::to_string(id);
        if (extra >= 0) s += "_" + std::to_string(extra);
        return s;
    }

    void literal_rows(int g) {
        const auto& group = plan_.groups[static_cast<std::size_t>(g)];
        const Formula& leaf = group.negated ? group.literal->children().front() : *group.literal;
        AffineExpr a = require_affine(leaf.predicate());
        check_refs(a, sys_, group.label);
        const double sign = group.negated ? -1.0 : 1.0;
        const double M = out_.M, eps = out_.eps;
        for (int p = 0; p < group.index.size(); ++p) {
            const InstantShift& rep = group.index.representative(p);
            const int z = group_vars_[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
            // g = sign * mu:  g - M z <= -eps,  -g + M z <= M - eps
            auto up = shifted_terms(a, out_.vars, rep.k, rep.kappa, sign);
            auto down = shifted_terms(a, out_.vars, rep.k, rep.kappa, -sign);
            up.push_back({z, -M});
            down.push_back({z, M});
            const double c = sign * a.constant;
            const std::string base = std::to_string(g) + "_" + std::to_string(p);
            model().add_constraint("mu" + base, std::move(up), Relation::le, -eps - c);
            model().add_constraint("ml" + base, std::move(down), Relation::le, M - eps + c);
            out_.counts.big_m_rows += 2;
        }
    }

    /// z <= each child, z >= 1 - m + sum (conjunction); mirrored for disjunction.
    void link(const std::string& name, int z, const std::vector<Ref>& kids, bool conjunction) {
        double const_sum = 0.0;
        std::vector<Term> sum{{z, -1.0}};
        int idx = 0;
        for (const Ref& r : kids) {
            if (r.var < 0) {
                const_sum += r.constant;
                if (conjunction && r.constant < 1.0) {
                    model().add_constraint(name + "_c" + std::to_string(idx), {{z, 1.0}}, Relation::le, r.constant);
                    ++out_.counts.logic_rows;
                }
                if (!conjunction && r.constant > 0.0) {
                    model().add_constraint(name + "_c" + std::to_string(idx), {{z, 1.0}}, Relation::ge, r.constant);
                    ++out_.counts.logic_rows;
                }
            } else {
                sum.push_back({r.var, 1.0});
                model().add_constraint(name + "_c" + std::to_string(idx), {{z, 1.0}, {r.var, -1.0}},
                                       conjunction ? Relation::le : Relation::ge, 0.0);
                ++out_.counts.logic_rows;
            }
            ++idx;
        }
        const auto m = static_cast<double>(kids.size());
        // conjunction: sum_vars - z >= m - 1 - const_sum ; disjunction: sum_vars - z >= -const_sum
        model().add_constraint(name + "_s", std::move(sum), Relation::ge,
                               conjunction ? m - 1.0 - const_sum : -const_sum);
        ++out_.counts.logic_rows;
    }

    void node_rows(int id) {
        const auto uid = static_cast<std::size_t>(id);
        if (plan_.group[uid] >= 0 || !plan_.has_var[uid]) return;
        const Formula& f = *plan_.nodes[uid];
        const std::vector<int> kids = children_of(id);
        const PairSetIndex& index = plan_.index[uid];
        for (int p = 0; p < index.size(); ++p) {
            const InstantShift& rep = index.representative(p);
            const int z = out_.node_binaries[uid][static_cast<std::size_t>(p)];
            const std::string name = row_name("l", id, p);
            std::vector<Ref> refs;
            switch (f.op()) {
                case Op::And:
                case Op::Or:
                    for (int c : kids) refs.push_back(ref(c, rep.k, rep.kappa));
                    link(name, z, refs, f.op() == Op::And);
                    break;
                case Op::Always:
                case Op::Eventually:
                    for (int j = f.interval().lo; j <= f.interval().hi; ++j)
                        refs.push_back(ref(kids[0], rep.k + j, rep.kappa));
                    link(name, z, refs, f.op() == Op::Always);
                    break;
                case Op::Until: {
                    std::vector<Ref> ws;
                    for (int j = f.interval().lo; j <= f.interval().hi; ++j) {
                        const int w = model().add_binary(row_name("w", id, p, j));
                        ++out_.counts.until_aux;
                        std::vector<Ref> conj{ref(kids[1], rep.k + j, rep.kappa)};
                        for (int l = 0; l <= j; ++l) conj.push_back(ref(kids[0], rep.k + l, rep.kappa));
                        link(row_name("lw", id, p, j), w, conj, true);
                        ws.push_back({w, 0.0});
                    }
                    link(name, z, ws, false);
                    break;
                }
                default:
                    throw Error("internal: unexpected node kind in encoder");
            }
        }
    }

    /// Enforced truth of node `id` at instant 0 for every shift vector.
    void enforce(int id) {
        const auto uid = static_cast<std::size_t>(id);
        const Formula& f = *plan_.nodes[uid];
        if (f.op() == Op::True) return;
        if (f.op() == Op::And && !plan_.has_var[uid]) {
            for (int c : children_of(id)) enforce(c);
            return;
        }
        if (f.op() == Op::Or && !plan_.has_var[uid]) {
            const std::vector<int> kids = children_of(id);
            const PairSetIndex& index = plan_.index[uid];
            for (int p = 0; p < index.size(); ++p) {
                const InstantShift& rep = index.representative(p);
                std::vector<Term> terms;
                bool trivially_true = false;
                for (int c : kids) {
                    const Ref r = ref(c, rep.k, rep.kappa);
                    if (r.var < 0)
                        trivially_true |= r.constant >= 1.0;
                    else
                        terms.push_back({r.var, 1.0});
                }
                if (trivially_true) continue;
                model().add_constraint(row_name("cov", id, p), std::move(terms), Relation::ge, 1.0);
                ++out_.counts.covering_rows;
            }
            return;
        }
        std::set<int> distinct;
        for (const auto& kappa : shifts_) {
            distinct.insert(out_.binary(id, 0, kappa));
            ++out_.counts.root_rows_raw;
        }
        for (int z : distinct) {
            model().add_constraint("root" + std::to_string(id) + "_" + model().variable(z).name, {{z, 1.0}},
                                   Relation::eq, 1.0);
            ++out_.counts.root_rows;
        }
    }
};

}  // namespace

EncodedProblem encode_stl(const Formula& phi, const MultiAgentSystem& sys, ShiftBound bound,
                          const EncoderConfig& config) {
    bound.validate();
    if (!(config.eps > 0.0)) throw ValidationError("eps must be positive");
    const Formula f = normalize(phi);
    const int T = std::max({horizon(f), config.horizon, 1});
    const StlPlan plan = plan_stl(f, bound, sys.num_agents(), config.method, config.merge_boundary);

    EncodedProblem out;
    out.bound = bound;
    out.eps = config.eps;
    out.vars = encode_dynamics(sys, T, bound.theta2, out.model, &out.counts.dynamics_rows);

    // big-M from the ranges every literal can read
    const std::vector<Box> ranges = state_ranges(sys, bound.theta2);
    double need = 0.0;
    for (const auto& g : plan.groups) {
        const Formula& leaf = g.negated ? g.literal->children().front() : *g.literal;
        const AffineExpr a = require_affine(leaf.predicate());
        check_refs(a, sys, g.label);
        need = std::max(need, max_abs_over(a, ranges, sys));
    }
    if (config.M > 0.0) {
        if (config.M <= config.eps) throw ValidationError("M must exceed eps");
        if (config.M < need + config.eps)
            throw ValidationError("M = " + format_double(config.M) + " is too small: predicates reach |mu| = " +
                                  format_double(need) + " over the state ranges");
        out.M = config.M;
    } else {
        out.M = 1.2 * need + 2.0 * config.eps;
    }

    StlEncoder enc(plan, sys, config, out);
    enc.run();
    attach_objective(config.objective, sys, out.vars, out.model, &out.counts.objective_rows);
    return out;
}

Trajectory decode(const EncodedProblem& problem, const MultiAgentSystem& sys, const std::vector<double>& x) {
    std::vector<std::vector<double>> inputs;
    for (const auto& row : problem.vars.input) {
        std::vector<double> u;
        for (int i = 0; i < sys.num_agents(); ++i)
            for (int c = 0; c < sys.agent(i).m(); ++c) {
                const auto s = static_cast<std::size_t>(sys.input_offset(i) + c);
                const Box& b = sys.agent(i).input_box[static_cast<std::size_t>(c)];
                u.push_back(std::clamp(x[static_cast<std::size_t>(row[s])], b.lo, b.hi));
            }
        inputs.push_back(std::move(u));
    }
    return simulate(sys, inputs, problem.vars.extension);
}

}  // namespace atr
