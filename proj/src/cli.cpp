#include "atr/cli.hpp"

#include "atr/errors.hpp"
#include "atr/mip/bnb.hpp"
#include "atr/mip/lp_format.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

namespace atr::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kDash = "—";

double seconds_since(mip::Clock::time_point t0) {
    return std::chrono::duration<double>(mip::Clock::now() - t0).count();
}

std::string cell(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : kDash; }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

json witness_json(const std::optional<Witness>& w) {
    if (!w) return nullptr;
    return {{"kappa", w->kappa}, {"k", w->k}, {"predicate", w->predicate}};
}

void write_positions_csv(std::ostream& out, const Trajectory& t, const std::vector<int>& coords) {
    out << "k,agent";
    for (std::size_t j = 0; j < coords.size(); ++j) out << ",pos" << j;
    out << '\n';
    const int last = t.horizon + static_cast<int>(t.extension.size());
    for (int k = 0; k <= last; ++k)
        for (int a = 0; a < t.num_agents(); ++a) {
            out << k << ',' << (a + 1);
            for (int c : coords) out << ',' << format_double(t.value(a, c, k));
            out << '\n';
        }
}

mip::MipLimits limits_of(const Scenario& s) {
    mip::MipLimits l;
    l.node_cap = s.solver.node_cap;
    l.time_cap = s.solver.time_cap;
    l.rel_gap = s.solver.rel_gap;
    return l;
}

json counts_json(const EncodedProblem& p) {
    const auto& c = p.counts;
    return {{"variables", p.model.num_variables()},
            {"binaries", p.model.num_binaries()},
            {"constraints", p.model.num_constraints()},
            {"task_rows", c.task_rows},
            {"predicate_binaries", c.predicate_binaries},
            {"temporal_binaries", c.temporal_binaries},
            {"boolean_binaries", c.boolean_binaries},
            {"until_aux", c.until_aux},
            {"big_m_rows", c.big_m_rows},
            {"logic_rows", c.logic_rows},
            {"covering_rows", c.covering_rows},
            {"root_rows", c.root_rows},
            {"dynamics_rows", c.dynamics_rows},
            {"objective_rows", c.objective_rows}};
}

}  // namespace

Scenario apply(Scenario s, const Options& opt) {
    if (opt.bound) s.bound = *opt.bound;
    if (opt.time_cap) s.solver.time_cap = *opt.time_cap;
    if (opt.node_cap) s.solver.node_cap = *opt.node_cap;
    s.merge_boundary = s.merge_boundary || opt.merge_boundary;
    s.validate();
    return s;
}

std::vector<CountRow> count(const Scenario& s, const std::vector<Method>& methods) {
    std::vector<CountRow> rows;
    const int n = s.system.num_agents();
    for (Method m : methods) {
        CountRow r{s.name, m, {}, {}};
        if (s.is_stl())
            r.binaries = count_stl_binaries(s.stl(), s.bound, n, m, s.merge_boundary).total();
        else
            r.constraints = count_constraint_rows(s.constraint_task(), s.bound, n, m, s.merge_boundary);
        rows.push_back(std::move(r));
    }
    return rows;
}

EncodedProblem build(const Scenario& s, Method method) {
    const EncoderConfig config = s.encoder_config(method);
    if (s.is_stl()) return encode_stl(s.stl(), s.system, s.bound, config);
    return encode_constraint_task(s.constraint_task(), s.system, s.bound, config);
}

SynthResult synthesize(const Scenario& s, Method method) {
    if (s.objective.kind == ObjectiveSpec::Kind::exported_quadratic)
        throw ValidationError("objective '" + std::string(to_string(s.objective.kind)) +
                              "' is export-only; use `export` or a linear objective kind");
    const auto t0 = mip::Clock::now();
    SynthResult r{build(s, method), {}, {}, {}, {}, 0.0};
    r.build_time = seconds_since(t0);
    r.solve = mip::solve_mip(r.problem.model, limits_of(s));
    if (!r.solve.has_solution()) return r;

    Trajectory traj = decode(r.problem, s.system, r.solve.x);
    const int T = traj.horizon;
    extend(traj, s.system, std::max(T, s.bound.theta2));
    const Task task = s.task();
    r.oracle = robust_check(task, traj, s.bound);
    r.atr = atr::atr(task, traj, T);
    r.trajectory = std::move(traj);
    return r;
}

bool same_model(const mip::MipModel& a, const mip::MipModel& b, std::string* why) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    if (a.num_variables() != b.num_variables()) return fail("variable count");
    if (a.num_constraints() != b.num_constraints()) return fail("constraint count");
    for (int i = 0; i < a.num_variables(); ++i) {
        const auto &x = a.variable(i), &y = b.variable(i);
        if (x.name != y.name || x.kind != y.kind || x.lo != y.lo || x.hi != y.hi) return fail("variable " + x.name);
    }
    for (int i = 0; i < a.num_constraints(); ++i) {
        const auto &x = a.constraint(i), &y = b.constraint(i);
        if (x.name != y.name || x.terms != y.terms || x.rel != y.rel || x.rhs != y.rhs) return fail("row " + x.name);
    }
    const auto &oa = a.objective(), &ob = b.objective();
    for (int i = 0; i < a.num_variables(); ++i) {
        const double ca = i < static_cast<int>(oa.linear.size()) ? oa.linear[static_cast<std::size_t>(i)] : 0.0;
        const double cb = i < static_cast<int>(ob.linear.size()) ? ob.linear[static_cast<std::size_t>(i)] : 0.0;
        if (ca != cb) return fail("objective coefficient of " + a.variable(i).name);
    }
    if (oa.constant != ob.constant) return fail("objective constant");
    if (oa.quadratic != ob.quadratic) return fail("quadratic objective");
    return true;
}

std::string verdict_json(const Verdict& v, std::optional<AtrValue> theta) {
    json j;
    j["satisfied"] = v.satisfied;
    if (theta) j["theta"] = theta->value();
    j["witness"] = witness_json(v.witness);
    return j.dump();
}

int cmd_count(const Scenario& scenario, const Options& opt, std::ostream& out) {
    const Scenario s = apply(scenario, opt);
    std::vector<Method> methods{Method::naive, Method::reduced};
    if (opt.method) methods = {*opt.method};
    out << "name,method,binaries,constraints\n";
    for (const auto& r : count(s, methods))
        out << r.name << ',' << to_string(r.method) << ',' << cell(r.binaries) << ',' << cell(r.constraints) << '\n';
    return ok;
}

int cmd_synth(const Scenario& scenario, const Options& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = apply(scenario, opt);
    const Method method = opt.method.value_or(Method::reduced);
    const SynthResult r = synthesize(s, method);

    json result;
    result["scenario"] = s.name;
    result["method"] = to_string(method);
    result["bound"] = {s.bound.theta1, s.bound.theta2};
    result["status"] = mip::to_string(r.solve.status);
    result["objective"] = r.solve.has_solution() ? json(r.solve.objective) : json(nullptr);
    result["build_time"] = r.build_time;
    result["stats"] = {{"nodes", r.solve.stats.nodes},
                       {"lp_iterations", r.solve.stats.lp_iterations},
                       {"wall_time", r.solve.stats.wall_time},
                       {"best_bound", std::isfinite(r.solve.stats.best_bound) ? json(r.solve.stats.best_bound)
                                                                              : json(nullptr)}};
    result["counts"] = counts_json(r.problem);

    std::filesystem::create_directories(opt.out_dir);
    int code = ok;
    if (r.trajectory) {
        const Trajectory& t = *r.trajectory;
        auto states = open_out(opt.out_dir / "states.csv");
        write_states_csv(states, t);
        auto inputs = open_out(opt.out_dir / "inputs.csv");
        write_inputs_csv(inputs, t);
        auto positions = open_out(opt.out_dir / "positions.csv");
        write_positions_csv(positions, t, s.position_coords);
        result["oracle"] = json::parse(verdict_json(r.oracle, std::nullopt));
        result["atr"] = {{"tau", r.atr.tau}, {"sign", r.atr.sign}, {"value", r.atr.value()}};
        if (!r.oracle.satisfied) {
            err << "error: synthesized trajectory fails its own robustness check";
            if (r.oracle.witness)
                err << " (predicate " << r.oracle.witness->predicate << " at k=" << r.oracle.witness->k << ")";
            err << '\n';
            code = failure;
        }
    }
    if (code == ok) {
        if (r.solve.status == mip::Status::infeasible) code = infeasible;
        else if (r.solve.status == mip::Status::cap_reached) code = cap_reached;
        else if (r.solve.status == mip::Status::unbounded) code = failure;
    }
    auto res = open_out(opt.out_dir / "result.json");
    res << result.dump(2) << '\n';
    out << result.dump(2) << '\n';
    return code;
}

int cmd_verify(const Scenario& scenario, const std::filesystem::path& states_csv, const Options& opt,
               std::ostream& out) {
    const Scenario s = apply(scenario, opt);
    std::ifstream in(states_csv);
    if (!in) throw ValidationError("cannot open trajectory file " + states_csv.string());
    const int T = s.effective_horizon();
    const Trajectory traj = read_states_csv(in, s.system, T, std::max(T, s.bound.theta2));
    const Task task = s.task();
    const Verdict v = robust_check(task, traj, s.bound);
    const AtrValue theta = atr::atr(task, traj, T);
    json j = json::parse(verdict_json(v, theta));
    j["bound"] = {s.bound.theta1, s.bound.theta2};
    j["tau"] = theta.tau;
    out << j.dump(2) << '\n';
    return ok;
}

int cmd_export(const Scenario& scenario, const Options& opt, std::ostream& out) {
    const Scenario s = apply(scenario, opt);
    const Method method = opt.method.value_or(Method::reduced);
    const EncodedProblem p = build(s, method);
    std::filesystem::create_directories(opt.out_dir);
    const auto path = opt.out_dir / (s.name + "_" + to_string(method) + ".lp");
    mip::export_model(p.model, path);
    std::string why;
    const bool round_trip = same_model(p.model, mip::import_model(path), &why);
    json j;
    j["path"] = path.string();
    j["method"] = to_string(method);
    j["bound"] = {s.bound.theta1, s.bound.theta2};
    j["counts"] = counts_json(p);
    j["round_trip"] = round_trip;
    if (!round_trip) j["mismatch"] = why;
    out << j.dump(2) << '\n';
    return round_trip ? ok : failure;
}

int cmd_bench(const std::vector<std::filesystem::path>& scenarios, const Options& opt, std::ostream& out,
              std::ostream& err) {
    out << "name,method,binaries,constraints,build_s,solve_s,status,speedup\n";
    std::vector<Method> methods{Method::naive, Method::reduced};
    if (opt.method) methods = {*opt.method};
    const int reps = std::max(1, opt.repetitions);
    for (const auto& path : scenarios) {
        std::string name = path.stem().string();
        try {
            const Scenario s = apply(load_scenario(path), opt);
            name = s.name;
            const auto counts = count(s, methods);
            double naive_total = 0.0;
            for (std::size_t i = 0; i < methods.size(); ++i) {
                const Method m = methods[i];
                std::string build_s = kDash, solve_s = kDash, status = "count-only", speedup = kDash;
                const bool solvable = s.objective.kind != ObjectiveSpec::Kind::exported_quadratic;
                if (!opt.count_only) {
                    double build_sum = 0.0, solve_sum = 0.0;
                    status = solvable ? "" : "export-only";
                    try {
                        for (int rep = 0; rep < reps; ++rep) {
                            auto t0 = mip::Clock::now();
                            const EncodedProblem p = build(s, m);
                            build_sum += seconds_since(t0);
                            if (!solvable) continue;
                            const auto res = mip::solve_mip(p.model, limits_of(s));
                            solve_sum += res.stats.wall_time;
                            status = mip::to_string(res.status);
                        }
                        build_s = format_double(build_sum / reps);
                        if (solvable) solve_s = format_double(solve_sum / reps);
                        const double total = (build_sum + solve_sum) / reps;
                        if (m == Method::naive) naive_total = total;
                        else if (naive_total > 0.0 && total > 0.0) speedup = format_double(naive_total / total);
                    } catch (const std::exception& e) {
                        err << name << " (" << to_string(m) << "): " << e.what() << '\n';
                        status = "failed";
                    }
                }
                out << name << ',' << to_string(m) << ',' << cell(counts[i].binaries) << ','
                    << cell(counts[i].constraints) << ',' << build_s << ',' << solve_s << ',' << status << ','
                    << speedup << '\n';
            }
        } catch (const std::exception& e) {
            err << path.string() << ": " << e.what() << '\n';
            out << name << ",—,—,—,—,—,failed,—\n";
        }
    }
    return ok;
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
        dynamic_cast<const ExtensionError*>(&e))
        return invalid_input;
    if (dynamic_cast<const CapExceeded*>(&e)) return cap_reached;
    return failure;
}

}  // namespace atr::cli
