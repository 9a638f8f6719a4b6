// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "aimc/cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aimc/approx.hpp"
#include "aimc/error.hpp"
#include "aimc/etr.hpp"
#include "aimc/exact.hpp"
#include "aimc/gadgets.hpp"
#include "aimc/graph.hpp"
#include "aimc/model.hpp"
#include "aimc/oracle.hpp"
#include "aimc/qualitative.hpp"

namespace aimc::cli {

namespace {

using json = nlohmann::json;

struct Outcome {
    int code = Yes;
    json params = json::object();
    std::optional<std::string> model_hash;
    json result = json::object();
    json counters = json::object();
    std::string text;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write '" + path + "'");
    }
}

std::string fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

struct Loaded {
    ModelDocument doc;
    std::string hash;
};

Loaded load(const std::string& path) {
    const std::string bytes = read_file(path);
    return {parse_document(bytes), fnv1a(bytes)};
}

json chain_json(const MarkovChain& chain) { return json::parse(serialize(chain)); }

std::vector<std::string> edge_names(const AimcModel& model, const std::vector<Edge>& edges) {
    std::vector<std::string> out;
    for (const Edge& e : edges) {
        out.push_back(model.edge_name(e));
    }
    return out;
}

std::uint64_t env_budget(std::optional<std::uint64_t> flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("AIMC_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*env == '\0' || *end != '\0') {
            throw Error(std::string("AIMC_BUDGET must be a positive integer, got '") + env + "'");
        }
        return v;
    }
    return approx::ApproxOptions{}.budget;
}

// Query flags; unset flags fall back to the query embedded in the model file.
struct QueryFlags {
    std::string from;
    std::string to;
    std::string relation;
    std::string threshold;
    std::string eps;

    void add(CLI::App* app, bool with_threshold, bool with_eps) {
        app->add_option("--from", from, "source vertex");
        app->add_option("--to", to, "target vertex");
        app->add_option("--relation", relation, "le or ge");
        if (with_threshold) {
            app->add_option("--threshold", threshold, "threshold as p/q");
        }
        if (with_eps) {
            app->add_option("--eps", eps, "promise gap as p/q");
        }
    }

    void echo(json& params) const {
        for (const auto& [key, value] : {std::pair{"from", &from}, std::pair{"to", &to},
                                         std::pair{"relation", &relation}, std::pair{"threshold", &threshold},
                                         std::pair{"eps", &eps}}) {
            if (!value->empty()) {
                params[key] = *value;
            }
        }
    }

    Query resolve(const ModelDocument& doc, bool need_threshold, bool need_eps) const {
        const AimcModel& m = doc.model;
        const bool embedded = doc.query.has_value();
        Query q = embedded ? *doc.query : Query{};
        if (!from.empty()) {
            q.source = m.index_of(from);
        } else if (!embedded) {
            throw Error("missing --from (no query in the model file)");
        }
        if (!to.empty()) {
            q.target = m.index_of(to);
        } else if (!embedded) {
            throw Error("missing --to (no query in the model file)");
        }
        if (!relation.empty()) {
            if (relation == "ge" || relation == ">=") {
                q.relation = Relation::Ge;
            } else if (relation == "le" || relation == "<=") {
                q.relation = Relation::Le;
            } else {
                throw Error("--relation must be le or ge");
            }
        }
        if (!threshold.empty()) {
            q.threshold = Rational::parse(threshold);
        } else if (need_threshold && !embedded) {
            throw Error("missing --threshold (no query in the model file)");
        }
        if (!eps.empty()) {
            q.promise_gap = Rational::parse(eps);
        }
        if (need_eps && !q.promise_gap) {
            throw Error("missing --eps (no promise gap in the model file)");
        }
        check_query(m, q);
        return q;
    }
};

json query_json(const AimcModel& m, const Query& q) {
    json j{{"source", m.name(q.source)},
           {"target", m.name(q.target)},
           {"relation", std::string(relation_name(q.relation))},
           {"threshold", q.threshold.str()}};
    if (q.promise_gap) {
        j["epsilon"] = q.promise_gap->str();
    }
    return j;
}

// ---- commands --------------------------------------------------------------

Outcome run_validate(const std::string& path) {
    Outcome o;
    o.params["model"] = path;
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const auto diags = validate(in.doc.model);
    o.result["valid"] = diags.empty();
    o.result["diagnostics"] = json::array();
    for (const auto& d : diags) {
        o.result["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
        o.text += d.code + ": " + d.message + "\n";
    }
    if (diags.empty()) {
        o.text = "valid\n";
    }
    o.code = diags.empty() ? Yes : No;
    return o;
}

Outcome run_structure(const std::string& path) {
    Outcome o;
    o.params["model"] = path;
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const graph::StructureStatus st = graph::structure_status(in.doc.model);
    o.result["kind"] = graph::kind_name(st.kind);
    if (st.epsilon) {
        o.result["epsilon"] = st.epsilon->str();
    }
    if (st.kind == graph::StructureKind::Uncertain) {
        o.result["optional_edges"] = edge_names(in.doc.model, st.optional_edges);
    }
    o.text = o.result.dump(2) + "\n";
    return o;
}

Outcome run_reach(const std::string& path, const QueryFlags& qf) {
    Outcome o;
    o.params["model"] = path;
    qf.echo(o.params);
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const Query q = qf.resolve(in.doc, false, false);
    const MarkovChain chain = to_markov_chain(in.doc.model);
    const Rational p = exact::reach_prob(chain, q.source, q.target);
    o.result["source"] = in.doc.model.name(q.source);
    o.result["target"] = in.doc.model.name(q.target);
    o.result["probability"] = p.str();
    o.result["decimal"] = p.to_decimal(12);
    o.text = "probability: " + p.str() + "\ndecimal: " + p.to_decimal(12) + "\n";
    return o;
}

Outcome run_qual(const std::string& path, const QueryFlags& qf, const std::string& witness_path) {
    Outcome o;
    o.params["model"] = path;
    qf.echo(o.params);
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const Query q = qf.resolve(in.doc, true, false);
    const qual::QualAnswer a = qual::qual_decide(in.doc.model, q);
    o.result["query"] = query_json(in.doc.model, q);
    o.result["decision"] = a.decision;
    o.counters["structures_explored"] = a.structures_explored;
    if (a.witness_chain) {
        o.result["witness_structure"] = edge_names(in.doc.model, a.witness_structure->edges());
        if (!witness_path.empty()) {
            write_file(witness_path, serialize(*a.witness_chain));
            o.result["witness_file"] = witness_path;
        }
    }
    o.text = std::string("decision: ") + (a.decision ? "yes" : "no") +
             "\nstructures explored: " + std::to_string(a.structures_explored) + "\n";
    o.code = a.decision ? Yes : No;
    return o;
}

struct EtrFlags {
    std::string mode = "fixed";
    std::string out;
    std::string solver;
    double timeout = 60;
};

Outcome run_etr(const std::string& path, const QueryFlags& qf, const EtrFlags& ef, bool json_out) {
    Outcome o;
    o.params["model"] = path;
    qf.echo(o.params);
    o.params["mode"] = ef.mode;
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const Query q = qf.resolve(in.doc, true, false);
    etr::Encoding enc;
    if (ef.mode == "fixed") {
        enc = etr::build_formula_fixed(in.doc.model, q);
    } else if (ef.mode == "full") {
        enc = etr::build_formula_full(in.doc.model, q);
    } else {
        throw Error("--mode must be fixed or full");
    }
    const std::string script = etr::emit_smtlib(enc.formula);
    o.result["variables"] = enc.formula.variables.size();
    o.result["atoms"] = enc.formula.atoms.size();
    o.result["class_variables"] = enc.class_var.size();
    o.result["y_variables"] = enc.y_var.size();
    if (!ef.out.empty()) {
        write_file(ef.out, script);
        o.result["script_file"] = ef.out;
    }
    std::string solver = ef.solver;
    if (solver.empty()) {
        if (const char* env = std::getenv("AIMC_SOLVER")) {
            solver = env;
        }
    }
    if (solver.empty()) {
        o.result["status"] = "not-solved";
        if (ef.out.empty()) {
            if (json_out) {
                o.result["script"] = script;
            } else {
                o.text = script;
            }
        } else {
            o.text = "wrote " + ef.out + " (" + std::to_string(enc.formula.variables.size()) + " variables)\n";
        }
        return o;
    }
    const auto timeout = std::chrono::milliseconds(static_cast<long long>(ef.timeout * 1000));
    const etr::SolveResult r = etr::solve_external(enc.formula, solver, timeout);
    static const char* const names[] = {"sat", "unsat", "unknown"};
    o.result["status"] = names[static_cast<int>(r.status)];
    json assignment = json::object();
    for (const auto& [name, v] : r.assignment) {
        assignment[name] = v.str();
    }
    if (r.status == etr::SolveStatus::Sat) {
        o.result["assignment"] = assignment;
        o.result["inexact"] = r.inexact;
        if (r.verified) {
            o.result["verified"] = *r.verified;
        }
    }
    if (!r.diagnostics.empty()) {
        o.result["diagnostics"] = r.diagnostics;
    }
    o.text = std::string(names[static_cast<int>(r.status)]) + "\n";
    for (const auto& [name, v] : r.assignment) {
        o.text += name + " = " + v.str() + "\n";
    }
    switch (r.status) {
    case etr::SolveStatus::Sat:
        o.code = r.verified.value_or(true) ? Yes : Unknown;
        break;
    case etr::SolveStatus::Unsat:
        o.code = No;
        break;
    case etr::SolveStatus::Unknown:
        o.code = Unknown;
        break;
    }
    return o;
}

Outcome run_approx(const std::string& path, const QueryFlags& qf, std::optional<std::uint64_t> budget,
                   unsigned jobs) {
    Outcome o;
    o.params["model"] = path;
    qf.echo(o.params);
    if (budget) {
        o.params["budget"] = *budget;
    }
    const Loaded in = load(path);
    o.model_hash = in.hash;
    const Query q = qf.resolve(in.doc, true, true);
    approx::ApproxOptions opts;
    opts.budget = env_budget(budget);
    opts.jobs = jobs;
    const approx::ApproxAnswer a = approx::approx_decide(in.doc.model, q, opts);
    o.result["query"] = query_json(in.doc.model, q);
    o.result["decision"] = a.decision == approx::Decision::Accept ? "accept" : "reject";
    if (a.witness) {
        o.result["witness_prob"] = a.witness_prob->str();
        o.result["witness_prob_decimal"] = a.witness_prob->to_decimal(12);
        o.result["witness"] = chain_json(*a.witness);
    }
    o.result["grid_spacing"] = a.spacing.str();
    o.result["epsilon_struct"] = a.epsilon_struct.str();
    o.counters["grid_cardinality"] = a.grid_cardinality;
    o.counters["grid_chains_visited"] = a.grid_chains_visited;
    json shown = o.result;
    shown["grid_cardinality"] = a.grid_cardinality;
    shown["grid_chains_visited"] = a.grid_chains_visited;
    o.text = shown.dump(2) + "\n";
    o.code = a.decision == approx::Decision::Accept ? Yes : No;
    return o;
}

struct OracleFlags {
    std::string mode = "grid";
    std::uint64_t resolution = 16;
    std::uint64_t count = 1000;
    std::uint64_t seed = oracle::SampleMode{}.seed;
    std::uint64_t denominator_cap = oracle::SampleMode{}.denominator_cap;
};

Outcome run_oracle(const std::string& path, const QueryFlags& qf, const OracleFlags& of,
                   std::optional<std::uint64_t> budget, unsigned jobs) {
    Outcome o;
    o.params["model"] = path;
    qf.echo(o.params);
    o.params["mode"] = of.mode;
    const Loaded in = load(path);
    o.model_hash = in.hash;
    Query q = qf.resolve(in.doc, false, false);
    oracle::Mode mode;
    json mode_json;
    if (of.mode == "grid") {
        mode = oracle::GridMode{of.resolution};
        mode_json = {{"kind", "grid"}, {"resolution", of.resolution}};
    } else if (of.mode == "sample") {
        mode = oracle::SampleMode{of.count, of.seed, of.denominator_cap};
        mode_json = {{"kind", "sample"}, {"count", of.count}, {"seed", of.seed}, {"denominator_cap", of.denominator_cap}};
    } else {
        throw Error("--mode must be grid or sample");
    }
    o.params["mode_options"] = mode_json;
    if (budget) {
        o.params["budget"] = *budget;
    }
    oracle::Options opts;
    opts.budget = env_budget(budget);
    opts.jobs = jobs;
    const oracle::OracleResult r = oracle::brute_force_opt(in.doc.model, q, mode, opts);
    o.result["objective"] = q.relation == Relation::Ge ? "max" : "min";
    o.result["best_prob"] = r.best_prob.str();
    o.result["best_prob_decimal"] = r.best_prob.to_decimal(12);
    o.result["best_chain"] = chain_json(r.best_chain);
    o.result["mode"] = mode_json;
    o.counters["evaluations"] = r.evaluations;
    json shown = o.result;
    shown["evaluations"] = r.evaluations;
    o.text = shown.dump(2) + "\n";
    return o;
}

void emit_model(Outcome& o, const AimcModel& model, const Query& q, const std::string& out_path) {
    const std::string text = serialize(model, q);
    o.result["vertices"] = model.size();
    o.result["transitions"] = model.transitions().size();
    o.result["constraints"] = model.constraints().size();
    o.result["query"] = query_json(model, q);
    if (out_path.empty()) {
        o.result["model"] = json::parse(text);
        o.text = text;
    } else {
        write_file(out_path, text);
        o.result["model_file"] = out_path;
        o.text = "wrote " + out_path + " (" + std::to_string(model.size()) + " vertices)\n";
    }
}

Outcome run_gadget_sat(const std::string& cnf_path, const std::string& out_path) {
    Outcome o;
    o.params["cnf"] = cnf_path;
    const std::string bytes = read_file(cnf_path);
    o.model_hash = fnv1a(bytes);
    const gadgets::Cnf cnf = gadgets::parse_dimacs(bytes);
    const gadgets::Instance inst = gadgets::encode_3sat(cnf);
    o.result["variables"] = cnf.num_vars;
    o.result["clauses"] = cnf.clauses.size();
    emit_model(o, inst.model, inst.query, out_path);
    return o;
}

struct SqrtFlags {
    std::vector<long> r;
    long k = 0;
    std::optional<long> M;
    std::optional<long> N;
    std::string xlo;
    std::string xhi;
};

Outcome run_gadget_sqrtsum(const SqrtFlags& sf, const std::string& out_path) {
    Outcome o;
    o.params["r"] = sf.r;
    o.params["k"] = sf.k;
    gadgets::SqrtSumOptions opts;
    opts.M = sf.M;
    opts.N = sf.N;
    if (sf.M) {
        o.params["M"] = *sf.M;
    }
    if (sf.N) {
        o.params["N"] = *sf.N;
    }
    if (!sf.xlo.empty()) {
        opts.x_lo = Rational::parse(sf.xlo);
        o.params["xlo"] = sf.xlo;
    }
    if (!sf.xhi.empty()) {
        opts.x_hi = Rational::parse(sf.xhi);
        o.params["xhi"] = sf.xhi;
    }
    const gadgets::SqrtSumInstance inst = gadgets::encode_sqrtsum(sf.r, sf.k, opts);
    json beta = json::array();
    for (const auto& b : inst.params.beta) {
        beta.push_back(b.str());
    }
    o.result["parameters"] = {{"M", inst.params.M},
                              {"N", inst.params.N},
                              {"alpha", inst.params.alpha.str()},
                              {"beta", beta},
                              {"x_interval", inst.params.x_interval.str()},
                              {"threshold", inst.params.threshold.str()}};
    emit_model(o, inst.model, inst.query, out_path);
    if (!out_path.empty()) {
        o.text += "threshold: " + inst.params.threshold.str() + "\n";
    }
    return o;
}

Outcome run_gadget_poly(const std::string& poly_path, const std::string& tau, const std::string& out_path) {
    Outcome o;
    o.params["poly"] = poly_path;
    o.params["tau"] = tau;
    const std::string bytes = read_file(poly_path);
    o.model_hash = fnv1a(bytes);
    const gadgets::PolyProblem problem = gadgets::parse_poly_problem(bytes);
    const gadgets::PolyEncoding enc = gadgets::rewrite_polynomial(problem.poly);
    const gadgets::Instance inst = gadgets::encode_polynomial(problem, Rational::parse(tau));
    o.result["encoding"] = {{"offset", enc.offset.str()}, {"scale", enc.scale.str()}, {"terms", enc.terms.size()}};
    emit_model(o, inst.model, inst.query, out_path);
    return o;
}

} // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Augmented interval Markov chain toolkit", "aimc"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_out = false;
    bool timing = false;
    app.add_flag("--json", json_out, "print a machine-readable report");
    app.add_flag("--timing", timing, "include wall-clock timing in the report");

    std::string model;
    QueryFlags qf;
    std::optional<std::uint64_t> budget;
    unsigned jobs = 1;
    std::function<Outcome()> action;

    auto* validate_cmd = app.add_subcommand("validate", "check model invariants");
    validate_cmd->add_option("model", model, "model JSON")->required();
    validate_cmd->callback([&] { action = [&] { return run_validate(model); }; });

    auto* structure_cmd = app.add_subcommand("structure", "classify the refinement structure");
    structure_cmd->add_option("model", model, "model JSON")->required();
    structure_cmd->callback([&] { action = [&] { return run_structure(model); }; });

    auto* reach_cmd = app.add_subcommand("reach", "exact reachability in a fully determined model");
    reach_cmd->add_option("model", model, "model JSON")->required();
    qf.add(reach_cmd, false, false);
    reach_cmd->callback([&] { action = [&] { return run_reach(model, qf); }; });

    std::string witness;
    auto* qual_cmd = app.add_subcommand("qual", "qualitative reachability (threshold 0 or 1)");
    qual_cmd->add_option("model", model, "model JSON")->required();
    qf.add(qual_cmd, true, false);
    qual_cmd->add_option("--witness", witness, "write the witness chain here");
    qual_cmd->callback([&] { action = [&] { return run_qual(model, qf, witness); }; });

    EtrFlags ef;
    auto* etr_cmd = app.add_subcommand("etr", "encode a threshold query as an SMT-LIB script");
    etr_cmd->add_option("model", model, "model JSON")->required();
    qf.add(etr_cmd, true, false);
    etr_cmd->add_option("--mode", ef.mode, "fixed or full")->check(CLI::IsMember({"fixed", "full"}));
    etr_cmd->add_option("--out", ef.out, "script output file");
    etr_cmd->add_option("--solver", ef.solver, "solver command with {file} placeholder");
    etr_cmd->add_option("--timeout", ef.timeout, "solver timeout in seconds");
    etr_cmd->callback([&] { action = [&] { return run_etr(model, qf, ef, json_out); }; });

    auto* approx_cmd = app.add_subcommand("approx", "promise decision by grid search");
    approx_cmd->add_option("model", model, "model JSON")->required();
    qf.add(approx_cmd, true, true);
    approx_cmd->add_option("--budget", budget, "maximum number of grid chains");
    approx_cmd->add_option("--jobs", jobs, "worker threads");
    approx_cmd->callback([&] { action = [&] { return run_approx(model, qf, budget, jobs); }; });

    OracleFlags of;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum over refinements");
    oracle_cmd->add_option("model", model, "model JSON")->required();
    qf.add(oracle_cmd, false, false);
    oracle_cmd->add_option("--mode", of.mode, "grid or sample")->check(CLI::IsMember({"grid", "sample"}));
    oracle_cmd->add_option("--resolution", of.resolution, "grid divisions per class");
    oracle_cmd->add_option("--count", of.count, "number of samples");
    oracle_cmd->add_option("--seed", of.seed, "sampling seed");
    oracle_cmd->add_option("--denominator-cap", of.denominator_cap, "sampling denominator bound");
    oracle_cmd->add_option("--budget", budget, "maximum number of evaluations");
    oracle_cmd->add_option("--jobs", jobs, "worker threads");
    oracle_cmd->callback([&] { action = [&] { return run_oracle(model, qf, of, budget, jobs); }; });

    std::string out_path;
    auto* gadget_cmd = app.add_subcommand("gadget", "generate reduction instances");
    gadget_cmd->require_subcommand(1);
    std::string cnf_path;
    auto* sat_cmd = gadget_cmd->add_subcommand("sat", "3-SAT to qualitative reachability");
    sat_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    sat_cmd->add_option("--out", out_path, "model output file");
    sat_cmd->callback([&] { action = [&] { return run_gadget_sat(cnf_path, out_path); }; });

    SqrtFlags sf;
    auto* sqrt_cmd = gadget_cmd->add_subcommand("sqrtsum", "square-root sum to reachability");
    sqrt_cmd->add_option("--r", sf.r, "comma-separated positive integers")->required()->delimiter(',');
    sqrt_cmd->add_option("--k", sf.k, "positive integer bound")->required();
    sqrt_cmd->add_option("--M", sf.M, "override M");
    sqrt_cmd->add_option("--N", sf.N, "override N");
    sqrt_cmd->add_option("--xlo", sf.xlo, "override the lower end of the x interval (p/q)");
    sqrt_cmd->add_option("--xhi", sf.xhi, "override the upper end of the x interval (p/q)");
    sqrt_cmd->add_option("--out", out_path, "model output file");
    sqrt_cmd->callback([&] { action = [&] { return run_gadget_sqrtsum(sf, out_path); }; });

    std::string poly_path;
    std::string tau;
    auto* poly_cmd = gadget_cmd->add_subcommand("poly", "polynomial optimization to reachability");
    poly_cmd->add_option("--poly", poly_path, "polynomial JSON file")->required();
    poly_cmd->add_option("--tau", tau, "threshold as p/q")->required();
    poly_cmd->add_option("--out", out_path, "model output file");
    poly_cmd->callback([&] { action = [&] { return run_gadget_poly(poly_path, tau, out_path); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        if (app.get_subcommands().empty()) {
            err << app.help();
        }
        return Failure;
    }

    std::string command;
    for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
        sub = sub->get_subcommands().front();
        command += (command.empty() ? "" : " ") + sub->get_name();
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    std::optional<std::string> error;
    try {
        o = action();
    } catch (const approx::BudgetExceeded& e) {
        error = e.what();
        o.result["grid_cardinality"] = e.cardinality().get_str();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const int code = error ? Failure : o.code;

    if (json_out) {
        json report;
        report["command"] = command;
        report["params"] = o.params;
        report["exit_code"] = code;
        if (o.model_hash) {
            report["model_hash"] = *o.model_hash;
        }
        report["result"] = o.result;
        report["counters"] = o.counters;
        if (error) {
            report["error"] = *error;
        }
        if (timing) {
            report["timing"] = {{"elapsed_ms", elapsed}};
        }
        out << report.dump(2) << "\n";
    } else if (!error) {
        out << o.text;
        if (timing) {
            out << "elapsed: " << elapsed << " ms\n";
        }
    }
    if (error) {
        err << "error: " << *error << "\n";
    }
    return code;
}

} // namespace aimc::cli
