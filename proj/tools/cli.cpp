#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "calpkit/calpkit.hpp"

namespace calpkit::cli {

namespace {

using io::json;

std::string fmt(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) fail(ErrorKind::InvalidInput, "cannot write '" + path + "'");
    f << text;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

struct Common {
    bool as_json = false;
};

// ---- validate ----

struct ValidateArgs {
    std::string instance;
    std::string embedding;
    bool restricted = false;
};

int cmd_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
    auto j = io::read_json_file(a.instance);
    ValidationReport rep;
    std::optional<Instance> inst;
    try {
        inst = io::instance_from_json(j);
        rep.merge(validate_network(inst->net));
        rep.merge(validate_computation_dag(inst->dag));
        if (rep.ok()) {
            try {
                resolve_pins(inst->net, inst->dag);
            } catch (const Error& e) {
                rep.add("pairing", e.what());
            }
        }
    } catch (const Error& e) {
        rep.add("format", e.what());
    }
    if (rep.ok() && !a.embedding.empty()) {
        auto emb = io::embedding_from_json(inst->net, inst->dag, io::read_json_file(a.embedding));
        rep.merge(a.restricted ? validate_rembedding(inst->net, inst->dag, emb)
                               : validate_embedding(inst->net, inst->dag, emb));
    }
    if (c.as_json) {
        emit(out, io::to_json(rep));
    } else {
        out << (rep.ok() ? "valid" : "invalid") << '\n';
        for (const auto& v : rep.violations) out << "  " << v.property << ": " << v.detail << '\n';
        for (const auto& w : rep.warnings) out << "  warning: " << w << '\n';
    }
    return rep.ok() ? 0 : 1;
}

// ---- mincost ----

struct MincostArgs {
    std::string instance;
    std::string model = "CC";
    std::string solver = "oracle";
    int max_width = 4;
    std::uint64_t seed = 1;
    int trials = 16;
    std::string out;
};

int cmd_mincost(const MincostArgs& a, const Common& c, std::ostream& out) {
    if (a.model != "C" && a.model != "CC") fail(ErrorKind::InvalidInput, "--model must be C or CC");
    const bool model_c = a.model == "C";
    auto I = io::read_instance(a.instance);
    const auto prices = I.net.weights();
    json extra = json::object();
    std::optional<Embedding> general;
    REmbedding emb;
    bool exact = false;

    // CC-based strategies rerouted along Steiner trees when the C model is asked for.
    auto finish_cc = [&](const REmbedding& r) {
        if (!model_c) return r;
        DistanceMatrix dist(I.net, prices);
        SteinerCache cache(I.net, dist);
        return steiner_rembedding(I.net, I.dag, r.assignment, cache);
    };

    if (a.solver == "oracle") {
        auto r = model_c ? mincost_c_exact(I.net, I.dag, prices) : mincost_cc_exact(I.net, I.dag, prices);
        emb = r.emb;
        exact = true;
    } else if (a.solver == "tree") {
        emb = finish_cc(tree_dp_mincost_cc(I.net, I.dag, prices).emb);
        exact = !model_c;
    } else if (a.solver == "layered") {
        emb = finish_cc(layered_dp_mincost_cc(I.net, I.dag, prices, a.max_width).emb);
        exact = !model_c;
    } else if (a.solver == "spantree") {
        auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, prices, I.tree);
        emb = finish_cc(r.emb);
        extra["tree_cost"] = io::number(r.tree_cost);
        extra["F"] = r.F;
        extra["bound"] = io::number(r.bound);
        extra["weighted_bound"] = io::number(r.weighted_bound);
    } else if (a.solver == "emlp") {
        auto lp = solve_earthmover_lp(I.net, I.dag, prices);
        DistanceMatrix dist(I.net, prices);
        if (a.trials < 1) fail(ErrorKind::InvalidInput, "--trials must be positive");
        double best = kInf, sum = 0.0;
        for (int k = 0; k < a.trials; ++k) {
            auto r = ckr_round(I.net, I.dag, lp.placement, dist, a.seed + static_cast<std::uint64_t>(k));
            sum += r.cost;
            if (r.cost < best) best = r.cost, emb = r.emb;
        }
        emb = finish_cc(emb);
        extra["lp_value"] = io::number(lp.lp_value);
        extra["mean_rounded"] = io::number(sum / a.trials);
        extra["trials"] = a.trials;
    } else if (a.solver == "twonode") {
        if (!model_c) fail(ErrorKind::InvalidInput, "the two-node solver optimizes the C model; use --model C");
        auto r = mincost_twonode(I.net, I.dag, prices);
        general = r.emb;
        exact = true;
    } else {
        fail(ErrorKind::InvalidInput, "unknown solver '" + a.solver + "'");
    }

    double cost = 0.0;
    json emb_json;
    if (general) {
        cost = cost_C(I.net, I.dag, *general, prices);
        emb_json = io::to_json(I.net, I.dag, *general);
    } else {
        cost = model_c ? cost_C(I.net, I.dag, emb, prices) : cost_CC(I.net, I.dag, emb, prices);
        emb_json = io::to_json(I.net, I.dag, emb);
    }
    if (!a.out.empty()) write_text(a.out, emb_json.dump(2) + "\n");
    if (c.as_json) {
        json j = {{"instance", I.name}, {"model", a.model}, {"solver", a.solver},
                  {"cost", io::number(cost)}, {"exact", exact}, {"embedding", emb_json}};
        for (const auto& [k, v] : extra.items()) j[k] = v;
        emit(out, j);
    } else {
        out << "cost=" << fmt(cost) << '\n';
        out << "model=" << a.model << " solver=" << a.solver << " exact=" << (exact ? "true" : "false") << '\n';
        for (const auto& [k, v] : extra.items())
            out << k << '=' << (v.is_number() ? fmt(v.get<double>()) : v.dump()) << '\n';
    }
    return 0;
}

// ---- rate ----

struct RateArgs {
    std::string instance;
    std::string columns;
    std::string pricing;
    bool mwu = false;
    double epsilon = 0.1;
    std::uint64_t seed = 1;
    int max_width = 4;
    std::string out;
};

RateSolution compute_rate(const Instance& I, const RateArgs& a) {
    std::vector<RateColumn> cols;
    if (!a.columns.empty()) cols = io::columns_from_json(I.net, I.dag, io::read_json_file(a.columns));
    std::string pricing = a.pricing.empty() ? (cols.empty() ? "oracle" : "none") : a.pricing;
    auto p = parse_pricing(pricing);
    if (!p) fail(ErrorKind::InvalidInput, "unknown pricing '" + pricing + "'");
    PricingOptions opt;
    opt.strategy = *p;
    opt.seed = a.seed;
    opt.layered_max_width = a.max_width;
    if (a.mwu) {
        if (*p == Pricing::None) fail(ErrorKind::InvalidInput, "--mwu needs a pricing strategy");
        return solve_rcalp_mwu(I.net, I.dag, a.epsilon, opt);
    }
    if (*p == Pricing::None && cols.empty()) fail(ErrorKind::InvalidInput, "pricing 'none' needs --columns");
    return solve_rcalp_colgen(I.net, I.dag, opt, cols);
}

void print_rate(std::ostream& out, const Instance& I, const RateSolution& sol) {
    out << "R=" << fmt(sol.R) << '\n';
    out << "status=" << to_string(sol.status) << " ratio=" << fmt(sol.ratio) << " upper_bound=" << fmt(sol.upper_bound)
        << " rounds=" << sol.rounds << " pricing=" << sol.pricing << '\n';
    for (const auto& col : sol.columns)
        if (col.flow > 0.0) out << "  " << col.name << " flow=" << fmt(col.flow) << '\n';
    (void)I;
}

int cmd_rate(const RateArgs& a, const Common& c, std::ostream& out) {
    auto I = io::read_instance(a.instance);
    auto sol = compute_rate(I, a);
    auto j = io::to_json(I.net, I.dag, sol);
    if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
    if (c.as_json)
        emit(out, j);
    else
        print_rate(out, I, sol);
    return sol.status == RateStatus::Unbounded ? 2 : 0;
}

// ---- schedule ----

struct ScheduleArgs {
    RateArgs rate;
    std::string solution;
    double eps = 1e-2;
    std::string trace;
};

int cmd_schedule(const ScheduleArgs& a, const Common& c, std::ostream& out) {
    auto I = io::read_instance(a.rate.instance);
    RateSolution sol = a.solution.empty() ? compute_rate(I, a.rate)
                                          : io::rate_solution_from_json(I.net, I.dag, io::read_json_file(a.solution));
    auto tr = build_schedule(I.net, I.dag, sol, a.eps);
    auto rep = validate_schedule(I.net, I.dag, tr);
    if (a.trace == "-") {
        io::write_trace(out, I.net, I.dag, tr);
        return rep.report.ok() ? 0 : 2;
    }
    if (!a.trace.empty()) {
        std::ofstream f(a.trace);
        if (!f) fail(ErrorKind::InvalidInput, "cannot write '" + a.trace + "'");
        io::write_trace(f, I.net, I.dag, tr);
    }
    if (c.as_json) {
        json N = json::object();
        for (int e = 0; e < I.net.m(); ++e)
            N[I.net.id(I.net.edge(e).u) + "-" + I.net.id(I.net.edge(e).v)] = io::number(rep.N[e]);
        emit(out, {{"K", tr.K}, {"events", tr.events.size()}, {"R", io::number(sol.R)},
                   {"lambda", io::number(rep.lambda)}, {"valid", rep.report.ok()}, {"N", N}});
    } else {
        out << "K=" << tr.K << " events=" << tr.events.size() << '\n';
        out << "R=" << fmt(sol.R) << " lambda=" << fmt(rep.lambda) << '\n';
        out << (rep.report.ok() ? "valid" : "invalid") << '\n';
        for (const auto& v : rep.report.violations) out << "  " << v.property << ": " << v.detail << '\n';
    }
    return rep.report.ok() ? 0 : 2;
}

// ---- validate-schedule ----

struct ValidateScheduleArgs {
    std::string instance;
    std::string trace;
    bool flows = false;
};

int cmd_validate_schedule(const ValidateScheduleArgs& a, const Common& c, std::ostream& out) {
    auto I = io::read_instance(a.instance);
    std::ifstream f(a.trace);
    if (!f) fail(ErrorKind::InvalidInput, "cannot read '" + a.trace + "'");
    auto tr = io::read_trace(f, I.net, I.dag);
    auto rep = validate_schedule(I.net, I.dag, tr);
    std::optional<RateSolution> sol;
    if (a.flows && rep.report.ok()) sol = schedule_to_flows(I.net, I.dag, tr);
    if (c.as_json) {
        json N = json::object();
        for (int e = 0; e < I.net.m(); ++e)
            N[I.net.id(I.net.edge(e).u) + "-" + I.net.id(I.net.edge(e).v)] = io::number(rep.N[e]);
        json j = io::to_json(rep.report);
        j["K"] = tr.K;
        j["lambda"] = io::number(rep.lambda);
        j["N"] = N;
        j["final_ok"] = rep.final_ok;
        j["first_bad_event"] = rep.first_bad_event;
        if (sol) j["flows"] = io::to_json(I.net, I.dag, *sol);
        emit(out, j);
    } else {
        out << (rep.report.ok() ? "valid" : "invalid") << " K=" << tr.K << " lambda=" << fmt(rep.lambda) << '\n';
        for (const auto& v : rep.report.violations) out << "  " << v.property << ": " << v.detail << '\n';
        for (int e = 0; e < I.net.m(); ++e)
            out << "  N(" << I.net.id(I.net.edge(e).u) << '-' << I.net.id(I.net.edge(e).v) << ")=" << fmt(rep.N[e])
                << '\n';
        if (sol) print_rate(out, I, *sol);
    }
    return rep.report.ok() ? 0 : 1;
}

// ---- reduce ----

struct MaxcutArgs {
    std::string graph;
    std::string out;
    std::string embedding;
    std::optional<double> claim;
    bool search = false;
    bool allow_noncubic = false;
};

int cmd_reduce_maxcut(const MaxcutArgs& a, const Common& c, std::ostream& out) {
    auto H = io::graph_from_text(io::read_file(a.graph));
    auto inst = build_maxcut_instance(H, !a.allow_noncubic);
    const int E = static_cast<int>(H.edges.size());
    if (!a.out.empty()) {
        Instance I{"maxcut", inst.net, inst.dag, std::nullopt};
        write_text(a.out, io::to_json(I).dump(2) + "\n");
    }
    json j = {{"h_vertices", H.vertices.size()}, {"h_edges", E}, {"dag_vertices", inst.dag.size()},
              {"dag_edges", inst.dag.num_edges()}};
    std::optional<int> mc;
    if (H.vertices.size() <= 24) {
        mc = max_cut_bruteforce(H);
        j["max_cut"] = *mc;
        j["expected_min_cost"] = 28 * E - *mc;
    }
    if (a.search) {
        auto s = canonical_search_min(inst);
        j["canonical_min_cost"] = io::number(s.cost);
        j["assignments"] = s.assignments;
    }
    if (!a.embedding.empty()) {
        auto emb = io::embedding_from_json(inst.net, inst.dag, io::read_json_file(a.embedding));
        auto canon = canonicalize_embedding(inst, emb);
        auto cert = embedding_to_maxcut(inst, canon.emb.general());
        json v1 = json::array();
        for (size_t i = 0; i < H.vertices.size(); ++i)
            if (cert.in_v1[i]) v1.push_back(H.vertices[i]);
        j["certificate"] = {{"input_cost", io::number(canon.original_cost)},
                            {"canonical_cost", io::number(canon.cost)},
                            {"complete", canon.complete},
                            {"V1", v1},
                            {"crossing", cert.crossing},
                            {"guaranteed", cert.guaranteed},
                            {"certified", cert.certified}};
    }
    if (a.claim) {
        auto chk = certify_claimed_cost(inst, *a.claim);
        j["claim"] = {{"cost", io::number(*a.claim)}, {"implied_cut", chk.implied_cut}, {"max_cut", chk.max_cut},
                      {"contradiction", chk.contradiction}};
    }
    if (c.as_json) {
        emit(out, j);
    } else {
        for (const auto& [k, v] : j.items())
            out << k << '=' << (v.is_number() ? fmt(v.get<double>()) : v.dump()) << '\n';
    }
    return 0;
}

struct TwoCutArgs {
    std::string instance;
    std::string out;
};

int cmd_reduce_2cut(const TwoCutArgs& a, const Common& c, std::ostream& out) {
    auto I = io::read_instance(a.instance);
    const auto prices = I.net.weights();
    auto tc = build_2cut_instance(I.net, I.dag, prices);
    auto sol = solve_2cut(tc.inst);
    auto emb = cut_to_embedding(I.net, I.dag, tc, sol, prices);
    json j = {{"instance", io::to_json(tc.inst)}, {"cut", io::to_json(tc.inst, sol)},
              {"cost", io::number(emb.cost)}, {"embedding", io::to_json(I.net, I.dag, emb.emb)}};
    if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
    if (c.as_json) {
        emit(out, j);
    } else {
        out << "cut_weight=" << fmt(sol.weight) << '\n';
        out << "cost=" << fmt(emb.cost) << '\n';
        out << "J1=" << j["cut"]["J1"].dump() << '\n';
        out << "J2=" << j["cut"]["J2"].dump() << '\n';
        out << "J3=" << j["cut"]["J3"].dump() << '\n';
    }
    return 0;
}

int exit_code(const Error& e) { return e.kind() == ErrorKind::InvalidInput ? 1 : 2; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"calpkit: computing rates of DAG-structured functions over capacitated networks"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.as_json, "machine-readable JSON output");

    ValidateArgs va;
    auto* v = app.add_subcommand("validate", "check an instance (and optionally an embedding)");
    v->add_option("instance", va.instance, "instance JSON")->required();
    v->add_option("--embedding", va.embedding, "embedding JSON to check against the instance");
    v->add_flag("--restricted", va.restricted, "require a single path per DAG edge");

    MincostArgs ma;
    auto* m = app.add_subcommand("mincost", "minimum-cost embedding");
    m->add_option("instance", ma.instance, "instance JSON")->required();
    m->add_option("--model", ma.model, "cost model: C or CC")->capture_default_str();
    m->add_option("--solver", ma.solver, "oracle | tree | layered | spantree | emlp | twonode")->capture_default_str();
    m->add_option("--max-width", ma.max_width, "layer width limit of the layered DP")->capture_default_str();
    m->add_option("--seed", ma.seed, "first rounding seed")->capture_default_str();
    m->add_option("--trials", ma.trials, "rounding trials for emlp")->capture_default_str();
    m->add_option("--out", ma.out, "write the embedding JSON here");

    auto add_rate_options = [](CLI::App* s, RateArgs& r) {
        s->add_option("instance", r.instance, "instance JSON")->required();
        s->add_option("--columns", r.columns, "initial columns JSON");
        s->add_option("--pricing", r.pricing, "none | oracle | tree | layered | spantree | emlp");
        s->add_flag("--mwu", r.mwu, "multiplicative-weights packing instead of the master LP");
        s->add_option("--epsilon", r.epsilon, "accuracy of --mwu")->capture_default_str();
        s->add_option("--seed", r.seed, "seed for randomized pricing")->capture_default_str();
        s->add_option("--max-width", r.max_width, "layer width limit of layered pricing")->capture_default_str();
    };
    RateArgs ra;
    auto* r = app.add_subcommand("rate", "maximum computing rate (R-CALP)");
    add_rate_options(r, ra);
    r->add_option("--out", ra.out, "write the solution JSON here");

    ScheduleArgs sa;
    auto* s = app.add_subcommand("schedule", "routing-computing schedule from a rate solution");
    add_rate_options(s, sa.rate);
    s->add_option("--solution", sa.solution, "rate solution JSON (from rate --out)");
    s->add_option("--eps", sa.eps, "rationalization slack")->capture_default_str();
    s->add_option("--trace", sa.trace, "write the JSONL trace here ('-' for stdout)");

    ValidateScheduleArgs vsa;
    auto* vs = app.add_subcommand("validate-schedule", "replay a JSONL trace");
    vs->add_option("instance", vsa.instance, "instance JSON")->required();
    vs->add_option("trace", vsa.trace, "JSONL trace")->required();
    vs->add_flag("--flows", vsa.flows, "recover embedding flows from the trace");

    auto* red = app.add_subcommand("reduce", "constructive reductions");
    red->require_subcommand(1);
    MaxcutArgs mca;
    auto* mc = red->add_subcommand("maxcut", "max-cut gadget instance from an undirected graph");
    mc->add_option("graph", mca.graph, "edge list (text 'u v' lines or JSON)")->required();
    mc->add_option("--out", mca.out, "write the instance JSON here");
    mc->add_option("--embedding", mca.embedding, "embedding to canonicalize and convert to a cut");
    mc->add_option("--claim", mca.claim, "check a claimed minimum cost against the max cut");
    mc->add_flag("--search", mca.search, "exhaustive canonical search for the minimum cost");
    mc->add_flag("--allow-noncubic", mca.allow_noncubic, "accept graphs that are not 3-regular");
    TwoCutArgs tca;
    auto* tc = red->add_subcommand("2cut", "exact two-node solver through 2-Cut");
    tc->add_option("instance", tca.instance, "two-node instance JSON")->required();
    tc->add_option("--out", tca.out, "write the cut and embedding JSON here");

    BenchConfig bc;
    std::string bench_out;
    bool no_timing = false;
    auto* b = app.add_subcommand("bench", "solver/ratio matrix as CSV");
    b->add_option("files", bc.files, "extra instance files");
    b->add_option("--random", bc.random, "number of generated instances")->capture_default_str();
    b->add_option("--seed", bc.seed, "seed of the first generated instance")->capture_default_str();
    b->add_option("--trials", bc.trials, "rounding seeds per instance")->capture_default_str();
    b->add_option("--threads", bc.threads, "worker threads (0: all cores)")->capture_default_str();
    b->add_flag("--no-timing", no_timing, "write 0 in the wall_ms column");
    b->add_option("--out", bench_out, "write the CSV here instead of stdout");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*v) return cmd_validate(va, common, out);
        if (*m) return cmd_mincost(ma, common, out);
        if (*r) return cmd_rate(ra, common, out);
        if (*s) return cmd_schedule(sa, common, out);
        if (*vs) return cmd_validate_schedule(vsa, common, out);
        if (*mc) return cmd_reduce_maxcut(mca, common, out);
        if (*tc) return cmd_reduce_2cut(tca, common, out);
        if (*b) {
            bc.timing = !no_timing;
            if (bench_out.empty()) {
                bench(bc, out);
            } else {
                std::ostringstream csv;
                bench(bc, csv);
                write_text(bench_out, csv.str());
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace calpkit::cli
