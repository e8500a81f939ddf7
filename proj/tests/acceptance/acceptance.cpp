// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;
using calpkit::testing::fixture;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void check(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s) o.fail("took " + fmt(s) + " s, limit " + fmt(limit_s) + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << fmt(s) << " s]";
    if (!o.detail.empty()) std::cout << " -- " << o.detail;
    std::cout << std::endl;
}

std::vector<RateColumn> columns(const Instance& I, const std::string& file) {
    return io::columns_from_json(I.net, I.dag, io::read_json_file(fixture(file)));
}

// Rate solutions re-checked by the scheduler criterion.
std::vector<std::pair<Instance, RateSolution>> solved;

void rate_fixtures(Outcome& o) {
    for (const char* name : {"fig2", "fig1"}) {
        auto t0 = std::chrono::steady_clock::now();
        auto I = io::read_instance(fixture(std::string(name) + ".json"));
        auto sol = solve_packing_lp(I.net, I.dag, columns(I, std::string(name) + "_cols.json"));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.check(std::abs(sol.R - 1.5) <= 1e-9, std::string(name) + " R=" + fmt(sol.R));
        o.check(s < 1.0, std::string(name) + " took " + fmt(s) + " s");
        solved.emplace_back(I, sol);
    }
}

void cost_models(Outcome& o) {
    auto I = io::read_instance(fixture("fig1.json"));
    auto cols = columns(I, "fig1_cols.json");
    const auto& emb = cols.at(0).emb;
    auto r = to_rembedding(I.net, I.dag, emb);
    double c = cost_C(I.net, I.dag, emb, I.net.weights());
    double cc = cost_CC(I.net, I.dag, r, I.net.weights());
    o.check(c == 6.0, "C=" + fmt(c));
    o.check(cc == 7.0, "CC=" + fmt(cc));
}

void usage(Outcome& o) {
    auto I = io::read_instance(fixture("fig2.json"));
    auto cols = columns(I, "fig2_cols.json");
    auto u1 = column_usage(I.net, I.dag, cols.at(0).emb);
    int xz = I.net.edge_between(I.net.index("x"), I.net.index("z"));
    o.check(xz >= 0 && u1[xz] == 2.0, "r_E1(xz)=" + fmt(xz >= 0 ? u1[xz] : -1));
    auto u2 = column_usage(I.net, I.dag, cols.at(1).emb);
    int used = 0;
    for (double r : u2)
        if (r != 0.0) {
            ++used;
            o.check(r == 1.0, "r_E2(e)=" + fmt(r));
        }
    o.check(used > 0, "E2 uses no edge");
}

void rate_oracle(Outcome& o) {
    int count = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; count < 50 && seed < 200; ++seed) {
        auto I = ref::small_instance(seed, static_cast<DagShape>(seed % 3));
        PricingOptions opt;
        auto sol = solve_rcalp_colgen(I.net, I.dag, opt);
        auto ref = ref::rcalp_full_enumeration(I.net, I.dag);
        worst = std::max(worst, std::abs(sol.R - ref.R));
        o.check(std::abs(sol.R - ref.R) <= 1e-6, I.name + ": " + fmt(sol.R) + " vs " + fmt(ref.R));
        solved.emplace_back(I, sol);
        ++count;
    }
    o.check(count >= 50, "only " + std::to_string(count) + " instances");
    o.detail = o.ok ? std::to_string(count) + " instances, max |diff| " + fmt(worst) : o.detail;
}

void structured(Outcome& o) {
    int trees = 0, layered = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Tree);
        auto p = I.net.weights();
        double exact = mincost_cc_exact(I.net, I.dag, p).cost;
        double dp = tree_dp_mincost_cc(I.net, I.dag, p).cost;
        o.check(dp == exact, I.name + " tree " + fmt(dp) + " vs " + fmt(exact));
        ++trees;
    }
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Layered);
        auto p = I.net.weights();
        double exact = mincost_cc_exact(I.net, I.dag, p).cost;
        double dp = layered_dp_mincost_cc(I.net, I.dag, p).cost;
        o.check(dp == exact, I.name + " layered " + fmt(dp) + " vs " + fmt(exact));
        ++layered;
    }
    if (o.ok) o.detail = std::to_string(trees) + " trees, " + std::to_string(layered) + " layered";
}

void two_node(Outcome& o) {
    Rng rng(11);
    int count = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto I = ref::two_node_instance(seed, 4 + static_cast<int>(seed % 7));
        auto p = I.net.weights();
        auto tc = build_2cut_instance(I.net, I.dag, p);
        auto sol = solve_2cut(tc.inst);
        auto emb = cut_to_embedding(I.net, I.dag, tc, sol, p);
        double brute = ref::twonode_bruteforce(I.net, I.dag, p);
        o.check(emb.cost == brute, I.name + ": " + fmt(emb.cost) + " vs " + fmt(brute));
        o.check(validate_embedding(I.net, I.dag, emb.emb).ok(), I.name + ": invalid embedding");
        const auto& J = tc.inst;
        for (int k = 0; k < 100; ++k) {
            std::vector<char> Y(J.num_vertices, 0), Z(J.num_vertices, 0), U(J.num_vertices), N(J.num_vertices);
            for (int v = 0; v < J.num_vertices; ++v) {
                if (v == J.j1 || v == J.j2) continue;
                Y[v] = rng.coin(0.5);
                Z[v] = rng.coin(0.5);
            }
            for (int v = 0; v < J.num_vertices; ++v) U[v] = Y[v] || Z[v], N[v] = Y[v] && Z[v];
            double hy = h_value(J, Y), hz = h_value(J, Z);
            if (hy < kInf && hz < kInf)
                o.check(h_value(J, U) + h_value(J, N) <= hy + hz + 1e-9, I.name + ": submodularity");
        }
        ++count;
    }
    if (o.ok) o.detail = std::to_string(count) + " instances";
}

void gadgets(Outcome& o) {
    auto T = gadget_cost_table();
    o.check(T.split_min == 27.0, "split min " + fmt(T.split_min));
    o.check(T.same_min == 28.0, "same-source min " + fmt(T.same_min));
    o.check(T.best[0][0] == 28.0 && T.best[1][1] == 28.0, "non-split templates");
    o.check(T.mixed_min > 27.0, "mixed min " + fmt(T.mixed_min));
    auto H = io::graph_from_text(io::read_file(fixture("k4.txt")));
    int mc = max_cut_bruteforce(H);
    o.check(mc == 4, "maxcut(K4)=" + std::to_string(mc));
    auto inst = build_maxcut_instance(H);
    auto s = canonical_search_min(inst);
    o.check(s.cost == 28.0 * 6 - mc, "canonical min " + fmt(s.cost));
    if (o.ok) o.detail = "27 / 28 / " + fmt(T.mixed_min) + ", K4 min " + fmt(s.cost);
}

void sandwich(Outcome& o) {
    long embeddings = 0;
    std::vector<Instance> all;
    for (const char* name : {"fig1.json", "fig2.json"}) all.push_back(io::read_instance(fixture(name)));
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
        all.push_back(ref::small_instance(seed, static_cast<DagShape>(seed % 3), 4, 5));
    for (const auto& I : all) {
        auto p = I.net.weights();
        double D = std::max(1, I.dag.max_out_degree());
        bool complete = ref::for_each_rembedding(I.net, I.dag, 200000, [&](const REmbedding& r) {
            double c = cost_C(I.net, I.dag, r, p), cc = cost_CC(I.net, I.dag, r, p);
            o.check(c <= cc && cc <= D * c, I.name + ": C=" + fmt(c) + " CC=" + fmt(cc));
            ++embeddings;
        });
        (void)complete;
        auto acc = mincost_cc_exact(I.net, I.dag, p);
        auto ac = mincost_c_exact(I.net, I.dag, p);
        double lhs = cost_C(I.net, I.dag, acc.emb, p);
        o.check(lhs <= D * ac.cost, I.name + ": C(argmin CC)=" + fmt(lhs) + " > D*" + fmt(ac.cost));
    }
    if (o.ok) o.detail = std::to_string(embeddings) + " R-embeddings on " + std::to_string(all.size()) + " instances";
}

void spanning_tree(Outcome& o) {
    std::ostringstream ratios;
    auto check = [&](const Instance& I) {
        auto p = I.net.weights();
        auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, p, I.tree);
        double opt = mincost_cc_exact(I.net, I.dag, p).cost;
        double ratio = opt > 0 ? r.cost / opt : 1.0;
        o.check(r.cost <= (1 + r.F) * opt + 1e-9,
                I.name + ": " + fmt(r.cost) + " > (1+" + std::to_string(r.F) + ")*" + fmt(opt));
        ratios << ' ' << I.name << '=' << fmt(ratio) << "(F=" << r.F << ')';
    };
    check(io::read_instance(fixture("fft4.json")));
    int count = 0;
    for (std::uint64_t seed = 1; count < 20; ++seed) {
        GenOptions g;
        Rng rng(seed);
        g.nodes = rng.uniform(3, 5);
        g.extra_edges = rng.uniform(0, 2);
        g.dag_vertices = rng.uniform(5, 7);
        g.sources = 2;
        g.max_weight = 1;
        g.shape = DagShape::General;
        auto I = random_instance(1000 + seed, g);
        I.name = "unit-" + std::to_string(seed);
        if (spanning_tree_cycle_load(I.dag).F == 0 && seed < 200) continue;
        check(I);
        ++count;
    }
    if (o.ok) o.detail = "ratios:" + ratios.str();
}

void earthmover(Outcome& o) {
    long rounded = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto I = ref::small_instance(seed, static_cast<DagShape>(seed % 3), 4, 6);
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        double opt = mincost_cc_exact(I.net, I.dag, p).cost;
        o.check(lp.lp_value <= opt + 1e-7, I.name + ": lp " + fmt(lp.lp_value) + " > " + fmt(opt));
        DistanceMatrix d(I.net, p);
        for (std::uint64_t s = 1; s <= 10; ++s) {
            auto r = ckr_round(I.net, I.dag, lp.placement, d, s);
            o.check(validate_rembedding(I.net, I.dag, r.emb).ok(), I.name + ": invalid rounding");
            o.check(r.cost >= lp.lp_value - 1e-7, I.name + ": rounded below lp");
            ++rounded;
        }
    }
    std::ostringstream means;
    for (const char* name : {"fig1.json", "fig2.json", "fft4.json"}) {
        auto I = io::read_instance(fixture(name));
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        double opt = mincost_cc_exact(I.net, I.dag, p).cost;
        o.check(lp.lp_value <= opt + 1e-7, std::string(name) + ": lp above optimum");
        DistanceMatrix d(I.net, p);
        double sum = 0;
        for (std::uint64_t s = 1; s <= 200; ++s) {
            auto r = ckr_round(I.net, I.dag, lp.placement, d, s);
            o.check(validate_rembedding(I.net, I.dag, r.emb).ok(), std::string(name) + ": invalid rounding");
            o.check(r.cost >= lp.lp_value - 1e-7, std::string(name) + ": rounded below lp");
            sum += r.cost;
        }
        double limit = 4 * std::log(std::max(I.net.n(), 2)) * opt;
        o.check(sum / 200 <= limit, std::string(name) + ": mean " + fmt(sum / 200) + " > " + fmt(limit));
        means << ' ' << name << " mean/opt=" << fmt(sum / 200 / opt);
    }
    if (o.ok) o.detail = std::to_string(rounded) + " random roundings;" + means.str();
}

void scheduler(Outcome& o) {
    int count = 0;
    for (const auto& [I, sol] : solved) {
        auto tr = build_schedule(I.net, I.dag, sol);
        auto rep = validate_schedule(I.net, I.dag, tr);
        o.check(rep.report.ok(), I.name + ": " + rep.report.str());
        o.check(rep.final_ok, I.name + ": final conditions");
        o.check(rep.lambda >= sol.R - 0.01, I.name + ": lambda " + fmt(rep.lambda) + " < R " + fmt(sol.R));
        for (int e = 0; e < I.net.m(); ++e)
            o.check(rep.N[e] * rep.lambda <= static_cast<double>(tr.K) * I.net.edge(e).capacity + 1e-9,
                    I.name + ": capacity at edge " + std::to_string(e));
        if (tr.K > 0) {
            auto back = schedule_to_flows(I.net, I.dag, tr);
            o.check(std::abs(back.R - sol.R) <= 0.01, I.name + ": recovered " + fmt(back.R) + " vs " + fmt(sol.R));
        }
        ++count;
    }
    if (o.ok) o.detail = std::to_string(count) + " rate solutions";
}

std::string run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
}

void determinism(Outcome& o) {
    std::vector<std::vector<std::string>> commands = {
        {"bench", fixture("fig1.json"), fixture("fig2.json"), fixture("fft4.json"), "--seed", "7", "--no-timing",
         "--threads", "1"},
        {"--json", "mincost", fixture("fft4.json"), "--solver", "emlp", "--seed", "42", "--trials", "8"},
        {"--json", "rate", fixture("fig1.json"), "--mwu", "--epsilon", "0.1"},
        {"--json", "rate", fixture("fft4.json"), "--pricing", "emlp", "--seed", "3"},
        {"--json", "reduce", "maxcut", fixture("k4.txt"), "--search"},
    };
    for (const auto& cmd : commands) {
        auto a = run_cli(cmd), b = run_cli(cmd);
        o.check(a == b, "differs: " + cmd[0] + " " + cmd[1]);
        o.check(a.rfind("0\n", 0) == 0, "failed: " + cmd[0] + " " + cmd[1]);
    }
    auto parallel = commands[0];
    parallel.back() = "4";
    o.check(run_cli(commands[0]) == run_cli(parallel), "bench output depends on the thread count");
}

}  // namespace

int main() {
    criterion(1, "fixture rates", 2.0, rate_fixtures);
    criterion(2, "cost-model fixture", 1.0, cost_models);
    criterion(3, "usage fixture", 1.0, usage);
    criterion(4, "column generation equals full enumeration", 60.0, rate_oracle);
    criterion(5, "structured DPs equal the oracle", 60.0, structured);
    criterion(6, "two-node 2-Cut solver", 60.0, two_node);
    criterion(7, "gadget certification and K4", 120.0, gadgets);
    criterion(8, "cost-model sandwich", 0, sandwich);
    criterion(9, "spanning-tree approximation", 0, spanning_tree);
    criterion(10, "earth-mover LP and rounding", 300.0, earthmover);
    criterion(11, "scheduler round trip", 60.0, scheduler);
    criterion(12, "determinism", 0, determinism);
    return failures == 0 ? 0 : 1;
}
