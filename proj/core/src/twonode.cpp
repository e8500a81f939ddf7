#include "calpkit/twonode.hpp"

#include <algorithm>
#include <cstdint>

#include "calpkit/error.hpp"
#include "calpkit/maxflow.hpp"

namespace calpkit {

namespace {

void require_two_node(const NetworkGraph& net) {
    if (net.n() != 2 || net.m() != 1)
        fail(ErrorKind::InvalidInput, "two-node solver needs a network with exactly two nodes and one edge");
}

double finite_total(const CutInstance& inst) {
    double s = 0.0;
    for (const auto& a : inst.arcs)
        if (a.weight < kInf) s += a.weight;
    return s;
}

}  // namespace

TwoNodeCut build_2cut_instance(const NetworkGraph& net2, const ComputationDag& dag) {
    return build_2cut_instance(net2, dag, net2.weights());
}

TwoNodeCut build_2cut_instance(const NetworkGraph& net2, const ComputationDag& dag, const std::vector<double>& prices) {
    require_two_node(net2);
    require_valid_instance(net2, dag);
    const auto pin = resolve_pins(net2, dag);
    TwoNodeCut tc;
    tc.n2 = net2.sink();
    tc.n1 = 1 - tc.n2;
    const double x = prices.at(0);
    auto& J = tc.inst;
    J.names = {"j1", "j2"};
    J.j1 = 0;
    J.j2 = 1;
    tc.in_vertex.assign(dag.size(), -1);
    tc.out_vertex.assign(dag.size(), -1);
    for (int v = 0; v < dag.size(); ++v) {
        if (v == dag.sink()) {
            tc.in_vertex[v] = static_cast<int>(J.names.size());
            J.names.push_back(dag.id(v));
            continue;
        }
        tc.in_vertex[v] = static_cast<int>(J.names.size());
        J.names.push_back(dag.id(v) + ".in");
        tc.out_vertex[v] = static_cast<int>(J.names.size());
        J.names.push_back(dag.id(v) + ".out");
    }
    J.num_vertices = static_cast<int>(J.names.size());
    for (int v = 0; v < dag.size(); ++v) {
        if (v == dag.sink()) continue;
        J.arcs.push_back({tc.in_vertex[v], tc.out_vertex[v], dag.weight(v) * x});
    }
    for (const auto& E : dag.edges()) J.arcs.push_back({tc.out_vertex[E.tail], tc.in_vertex[E.head], kInf});
    for (int s : dag.sources()) J.arcs.push_back({pin[s] == tc.n1 ? J.j1 : J.j2, tc.in_vertex[s], kInf});
    J.arcs.push_back({J.j2, tc.in_vertex[dag.sink()], kInf});
    return tc;
}

double delta(const CutInstance& inst, const std::vector<char>& in_set) {
    double s = 0.0;
    for (const auto& a : inst.arcs)
        if (in_set[a.from] && !in_set[a.to]) s += a.weight;
    return s;
}

namespace {

// Minimum cut from j2 to the marked sink set; kInf when only infinite cuts exist.
double inner_cut(const CutInstance& inst, const std::vector<char>& sink_set, std::vector<char>* source_side) {
    const double big = finite_total(inst) + 1.0;
    const int T = inst.num_vertices;
    MaxFlow mf(T + 1);
    for (const auto& a : inst.arcs) mf.add_arc(a.from, a.to, a.weight < kInf ? a.weight : big);
    for (int v = 0; v < T; ++v)
        if (sink_set[v]) mf.add_arc(v, T, big);
    double f = mf.run(inst.j2, T);
    if (source_side) {
        auto side = mf.source_side(inst.j2);
        side.resize(T);
        *source_side = std::move(side);
    }
    return f >= big ? kInf : f;
}

}  // namespace

double h_value(const CutInstance& inst, const std::vector<char>& A) {
    require(static_cast<int>(A.size()) == inst.num_vertices, "set size differs from vertex count");
    require(!A[inst.j1] && !A[inst.j2], "A must avoid both terminals");
    std::vector<char> S = A;
    S[inst.j1] = 1;
    double d = delta(inst, S);
    if (!(d < kInf)) return kInf;
    return d + inner_cut(inst, S, nullptr);
}

double cut_weight(const CutInstance& inst, const CutSolution& sol) {
    std::vector<char> a(inst.num_vertices), b(inst.num_vertices);
    for (int v = 0; v < inst.num_vertices; ++v) a[v] = sol.side[v] == 1, b[v] = sol.side[v] == 2;
    return delta(inst, a) + delta(inst, b);
}

CutSolution solve_2cut(const CutInstance& inst, int max_vertices) {
    if (inst.num_vertices > max_vertices)
        fail(ErrorKind::Budget, "2-Cut exhaustive search limited to " + std::to_string(max_vertices) + " vertices");
    const int N = inst.num_vertices;
    std::vector<char> forced_in(N, 0), forced_out(N, 0);
    for (const auto& a : inst.arcs) {
        if (a.weight < kInf) continue;
        if (a.from == inst.j1) forced_in[a.to] = 1;
        if (a.from == inst.j2) forced_out[a.to] = 1;
    }
    std::vector<int> free;
    std::vector<char> base(N, 0);
    for (int v = 0; v < N; ++v) {
        if (v == inst.j1 || v == inst.j2) continue;
        if (forced_in[v] && forced_out[v]) fail(ErrorKind::Infeasible, "vertex tied to both terminals");
        if (forced_in[v])
            base[v] = 1;
        else if (!forced_out[v])
            free.push_back(v);
    }
    const int F = static_cast<int>(free.size());
    double best = kInf;
    std::vector<char> bestA;
    std::vector<char> A = base;
    std::vector<char> S(N);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << F); ++mask) {
        for (int i = 0; i < F; ++i) A[free[i]] = (mask >> i) & 1;
        S = A;
        S[inst.j1] = 1;
        double d = delta(inst, S);
        if (!(d < best)) continue;
        double h = d + inner_cut(inst, S, nullptr);
        if (h < best) {
            best = h;
            bestA = A;
        }
    }
    if (bestA.empty()) fail(ErrorKind::Infeasible, "every 2-Cut has infinite weight");
    CutSolution sol;
    sol.side.assign(N, 0);
    S = bestA;
    S[inst.j1] = 1;
    std::vector<char> src;
    inner_cut(inst, S, &src);
    for (int v = 0; v < N; ++v) {
        if (S[v])
            sol.side[v] = 1;
        else if (src[v])
            sol.side[v] = 2;
    }
    sol.weight = best;
    return sol;
}

TwoNodeEmbedding cut_to_embedding(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                                  const CutSolution& sol) {
    return cut_to_embedding(net2, dag, tc, sol, net2.weights());
}

TwoNodeEmbedding cut_to_embedding(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                                  const CutSolution& sol, const std::vector<double>& prices) {
    require_two_node(net2);
    if (!(cut_weight(tc.inst, sol) < kInf)) fail(ErrorKind::Infeasible, "cut has infinite weight");
    const auto pin = resolve_pins(net2, dag);
    std::vector<std::vector<int>> sites(dag.size());
    for (int v = 0; v < dag.size(); ++v) {
        if (pin[v] >= 0) {
            sites[v] = {pin[v]};
            continue;
        }
        switch (sol.side[tc.in_vertex[v]]) {
            case 1: sites[v] = {tc.n1}; break;
            case 2: sites[v] = {tc.n2}; break;
            default: sites[v] = {std::min(tc.n1, tc.n2), std::max(tc.n1, tc.n2)}; break;
        }
    }
    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (pin[v] >= 0 || sites[v].size() < 2) continue;
        std::vector<int> kept;
        for (int s : sites[v]) {
            bool used = false;
            for (int g : dag.out_edges(v)) {
                const auto& t = sites[dag.edge(g).head];
                used |= std::find(t.begin(), t.end(), s) != t.end();
            }
            if (used) kept.push_back(s);
        }
        if (!kept.empty()) sites[v] = kept;
    }
    DistanceMatrix dist(net2, prices);
    TwoNodeEmbedding out;
    out.emb = embedding_from_sites(net2, dag, sites, dist);
    out.sites = computation_sites(net2, dag, out.emb);
    out.cost = cost_C(net2, dag, out.emb, prices);
    return out;
}

CutSolution embedding_to_cut(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                             const Embedding& emb) {
    require_two_node(net2);
    const auto sites = computation_sites(net2, dag, emb);
    auto side_of = [&](const std::vector<int>& s) -> char {
        bool a = std::find(s.begin(), s.end(), tc.n1) != s.end();
        bool b = std::find(s.begin(), s.end(), tc.n2) != s.end();
        return a && b ? 0 : (a ? 1 : 2);
    };
    CutSolution sol;
    sol.side.assign(tc.inst.num_vertices, 0);
    sol.side[tc.inst.j1] = 1;
    sol.side[tc.inst.j2] = 2;
    sol.side[tc.in_vertex[dag.sink()]] = 2;
    for (int v = 0; v < dag.size(); ++v) {
        if (v == dag.sink()) continue;
        char in = side_of(sites[v]);
        sol.side[tc.in_vertex[v]] = in;
        if (in == 0) {
            sol.side[tc.out_vertex[v]] = 0;
            continue;
        }
        std::vector<int> targets;
        for (int g : dag.out_edges(v)) {
            const auto& t = sites[dag.edge(g).head];
            targets.insert(targets.end(), t.begin(), t.end());
        }
        sol.side[tc.out_vertex[v]] = side_of(targets);
    }
    sol.weight = cut_weight(tc.inst, sol);
    return sol;
}

TwoNodeEmbedding mincost_twonode(const NetworkGraph& net2, const ComputationDag& dag,
                                 const std::vector<double>& prices) {
    auto tc = build_2cut_instance(net2, dag, prices);
    auto sol = solve_2cut(tc.inst);
    return cut_to_embedding(net2, dag, tc, sol, prices);
}

}  // namespace calpkit
