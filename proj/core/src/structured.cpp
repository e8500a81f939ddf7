#include "calpkit/structured.hpp"

#include <algorithm>
#include <queue>

#include "calpkit/error.hpp"

namespace calpkit {

namespace {

double edge_cost(double w, double d) { return w == 0.0 ? 0.0 : w * d; }

struct TreeDp {
    std::vector<int> assignment;
    double cost = kInf;
};

// Placement DP on an undirected spanning tree of the DAG skeleton, rooted at the sink.
TreeDp tree_dp(const ComputationDag& dag, const std::vector<int>& pin, const DistanceMatrix& dist,
               const std::vector<char>& in_tree) {
    const int nv = dag.size();
    const int n = dist.n();
    std::vector<std::vector<std::pair<int, int>>> adj(nv);
    for (int g = 0; g < dag.num_edges(); ++g) {
        if (!in_tree[g]) continue;
        adj[dag.edge(g).tail].push_back({dag.edge(g).head, g});
        adj[dag.edge(g).head].push_back({dag.edge(g).tail, g});
    }
    const int root = dag.sink();
    std::vector<int> order, parent(nv, -1), parent_edge(nv, -1);
    std::vector<char> seen(nv, 0);
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        order.push_back(u);
        for (auto [w, g] : adj[u]) {
            if (seen[w]) continue;
            seen[w] = 1;
            parent[w] = u;
            parent_edge[w] = g;
            q.push(w);
        }
    }
    require(static_cast<int>(order.size()) == nv, "tree does not span the DAG");

    std::vector<std::vector<double>> cost(nv, std::vector<double>(n, 0.0));
    // choice[c][v]: best image of child c given parent at v
    std::vector<std::vector<int>> choice(nv, std::vector<int>(n, -1));
    for (int v = 0; v < nv; ++v)
        if (pin[v] >= 0)
            for (int x = 0; x < n; ++x)
                if (x != pin[v]) cost[v][x] = kInf;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int c = *it;
        if (c == root) continue;
        int p = parent[c];
        double w = dag.edge(parent_edge[c]).weight;
        for (int v = 0; v < n; ++v) {
            if (!(cost[p][v] < kInf)) continue;
            double best = kInf;
            int arg = -1;
            for (int u = 0; u < n; ++u) {
                if (!(cost[c][u] < kInf)) continue;
                double val = cost[c][u] + edge_cost(w, dist(u, v));
                if (val < best) best = val, arg = u;
            }
            cost[p][v] += best;
            choice[c][v] = arg;
        }
    }
    TreeDp res;
    res.cost = cost[root][pin[root]];
    if (!(res.cost < kInf)) return res;
    res.assignment.assign(nv, -1);
    res.assignment[root] = pin[root];
    for (int u : order) {
        if (u == root) continue;
        res.assignment[u] = choice[u][res.assignment[parent[u]]];
    }
    return res;
}

}  // namespace

MinCostResult tree_dp_mincost_cc(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices) {
    require_valid_instance(net, dag);
    if (!is_in_tree(dag)) fail(ErrorKind::InvalidInput, "tree DP needs every non-sink vertex to have out-degree 1");
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix dist(net, prices);
    auto r = tree_dp(dag, pin, dist, std::vector<char>(dag.num_edges(), 1));
    if (!(r.cost < kInf)) fail(ErrorKind::Infeasible, "no finite-cost placement");
    return {assignment_to_rembedding(net, dag, r.assignment, dist), r.cost};
}

MinCostResult layered_dp_mincost_cc(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<double>& prices, int max_width) {
    require_valid_instance(net, dag);
    auto L = layer_dag(dag);
    if (!L.layered)
        fail(ErrorKind::InvalidInput, "DAG is not layered: edge '" + dag.edge(L.bad_edge).id + "' skips a layer");
    if (L.width > max_width)
        fail(ErrorKind::Budget, "layer width " + std::to_string(L.width) + " exceeds " + std::to_string(max_width));
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix dist(net, prices);
    const int n = net.n();
    const int depth = static_cast<int>(L.layers.size());

    // States of a layer: mixed-radix tuples, pinned vertices have a single option.
    auto options = [&](int v) { return pin[v] >= 0 ? 1 : n; };
    auto decode = [&](int layer, long s, std::vector<int>& assign) {
        for (int v : L.layers[layer]) {
            int k = options(v);
            assign[v] = pin[v] >= 0 ? pin[v] : static_cast<int>(s % k);
            s /= k;
        }
    };
    auto count = [&](int layer) {
        long c = 1;
        for (int v : L.layers[layer]) c *= options(v);
        return c;
    };
    std::vector<std::vector<int>> layer_edges(depth);
    for (int g = 0; g < dag.num_edges(); ++g) layer_edges[L.layer_of[dag.edge(g).head]].push_back(g);

    std::vector<int> assign(dag.size(), -1);
    std::vector<double> best(count(0), 0.0);
    std::vector<std::vector<long>> back(depth);
    for (int layer = 1; layer < depth; ++layer) {
        long prev_n = count(layer - 1), cur_n = count(layer);
        std::vector<double> next(cur_n, kInf);
        back[layer].assign(cur_n, -1);
        for (long b = 0; b < cur_n; ++b) {
            decode(layer, b, assign);
            for (long a = 0; a < prev_n; ++a) {
                if (!(best[a] < next[b])) continue;
                decode(layer - 1, a, assign);
                double c = best[a];
                for (int g : layer_edges[layer])
                    c += edge_cost(dag.edge(g).weight, dist(assign[dag.edge(g).tail], assign[dag.edge(g).head]));
                if (c < next[b]) next[b] = c, back[layer][b] = a;
            }
        }
        best.swap(next);
    }
    long arg = 0;
    for (long s = 1; s < static_cast<long>(best.size()); ++s)
        if (best[s] < best[arg]) arg = s;
    double total = best[arg];
    if (!(total < kInf)) fail(ErrorKind::Infeasible, "no finite-cost placement");
    for (int layer = depth - 1; layer >= 0; --layer) {
        decode(layer, arg, assign);
        if (layer > 0) arg = back[layer][arg];
    }
    return {assignment_to_rembedding(net, dag, assign, dist), total};
}

int layered_rcalp_ratio(const ComputationDag& dag) {
    auto L = layer_dag(dag);
    return std::max(1, std::min(L.width, dag.max_out_degree()));
}

SpanningTreeResult spanning_tree_approx_mincost_cc(const NetworkGraph& net, const ComputationDag& dag,
                                                   const std::vector<double>& prices,
                                                   const std::optional<std::vector<int>>& tree) {
    require_valid_instance(net, dag);
    auto info = spanning_tree_cycle_load(dag, tree);
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix dist(net, prices);
    auto r = tree_dp(dag, pin, dist, info.in_tree);
    if (!(r.cost < kInf)) fail(ErrorKind::Infeasible, "no finite-cost placement");
    SpanningTreeResult out;
    out.emb = assignment_to_rembedding(net, dag, r.assignment, dist);
    out.cost = cost_CC(net, dag, out.emb, prices);
    out.tree_cost = r.cost;
    out.F = info.F;
    out.weighted_load = info.weighted_load;
    out.bound = (1.0 + info.F) * r.cost;
    out.weighted_bound = (1.0 + info.weighted_load) * r.cost;
    return out;
}

}  // namespace calpkit
