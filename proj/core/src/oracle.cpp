#include "calpkit/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "calpkit/error.hpp"

namespace calpkit {

namespace {

double env_budget(double fallback) {
    if (const char* s = std::getenv("CALPKIT_BUDGET")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end != s && v > 0.0) return v;
    }
    return fallback;
}

void check_budget(int free_count, int n, double budget_log2, const char* what) {
    double need = n > 1 ? free_count * std::log2(static_cast<double>(n)) : 0.0;
    if (need > budget_log2 + 1e-9) {
        std::ostringstream os;
        os << what << ": 2^" << need << " assignments exceed the budget 2^" << budget_log2
           << "; use an approximate solver (tree, layered, spantree, emlp) or raise CALPKIT_BUDGET";
        fail(ErrorKind::Budget, os.str());
    }
}

// Depth-first enumeration over free vertices in topological order with branch-and-bound.
// cost_at(p, assignment) returns the cost of the items completed by fixing position p.
template <typename CostAt>
std::vector<int> enumerate_min(const std::vector<int>& free, int n, std::vector<int> assign, double base,
                               CostAt&& cost_at, double& best) {
    best = kInf;
    std::vector<int> best_assign;
    const int F = static_cast<int>(free.size());
    std::function<void(int, double)> dfs = [&](int p, double partial) {
        if (!(partial < best)) return;
        if (p == F) {
            best = partial;
            best_assign = assign;
            return;
        }
        int v = free[p];
        for (int u = 0; u < n; ++u) {
            assign[v] = u;
            dfs(p + 1, partial + cost_at(p, assign));
        }
    };
    dfs(0, base);
    return best_assign;
}

}  // namespace

double cc_budget() { return env_budget(24.0); }
double c_budget() { return env_budget(20.0); }

double assignment_cost_c(const ComputationDag& dag, const std::vector<int>& assignment, SteinerCache& cache) {
    double c = 0.0;
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.out_edges(v).empty() || dag.weight(v) == 0) continue;
        std::vector<int> terms;
        for (int g : dag.out_edges(v)) terms.push_back(assignment[dag.edge(g).head]);
        c += dag.weight(v) * cache.cost(assignment[v], terms);
    }
    return c;
}

REmbedding steiner_rembedding(const NetworkGraph& net, const ComputationDag& dag, const std::vector<int>& assignment,
                              SteinerCache& cache) {
    REmbedding r;
    r.assignment = assignment;
    r.paths.assign(dag.num_edges(), {});
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.out_edges(v).empty()) continue;
        std::vector<int> terms;
        for (int g : dag.out_edges(v)) terms.push_back(assignment[dag.edge(g).head]);
        const auto& tree = cache.tree(assignment[v], terms);
        if (!(tree.cost < kInf)) fail(ErrorKind::Infeasible, "function '" + dag.id(v) + "' cannot reach its consumers");
        for (int g : dag.out_edges(v)) {
            r.paths[g] = tree_path(net, tree.edges, assignment[v], assignment[dag.edge(g).head]);
            require(!r.paths[g].empty(), "Steiner tree misses a terminal");
        }
    }
    return r;
}

MinCostResult mincost_cc_exact(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices,
                               double budget_log2) {
    require_valid_instance(net, dag);
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix dist(net, prices);
    std::vector<int> free, pos(dag.size(), -1);
    for (int v : dag.topo_order())
        if (pin[v] < 0) pos[v] = static_cast<int>(free.size()), free.push_back(v);
    check_budget(static_cast<int>(free.size()), net.n(), budget_log2, "mincost_cc_exact");

    std::vector<std::vector<int>> complete(free.size());
    double base = 0.0;
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        if (E.weight == 0.0) continue;
        int p = std::max(pos[E.tail], pos[E.head]);
        if (p < 0)
            base += E.weight * dist(pin[E.tail], pin[E.head]);
        else
            complete[p].push_back(g);
    }
    auto cost_at = [&](int p, const std::vector<int>& a) {
        double c = 0.0;
        for (int g : complete[p]) c += dag.edge(g).weight * dist(a[dag.edge(g).tail], a[dag.edge(g).head]);
        return c;
    };
    double best = kInf;
    auto assign = enumerate_min(free, net.n(), pin, base, cost_at, best);
    if (!(best < kInf)) fail(ErrorKind::Infeasible, "no finite-cost placement: network disconnected between pins");
    return {assignment_to_rembedding(net, dag, assign, dist), best};
}

MinCostResult mincost_c_exact(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices,
                              double budget_log2) {
    require_valid_instance(net, dag);
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix dist(net, prices);
    SteinerCache cache(net, dist);
    std::vector<int> free, pos(dag.size(), -1);
    for (int v : dag.topo_order())
        if (pin[v] < 0) pos[v] = static_cast<int>(free.size()), free.push_back(v);
    check_budget(static_cast<int>(free.size()), net.n(), budget_log2, "mincost_c_exact");

    std::vector<std::vector<int>> complete(free.size());
    double base = 0.0;
    auto theta_cost = [&](int v, const std::vector<int>& a) {
        std::vector<int> terms;
        for (int g : dag.out_edges(v)) terms.push_back(a[dag.edge(g).head]);
        return dag.weight(v) * cache.cost(a[v], terms);
    };
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.out_edges(v).empty() || dag.weight(v) == 0) continue;
        int p = pos[v];
        for (int g : dag.out_edges(v)) p = std::max(p, pos[dag.edge(g).head]);
        if (p < 0)
            base += theta_cost(v, pin);
        else
            complete[p].push_back(v);
    }
    auto cost_at = [&](int p, const std::vector<int>& a) {
        double c = 0.0;
        for (int v : complete[p]) c += theta_cost(v, a);
        return c;
    };
    double best = kInf;
    auto assign = enumerate_min(free, net.n(), pin, base, cost_at, best);
    if (!(best < kInf)) fail(ErrorKind::Infeasible, "no finite-cost placement: network disconnected between pins");
    return {steiner_rembedding(net, dag, assign, cache), best};
}

}  // namespace calpkit
