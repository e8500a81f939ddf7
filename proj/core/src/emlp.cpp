#include "calpkit/emlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "calpkit/error.hpp"
#include "calpkit/lp.hpp"

namespace calpkit {

Transport em_distance(const std::vector<double>& a, const std::vector<double>& b, const DistanceMatrix& d) {
    const int n = d.n();
    if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
        fail(ErrorKind::InvalidInput, "distribution length differs from the metric dimension");
    lp::Problem P;
    std::vector<int> var(static_cast<size_t>(n) * n, -1);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (a[u] == 0.0 || b[v] == 0.0 || !d.reachable(u, v)) continue;
            var[static_cast<size_t>(u) * n + v] = P.num_vars++;
            P.objective.push_back(d(u, v));
        }
    for (int u = 0; u < n; ++u) {
        if (a[u] == 0.0) continue;
        lp::Row r{{}, lp::Sense::Equal, a[u]};
        for (int v = 0; v < n; ++v)
            if (int j = var[static_cast<size_t>(u) * n + v]; j >= 0) r.coef.push_back({j, 1.0});
        P.rows.push_back(std::move(r));
    }
    for (int v = 0; v < n; ++v) {
        if (b[v] == 0.0) continue;
        lp::Row r{{}, lp::Sense::Equal, b[v]};
        for (int u = 0; u < n; ++u)
            if (int j = var[static_cast<size_t>(u) * n + v]; j >= 0) r.coef.push_back({j, 1.0});
        P.rows.push_back(std::move(r));
    }
    auto res = lp::solve(P);
    if (res.status != lp::Status::Optimal) fail(ErrorKind::Infeasible, "transport problem has no finite solution");
    Transport t;
    t.cost = res.value;
    t.flow.assign(static_cast<size_t>(n) * n, 0.0);
    for (size_t k = 0; k < var.size(); ++k)
        if (var[k] >= 0) t.flow[k] = res.x[var[k]];
    return t;
}

EarthmoverSolution solve_earthmover_lp(const NetworkGraph& net, const ComputationDag& dag,
                                       const std::vector<double>& prices) {
    require_valid_instance(net, dag);
    const auto pin = resolve_pins(net, dag);
    DistanceMatrix d(net, prices);
    const int n = net.n();
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (!d.reachable(u, v)) fail(ErrorKind::Infeasible, "earthmover LP needs a connected network");

    lp::Problem P;
    std::vector<std::vector<int>> xv(dag.size(), std::vector<int>(n, -1));
    for (int a = 0; a < dag.size(); ++a) {
        if (pin[a] >= 0) continue;
        lp::Row r{{}, lp::Sense::Equal, 1.0};
        for (int u = 0; u < n; ++u) {
            xv[a][u] = P.num_vars++;
            P.objective.push_back(0.0);
            r.coef.push_back({xv[a][u], 1.0});
        }
        P.rows.push_back(std::move(r));
    }
    auto support = [&](int a, int u) { return pin[a] < 0 || pin[a] == u; };
    std::vector<std::vector<int>> yv(dag.num_edges());
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        if (E.weight == 0.0) continue;
        yv[g].assign(static_cast<size_t>(n) * n, -1);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (!support(E.tail, u) || !support(E.head, v)) continue;
                yv[g][static_cast<size_t>(u) * n + v] = P.num_vars++;
                P.objective.push_back(E.weight * d(u, v));
            }
        for (int u = 0; u < n; ++u) {
            if (!support(E.tail, u)) continue;
            lp::Row r{{}, lp::Sense::Equal, pin[E.tail] >= 0 ? 1.0 : 0.0};
            for (int v = 0; v < n; ++v)
                if (int j = yv[g][static_cast<size_t>(u) * n + v]; j >= 0) r.coef.push_back({j, 1.0});
            if (pin[E.tail] < 0) r.coef.push_back({xv[E.tail][u], -1.0});
            P.rows.push_back(std::move(r));
        }
        for (int v = 0; v < n; ++v) {
            if (!support(E.head, v)) continue;
            lp::Row r{{}, lp::Sense::Equal, pin[E.head] >= 0 ? 1.0 : 0.0};
            for (int u = 0; u < n; ++u)
                if (int j = yv[g][static_cast<size_t>(u) * n + v]; j >= 0) r.coef.push_back({j, 1.0});
            if (pin[E.head] < 0) r.coef.push_back({xv[E.head][v], -1.0});
            P.rows.push_back(std::move(r));
        }
    }
    auto res = lp::solve(P);
    if (res.status != lp::Status::Optimal) fail(ErrorKind::Infeasible, "earthmover LP failed to reach an optimum");

    EarthmoverSolution out;
    auto& pl = out.placement;
    pl.n = n;
    pl.x.assign(dag.size(), std::vector<double>(n, 0.0));
    for (int a = 0; a < dag.size(); ++a)
        for (int u = 0; u < n; ++u) pl.x[a][u] = pin[a] >= 0 ? (u == pin[a] ? 1.0 : 0.0) : res.x[xv[a][u]];
    pl.y.assign(dag.num_edges(), std::vector<double>(static_cast<size_t>(n) * n, 0.0));
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                size_t k = static_cast<size_t>(u) * n + v;
                if (yv[g].empty())
                    pl.y[g][k] = pl.x[E.tail][u] * pl.x[E.head][v];
                else if (yv[g][k] >= 0)
                    pl.y[g][k] = res.x[yv[g][k]];
            }
    }
    out.lp_value = res.value;
    return out;
}

double placement_residual(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p) {
    const auto pin = resolve_pins(net, dag);
    const int n = p.n;
    double worst = 0.0;
    auto upd = [&](double v) { worst = std::max(worst, std::abs(v)); };
    for (int a = 0; a < dag.size(); ++a) {
        double s = 0.0;
        for (int u = 0; u < n; ++u) {
            s += p.x[a][u];
            if (p.x[a][u] < 0.0) upd(p.x[a][u]);
            if (pin[a] >= 0) upd(p.x[a][u] - (u == pin[a] ? 1.0 : 0.0));
        }
        upd(s - 1.0);
    }
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        for (int u = 0; u < n; ++u) {
            double row = 0.0, col = 0.0;
            for (int v = 0; v < n; ++v) {
                row += p.y[g][static_cast<size_t>(u) * n + v];
                col += p.y[g][static_cast<size_t>(v) * n + u];
            }
            upd(row - p.x[E.tail][u]);
            upd(col - p.x[E.head][u]);
        }
    }
    return worst;
}

RoundedPlacement ckr_round(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p,
                           const DistanceMatrix& d, std::uint64_t seed) {
    const auto pin = resolve_pins(net, dag);
    const int n = d.n();
    require(p.n == n && static_cast<int>(p.x.size()) == dag.size(), "placement does not match the instance");
    std::mt19937_64 rng(seed);
    RoundedPlacement out;
    out.delta = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out.permutation.resize(n);
    std::iota(out.permutation.begin(), out.permutation.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(out.permutation[i], out.permutation[rng() % (i + 1)]);

    out.assignment.assign(dag.size(), -1);
    std::vector<double> to(n);
    for (int a = 0; a < dag.size(); ++a) {
        if (pin[a] >= 0) {
            out.assignment[a] = pin[a];
            continue;
        }
        for (int u = 0; u < n; ++u) {
            double s = 0.0;
            for (int v = 0; v < n; ++v)
                if (p.x[a][v] > 0.0) s += p.x[a][v] * d(v, u);
            to[u] = s;
        }
        double A = *std::min_element(to.begin(), to.end());
        double limit = out.delta * A + 1e-9 * (1.0 + A);
        for (int u : out.permutation)
            if (to[u] <= limit) {
                out.assignment[a] = u;
                break;
            }
    }
    out.emb = assignment_to_rembedding(net, dag, out.assignment, d);
    out.cost = cost_CC(net, dag, out.emb, d.prices());
    return out;
}

}  // namespace calpkit
