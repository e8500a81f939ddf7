#include <algorithm>
#include <queue>

#include "calpkit/error.hpp"
#include "calpkit/oracle.hpp"

namespace calpkit {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

SteinerTree steiner_tree(const NetworkGraph& net, const DistanceMatrix& dist, const std::vector<int>& roots_in,
                         const std::vector<int>& terminals) {
    require(!roots_in.empty(), "Steiner tree needs at least one root");
    const auto roots = sorted_unique(roots_in);
    std::vector<int> T;
    for (int t : sorted_unique(terminals))
        if (!std::binary_search(roots.begin(), roots.end(), t)) T.push_back(t);
    SteinerTree out;
    if (T.empty()) return out;
    const int k = static_cast<int>(T.size());
    require(k <= 16, "Steiner tree supports at most 16 terminals");
    const int n = net.n();

    std::vector<double> dR(n, kInf);
    std::vector<int> argR(n, -1);
    for (int u = 0; u < n; ++u)
        for (int r : roots)
            if (dist(u, r) < dR[u]) dR[u] = dist(u, r), argR[u] = r;
    for (int t : T) {
        if (!(dR[t] < kInf)) {
            out.cost = kInf;
            return out;
        }
    }
    auto dm = [&](int a, int b) { return std::min(dist(a, b), dR[a] + dR[b]); };

    const int full = (1 << k) - 1;
    std::vector<double> dp(static_cast<size_t>(full + 1) * n, kInf);
    std::vector<int> via(static_cast<size_t>(full + 1) * n, -1);
    std::vector<int> split(static_cast<size_t>(full + 1) * n, 0);
    auto at = [n](int S, int v) { return static_cast<size_t>(S) * n + v; };
    for (int i = 0; i < k; ++i)
        for (int v = 0; v < n; ++v) dp[at(1 << i, v)] = dm(T[i], v);

    std::vector<double> g(n);
    std::vector<int> gs(n);
    for (int S = 1; S <= full; ++S) {
        if ((S & (S - 1)) == 0) continue;
        int low = S & -S;
        for (int u = 0; u < n; ++u) {
            g[u] = kInf;
            gs[u] = 0;
            for (int S1 = (S - 1) & S; S1 > 0; S1 = (S1 - 1) & S) {
                if (!(S1 & low)) continue;
                double c = dp[at(S1, u)] + dp[at(S ^ S1, u)];
                if (c < g[u]) g[u] = c, gs[u] = S1;
            }
        }
        for (int v = 0; v < n; ++v) {
            double best = kInf;
            int bu = -1;
            for (int u = 0; u < n; ++u) {
                double c = g[u] + dm(u, v);
                if (c < best) best = c, bu = u;
            }
            dp[at(S, v)] = best;
            via[at(S, v)] = bu;
            split[at(S, v)] = bu >= 0 ? gs[bu] : 0;
        }
    }
    const int r0 = roots.front();
    if (!(dp[at(full, r0)] < kInf)) {
        out.cost = kInf;
        return out;
    }

    std::vector<std::pair<int, int>> pairs;
    std::vector<std::pair<int, int>> stack{{full, r0}};
    while (!stack.empty()) {
        auto [S, v] = stack.back();
        stack.pop_back();
        if ((S & (S - 1)) == 0) {
            int i = __builtin_ctz(static_cast<unsigned>(S));
            pairs.push_back({T[i], v});
            continue;
        }
        int u = via[at(S, v)];
        int S1 = split[at(S, v)];
        pairs.push_back({u, v});
        stack.push_back({S1, u});
        stack.push_back({S ^ S1, u});
    }

    std::vector<int> edges;
    auto add_path = [&](int a, int b) {
        if (a == b) return;
        auto p = dist.path(a, b);
        for (size_t i = 0; i + 1 < p.size(); ++i) edges.push_back(net.edge_between(p[i], p[i + 1]));
    };
    for (auto [a, b] : pairs) {
        if (a == b) continue;
        if (dist(a, b) <= dR[a] + dR[b]) {
            add_path(a, b);
        } else {
            add_path(a, argR[a]);
            add_path(argR[b], b);
        }
    }
    edges = sorted_unique(std::move(edges));

    // Spanning forest from the roots, then drop non-terminal leaves.
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int e : edges) {
        adj[net.edge(e).u].push_back({net.edge(e).v, e});
        adj[net.edge(e).v].push_back({net.edge(e).u, e});
    }
    std::vector<char> seen(n, 0);
    std::vector<int> keep;
    std::queue<int> q;
    for (int r : roots) seen[r] = 1, q.push(r);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, e] : adj[u]) {
            if (seen[w]) continue;
            seen[w] = 1;
            keep.push_back(e);
            q.push(w);
        }
    }
    std::vector<char> needed(n, 0);
    for (int r : roots) needed[r] = 1;
    for (int t : T) needed[t] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> deg(n, 0);
        for (int e : keep) ++deg[net.edge(e).u], ++deg[net.edge(e).v];
        std::vector<int> next;
        for (int e : keep) {
            int a = net.edge(e).u, b = net.edge(e).v;
            if ((deg[a] == 1 && !needed[a]) || (deg[b] == 1 && !needed[b])) {
                changed = true;
                continue;
            }
            next.push_back(e);
        }
        keep.swap(next);
    }
    out.edges = sorted_unique(std::move(keep));
    out.cost = 0.0;
    for (int e : out.edges) out.cost += dist.prices()[e];
    return out;
}

double steiner_cost(const NetworkGraph& net, const std::vector<double>& prices, int root,
                    const std::vector<int>& terminals) {
    DistanceMatrix dist(net, prices);
    return steiner_tree(net, dist, {root}, terminals).cost;
}

Path tree_path(const NetworkGraph& net, const std::vector<int>& edges, int from, int to) {
    if (from == to) return {from};
    std::vector<std::vector<int>> adj(net.n());
    for (int e : edges) {
        adj[net.edge(e).u].push_back(net.edge(e).v);
        adj[net.edge(e).v].push_back(net.edge(e).u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<int> par(net.n(), -2);
    std::queue<int> q;
    par[from] = -1;
    q.push(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (u == to) break;
        for (int w : adj[u])
            if (par[w] == -2) par[w] = u, q.push(w);
    }
    if (par[to] == -2) return {};
    Path p;
    for (int v = to; v != -1; v = par[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
}

const SteinerTree& SteinerCache::tree(int root, std::vector<int> terminals) {
    terminals = sorted_unique(std::move(terminals));
    std::vector<int> key;
    key.reserve(terminals.size() + 1);
    key.push_back(root);
    for (int t : terminals)
        if (t != root) key.push_back(t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<int> terms(key.begin() + 1, key.end());
    return memo_.emplace(std::move(key), steiner_tree(net_, dist_, {root}, terms)).first->second;
}

double SteinerCache::cost(int root, std::vector<int> terminals) { return tree(root, std::move(terminals)).cost; }

}  // namespace calpkit
