#include "calpkit/maxflow.hpp"

#include <algorithm>
#include <queue>

#include "calpkit/error.hpp"

namespace calpkit {

namespace {
constexpr double kEps = 1e-12;
}

MaxFlow::MaxFlow(int n) : n_(n), g_(n) {}

int MaxFlow::add_arc(int from, int to, double cap) {
    require(from >= 0 && from < n_ && to >= 0 && to < n_, "max-flow arc endpoint out of range");
    require(cap >= 0.0, "negative arc capacity");
    int i = static_cast<int>(g_[from].size());
    int j = static_cast<int>(g_[to].size()) + (from == to ? 1 : 0);
    g_[from].push_back({to, j, cap, cap});
    g_[to].push_back({from, i, 0.0, 0.0});
    handles_.push_back({from, i});
    return static_cast<int>(handles_.size()) - 1;
}

double MaxFlow::flow_on(int arc) const {
    auto [u, i] = handles_.at(arc);
    return g_[u][i].initial - g_[u][i].cap;
}

double MaxFlow::run(int s, int t) {
    require(s != t, "max-flow source equals sink");
    std::vector<int> h(n_, 0), cur(n_, 0);
    std::vector<double> excess(n_, 0.0);
    std::vector<std::vector<int>> bucket(2 * n_ + 1);
    std::vector<char> active(n_, 0);

    // exact distance labels to t
    {
        std::vector<int> dist(n_, -1);
        std::queue<int> q;
        dist[t] = 0;
        q.push(t);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& a : g_[v]) {
                const Arc& back = g_[a.to][a.rev];
                if (back.cap > kEps && dist[a.to] < 0) {
                    dist[a.to] = dist[v] + 1;
                    q.push(a.to);
                }
            }
        }
        for (int v = 0; v < n_; ++v) h[v] = dist[v] < 0 ? n_ : dist[v];
    }
    h[s] = n_;

    int highest = 0;
    auto activate = [&](int v) {
        if (v == s || v == t || active[v] || excess[v] <= kEps) return;
        active[v] = 1;
        bucket[h[v]].push_back(v);
        highest = std::max(highest, h[v]);
    };
    for (auto& a : g_[s]) {
        if (a.cap <= 0.0) continue;
        double f = a.cap;
        a.cap = 0.0;
        g_[a.to][a.rev].cap += f;
        excess[a.to] += f;
        excess[s] -= f;
        activate(a.to);
    }

    while (true) {
        while (highest >= 0 && bucket[highest].empty()) --highest;
        if (highest < 0) break;
        int u = bucket[highest].back();
        bucket[highest].pop_back();
        active[u] = 0;
        while (excess[u] > kEps) {
            if (cur[u] == static_cast<int>(g_[u].size())) {
                int mh = 2 * n_;
                for (const auto& a : g_[u])
                    if (a.cap > kEps) mh = std::min(mh, h[a.to] + 1);
                h[u] = mh;
                cur[u] = 0;
                if (h[u] >= 2 * n_) break;
                continue;
            }
            Arc& a = g_[u][cur[u]];
            if (a.cap > kEps && h[u] == h[a.to] + 1) {
                double f = std::min(excess[u], a.cap);
                a.cap -= f;
                g_[a.to][a.rev].cap += f;
                excess[u] -= f;
                excess[a.to] += f;
                activate(a.to);
            } else {
                ++cur[u];
            }
        }
    }
    return excess[t];
}

std::vector<char> MaxFlow::source_side(int s) const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& a : g_[v]) {
            if (a.cap > kEps && !seen[a.to]) {
                seen[a.to] = 1;
                stack.push_back(a.to);
            }
        }
    }
    return seen;
}

}  // namespace calpkit
