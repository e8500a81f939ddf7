#include "calpkit/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "calpkit/error.hpp"

namespace calpkit {

namespace {

constexpr std::int64_t kMaxDen = 1'000'000;

bool snap(double x, std::int64_t& p, std::int64_t& q) {
    // Continued-fraction convergents of x.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (a > 9e15) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > kMaxDen) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= 1e-9) {
            p = p1, q = q1;
            return true;
        }
        double frac = r - a;
        if (frac <= 0.0) break;
        r = 1.0 / frac;
    }
    return false;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    std::int64_t g = std::gcd(a, b);
    std::int64_t v = 0;
    if (__builtin_mul_overflow(a / g, b, &v) || v > 1'000'000'000'000'000LL)
        fail(ErrorKind::Budget, "common denominator of the flows is too large; increase epsilon");
    return v;
}

}  // namespace

RationalFlows rationalize_flows(const std::vector<double>& flows, double eps) {
    if (!(eps > 0.0)) fail(ErrorKind::InvalidInput, "epsilon must be positive");
    RationalFlows out;
    int positive = 0;
    for (double x : flows) {
        if (!std::isfinite(x)) fail(ErrorKind::InvalidInput, "cannot rationalize an unbounded flow");
        positive += x > 1e-12;
    }
    const auto Q = static_cast<std::int64_t>(std::ceil(std::max(1, positive) / eps));
    for (double x : flows) {
        std::int64_t p = 0, q = 1;
        if (x > 1e-12 && !snap(x, p, q)) {
            p = static_cast<std::int64_t>(std::floor(x * static_cast<double>(Q)));
            q = Q;
        }
        std::int64_t g = std::gcd(p, q);
        if (g > 1) p /= g, q /= g;
        if (p == 0) q = 1;
        out.num.push_back(p);
        out.den.push_back(q);
        out.x.push_back(static_cast<double>(p) / static_cast<double>(q));
        out.d = checked_lcm(out.d, q);
    }
    std::int64_t K = 0;
    for (size_t i = 0; i < flows.size(); ++i) {
        std::int64_t part = 0;
        if (__builtin_mul_overflow(out.num[i], out.d / out.den[i], &part) || __builtin_add_overflow(K, part, &K) ||
            K > kMaxScheduleEvents)
            fail(ErrorKind::Budget, "schedule would need too many symbols");
    }
    out.K = K;
    return out;
}

RationalFlows rationalize_flows(const RateSolution& sol, double eps) {
    std::vector<double> f;
    for (const auto& c : sol.columns) f.push_back(c.flow);
    return rationalize_flows(f, eps);
}

int delivered_function(const ComputationDag& dag) {
    const auto& in = dag.in_edges(dag.sink());
    return in.size() == 1 ? dag.edge(in[0]).tail : dag.sink();
}

EmbeddingOrder embedding_order(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    auto rep = validate_embedding(net, dag, emb);
    if (!rep.ok()) fail(ErrorKind::InvalidInput, "embedding is not valid: " + rep.str());
    const auto sites = computation_sites(net, dag, emb);
    EmbeddingOrder out;
    const int sink = dag.sink();
    for (int v : dag.topo_order()) {
        if (!dag.is_source(v) && (v != sink || delivered_function(dag) == sink)) {
            for (int u : sites[v]) {
                ScheduleEvent ev;
                ev.kind = ScheduleEvent::Compute;
                ev.node = u;
                ev.theta = v;
                out.events.push_back(ev);
                if (v != sink) ++out.computations;
            }
        }
        if (v == sink) continue;
        // Transmission forest of this function: BFS from its sites over the arcs of its paths.
        std::vector<std::vector<int>> arcs(net.n());
        std::vector<char> target(net.n(), 0);
        for (int g : dag.out_edges(v))
            for (const auto& p : emb.paths[g]) {
                for (size_t i = 0; i + 1 < p.size(); ++i) arcs[p[i]].push_back(p[i + 1]);
                target[p.back()] = 1;
            }
        for (auto& a : arcs) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        std::vector<int> parent(net.n(), -2), order;
        std::queue<int> q;
        for (int s : sites[v]) parent[s] = -1, q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : arcs[u]) {
                if (parent[w] != -2) continue;
                parent[w] = u;
                order.push_back(w);
                q.push(w);
            }
        }
        std::vector<char> keep(net.n(), 0);
        for (int u = 0; u < net.n(); ++u) {
            if (!target[u]) continue;
            require(parent[u] != -2, "function '" + dag.id(v) + "' cannot reach one of its consumers");
            for (int w = u; parent[w] >= 0 && !keep[w]; w = parent[w]) keep[w] = 1;
        }
        for (int w : order) {
            if (!keep[w]) continue;
            ScheduleEvent ev;
            ev.kind = ScheduleEvent::Communicate;
            ev.from = parent[w];
            ev.to = w;
            ev.theta = v;
            out.events.push_back(ev);
            ++out.communications;
        }
    }
    return out;
}

ScheduleTrace build_schedule(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol, double eps) {
    require_valid_instance(net, dag);
    if (sol.status == RateStatus::Unbounded) fail(ErrorKind::InvalidInput, "cannot schedule an unbounded solution");
    if (capacity_violation(net, dag, sol) > 1e-6) fail(ErrorKind::Infeasible, "rate solution violates capacities");
    auto rf = rationalize_flows(sol, eps);
    std::vector<size_t> idx(sol.columns.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return rf.x[a] > rf.x[b]; });
    ScheduleTrace tr;
    tr.K = rf.K;
    std::int64_t k = 0;
    for (size_t j : idx) {
        std::int64_t copies = rf.num[j] * (rf.d / rf.den[j]);
        if (copies == 0) continue;
        auto ord = embedding_order(net, dag, sol.columns[j].emb);
        if (static_cast<std::int64_t>(tr.events.size()) + copies * static_cast<std::int64_t>(ord.events.size()) >
            kMaxScheduleEvents)
            fail(ErrorKind::Budget, "schedule exceeds the event limit; increase epsilon");
        for (std::int64_t c = 0; c < copies; ++c) {
            ++k;
            for (auto ev : ord.events) {
                ev.k = k;
                tr.events.push_back(ev);
            }
        }
    }
    return tr;
}

std::vector<double> link_usage(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace) {
    std::vector<double> N(net.m(), 0.0);
    for (const auto& ev : trace.events) {
        if (ev.kind != ScheduleEvent::Communicate) continue;
        int e = net.edge_between(ev.from, ev.to);
        if (e >= 0) N[e] += dag.weight(ev.theta);
    }
    return N;
}

namespace {

using Key = std::tuple<int, int, std::int64_t>;  // node, theta, k

std::string describe(const NetworkGraph& net, const ComputationDag& dag, const ScheduleEvent& ev) {
    std::string s = ev.kind == ScheduleEvent::Compute ? "compute " : "communicate ";
    auto node = [&](int u) { return u >= 0 && u < net.n() ? net.id(u) : std::string("?"); };
    s += ev.kind == ScheduleEvent::Compute ? node(ev.node) : node(ev.from) + "-" + node(ev.to);
    s += " theta=" + (ev.theta >= 0 && ev.theta < dag.size() ? dag.id(ev.theta) : std::string("?"));
    s += " k=" + std::to_string(ev.k);
    return s;
}

}  // namespace

ScheduleReport validate_schedule(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace) {
    require_valid_instance(net, dag);
    const auto pin = resolve_pins(net, dag);
    ScheduleReport out;
    out.N.assign(net.m(), 0.0);
    const std::int64_t K = trace.K;
    const int f = delivered_function(dag);
    auto bad = [&](std::int64_t l, const std::string& what) {
        if (out.first_bad_event < 0) out.first_bad_event = l;
        out.report.add("event", "event " + std::to_string(l) + " (" + describe(net, dag, trace.events[l]) + "): " + what);
    };

    // Counters m_{u,k}^theta: how often each held symbol is consumed at its node.
    std::map<Key, int> m;
    for (const auto& ev : trace.events) {
        if (ev.theta < 0 || ev.theta >= dag.size()) continue;
        if (ev.kind == ScheduleEvent::Communicate) {
            ++m[{ev.from, ev.theta, ev.k}];
        } else {
            for (int g : dag.in_edges(ev.theta)) ++m[{ev.node, dag.edge(g).tail, ev.k}];
        }
    }
    std::vector<std::set<std::pair<int, std::int64_t>>> U(net.n());
    for (int s : dag.sources())
        for (std::int64_t k = 1; k <= K; ++k) U[pin[s]].insert({s, k});

    auto consume = [&](int u, int theta, std::int64_t k) {
        auto it = m.find({u, theta, k});
        if (it != m.end() && --it->second == 0) {
            U[u].erase({theta, k});
            m.erase(it);
        }
    };
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(trace.events.size()); ++l) {
        const auto& ev = trace.events[l];
        if (ev.theta < 0 || ev.theta >= dag.size()) {
            bad(l, "unknown function");
            continue;
        }
        if (ev.k < 1 || ev.k > K) {
            bad(l, "symbol index outside [1, K]");
            continue;
        }
        if (ev.kind == ScheduleEvent::Compute) {
            if (ev.node < 0 || ev.node >= net.n()) {
                bad(l, "unknown node");
                continue;
            }
            if (dag.is_source(ev.theta)) {
                bad(l, "source functions are not computed");
                continue;
            }
            std::string missing;
            for (int g : dag.in_edges(ev.theta)) {
                int p = dag.edge(g).tail;
                if (!U[ev.node].count({p, ev.k})) missing += (missing.empty() ? "" : ", ") + dag.id(p);
            }
            if (!missing.empty()) {
                bad(l, "inputs not present: " + missing);
                continue;
            }
            for (int g : dag.in_edges(ev.theta)) consume(ev.node, dag.edge(g).tail, ev.k);
            U[ev.node].insert({ev.theta, ev.k});
        } else {
            int e = (ev.from >= 0 && ev.from < net.n() && ev.to >= 0 && ev.to < net.n()) ? net.edge_between(ev.from, ev.to)
                                                                                        : -1;
            if (e < 0) {
                bad(l, "no such network edge");
                continue;
            }
            if (!U[ev.from].count({ev.theta, ev.k})) {
                bad(l, "payload not held by the sender");
                continue;
            }
            consume(ev.from, ev.theta, ev.k);
            U[ev.to].insert({ev.theta, ev.k});
            out.N[e] += dag.weight(ev.theta);
        }
    }

    bool final_ok = true;
    for (int u = 0; u < net.n(); ++u) {
        if (u == net.sink()) continue;
        if (!U[u].empty()) {
            final_ok = false;
            out.report.add("final_condition", "node " + net.id(u) + " still holds " + std::to_string(U[u].size()) +
                                                  " symbol(s)");
        }
    }
    std::int64_t delivered = 0, stray = 0;
    for (const auto& [theta, k] : U[net.sink()]) (theta == f ? delivered : stray)++;
    if (delivered != K || stray != 0) {
        final_ok = false;
        out.report.add("final_condition", "sink holds " + std::to_string(delivered) + " of " + std::to_string(K) +
                                              " results and " + std::to_string(stray) + " other symbol(s)");
    }
    if (!m.empty()) {
        final_ok = false;
        out.report.add("counters", std::to_string(m.size()) + " counter(s) did not reach zero");
    }
    out.final_ok = final_ok && out.first_bad_event < 0;

    if (K == 0) {
        out.lambda = 0.0;
    } else {
        out.lambda = kInf;
        for (int e = 0; e < net.m(); ++e)
            if (out.N[e] > 0.0) out.lambda = std::min(out.lambda, static_cast<double>(K) * net.edge(e).capacity / out.N[e]);
    }
    return out;
}

RateSolution schedule_to_flows(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace) {
    auto rep = validate_schedule(net, dag, trace);
    if (!rep.report.ok()) fail(ErrorKind::InvalidInput, "schedule is not valid: " + rep.report.str());
    const auto pin = resolve_pins(net, dag);
    const int f = delivered_function(dag);
    const std::int64_t K = trace.K;

    struct Symbol {
        std::vector<std::vector<int>> sites;   // per DAG vertex, computation nodes
        std::vector<std::vector<int>> parent;  // per DAG vertex, first sender per node (-1 none)
    };
    auto fresh = [&] {
        Symbol s;
        s.sites.assign(dag.size(), {});
        s.parent.assign(dag.size(), std::vector<int>(net.n(), -1));
        return s;
    };
    std::map<std::int64_t, Symbol> symbols;
    for (const auto& ev : trace.events) {
        auto it = symbols.find(ev.k);
        if (it == symbols.end()) it = symbols.emplace(ev.k, fresh()).first;
        auto& S = it->second;
        if (ev.kind == ScheduleEvent::Compute)
            S.sites[ev.theta].push_back(ev.node);
        else if (S.parent[ev.theta][ev.to] < 0)
            S.parent[ev.theta][ev.to] = ev.from;
    }
    std::map<std::vector<std::vector<Path>>, std::pair<size_t, std::int64_t>> groups;
    std::vector<Embedding> order;
    for (std::int64_t k = 1; k <= K; ++k) {
        auto it = symbols.find(k);
        Symbol S = it == symbols.end() ? fresh() : it->second;
        for (int s : dag.sources()) S.sites[s] = {pin[s]};
        if (f != dag.sink()) S.sites[dag.sink()] = {net.sink()};
        Embedding emb;
        emb.paths.assign(dag.num_edges(), {});
        for (int g = 0; g < dag.num_edges(); ++g) {
            const auto& E = dag.edge(g);
            auto own = S.sites[E.tail];
            std::vector<int> consumers = S.sites[E.head];
            std::sort(consumers.begin(), consumers.end());
            consumers.erase(std::unique(consumers.begin(), consumers.end()), consumers.end());
            for (int v : consumers) {
                Path p{v};
                int guard = 0;
                while (std::find(own.begin(), own.end(), p.back()) == own.end()) {
                    int from = S.parent[E.tail][p.back()];
                    if (from < 0 || ++guard > net.n()) fail(ErrorKind::InvalidInput, "cannot trace a transmission");
                    p.push_back(from);
                }
                std::reverse(p.begin(), p.end());
                emb.paths[g].push_back(std::move(p));
            }
        }
        auto key = emb.normalized().paths;
        auto [pos, inserted] = groups.emplace(key, std::make_pair(order.size(), std::int64_t{0}));
        if (inserted) order.push_back(std::move(emb));
        ++pos->second.second;
    }
    RateSolution sol;
    sol.columns.resize(order.size());
    for (const auto& [key, v] : groups) {
        auto& c = sol.columns[v.first];
        c.name = "S" + std::to_string(v.first + 1);
        c.emb = order[v.first];
        c.flow = rep.lambda * static_cast<double>(v.second) / static_cast<double>(K);
        sol.R += c.flow;
    }
    sol.duals.assign(net.m(), 0.0);
    sol.status = RateStatus::Approximate;
    sol.upper_bound = kInf;
    sol.ratio = kInf;
    sol.pricing = "schedule";
    return sol;
}

}  // namespace calpkit
