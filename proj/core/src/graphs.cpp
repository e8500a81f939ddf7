#include "calpkit/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "calpkit/error.hpp"

namespace calpkit {

bool ValidationReport::has(std::string_view property) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.property == property; });
}

void ValidationReport::add(std::string property, std::string detail) {
    violations.push_back({std::move(property), std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v.property << ": " << v.detail << '\n';
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    return os.str();
}

namespace {

std::int64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::int64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

NetworkGraph::NetworkGraph(std::vector<std::string> nodes, const std::vector<EdgeSpec>& edges,
                           const std::vector<std::string>& sources, const std::string& sink)
    : ids_(std::move(nodes)) {
    require(!ids_.empty(), "network has no nodes");
    for (int i = 0; i < n(); ++i) {
        require(index_.emplace(ids_[i], i).second, "duplicate network node id '" + ids_[i] + "'");
    }
    adj_.resize(ids_.size());
    for (const auto& spec : edges) {
        int u = index(spec.u);
        int v = index(spec.v);
        require(u != v, "self-loop on network node '" + spec.u + "'");
        require(finite_nonneg(spec.capacity), "capacity of " + spec.u + "-" + spec.v + " must be finite and >= 0");
        require(finite_nonneg(spec.weight), "weight of " + spec.u + "-" + spec.v + " must be finite and >= 0");
        int e = m();
        require(edge_index_.emplace(pair_key(u, v), e).second,
                "parallel network edge " + spec.u + "-" + spec.v);
        edges_.push_back({u, v, spec.capacity, spec.weight});
        adj_[u].push_back({v, e});
        adj_[v].push_back({u, e});
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end(), [](const Adj& x, const Adj& y) { return x.to < y.to; });
    }
    for (const auto& s : sources) {
        int v = index(s);
        require(std::find(sources_.begin(), sources_.end(), v) == sources_.end(),
                "duplicate network source '" + s + "'");
        sources_.push_back(v);
    }
    sink_ = index(sink);
}

std::optional<int> NetworkGraph::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int NetworkGraph::index(const std::string& id) const {
    auto v = find(id);
    require(v.has_value(), "unknown network node '" + id + "'");
    return *v;
}

int NetworkGraph::edge_between(int u, int v) const {
    auto it = edge_index_.find(pair_key(u, v));
    return it == edge_index_.end() ? -1 : it->second;
}

std::vector<double> NetworkGraph::weights() const {
    std::vector<double> w;
    w.reserve(edges_.size());
    for (const auto& e : edges_) w.push_back(e.weight);
    return w;
}

std::vector<double> NetworkGraph::capacities() const {
    std::vector<double> c;
    c.reserve(edges_.size());
    for (const auto& e : edges_) c.push_back(e.capacity);
    return c;
}

ValidationReport validate_network(const NetworkGraph& net) {
    ValidationReport rep;
    if (std::find(net.sources().begin(), net.sources().end(), net.sink()) != net.sources().end()) {
        rep.warnings.push_back("sink '" + net.id(net.sink()) + "' coincides with a source position");
    }
    std::vector<char> seen(net.n(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& a : net.adj(u)) {
            if (!seen[a.to]) {
                seen[a.to] = 1;
                stack.push_back(a.to);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 0) > 0) rep.warnings.push_back("network is disconnected");
    return rep;
}

ComputationDag::ComputationDag(const std::vector<DagNodeSpec>& nodes, const std::vector<DagEdgeSpec>& edges,
                               const std::vector<std::string>& sources, const std::string& sink,
                               std::vector<std::string> source_pins)
    : pins_(std::move(source_pins)) {
    require(!nodes.empty(), "computation DAG has no vertices");
    for (const auto& nd : nodes) {
        int i = static_cast<int>(ids_.size());
        require(index_.emplace(nd.id, i).second, "duplicate DAG vertex id '" + nd.id + "'");
        require(nd.weight >= 0, "negative weight on DAG vertex '" + nd.id + "'");
        ids_.push_back(nd.id);
        weights_.push_back(nd.weight);
    }
    out_.resize(ids_.size());
    in_.resize(ids_.size());
    for (const auto& spec : edges) {
        int u = index(spec.u);
        int v = index(spec.v);
        require(edge_between(u, v) < 0, "parallel DAG edge " + spec.u + "->" + spec.v);
        double w = spec.weight.value_or(static_cast<double>(weights_[u]));
        require(finite_nonneg(w), "weight of DAG edge " + spec.u + "->" + spec.v + " must be finite and >= 0");
        std::string id = spec.id.empty() ? spec.u + "->" + spec.v : spec.id;
        int g = num_edges();
        require(edge_ids_.emplace(id, g).second, "duplicate DAG edge id '" + id + "'");
        edges_.push_back({u, v, w, spec.weight.has_value(), id});
        out_[u].push_back(g);
        in_[v].push_back(g);
    }
    source_pos_.assign(ids_.size(), -1);
    for (const auto& s : sources) {
        int v = index(s);
        require(source_pos_[v] < 0, "duplicate DAG source '" + s + "'");
        source_pos_[v] = static_cast<int>(sources_.size());
        sources_.push_back(v);
    }
    sink_ = index(sink);
    require(pins_.empty() || pins_.size() == sources_.size(), "source pin list length differs from source list");

    std::vector<int> indeg(ids_.size(), 0);
    for (const auto& e : edges_) ++indeg[e.head];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < size(); ++v)
        if (indeg[v] == 0) ready.push(v);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        topo_.push_back(v);
        for (int g : out_[v])
            if (--indeg[edges_[g].head] == 0) ready.push(edges_[g].head);
    }
    acyclic_ = static_cast<int>(topo_.size()) == size();
}

std::optional<int> ComputationDag::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int ComputationDag::index(const std::string& id) const {
    auto v = find(id);
    require(v.has_value(), "unknown DAG vertex '" + id + "'");
    return *v;
}

std::optional<int> ComputationDag::find_edge(const std::string& id) const {
    auto it = edge_ids_.find(id);
    if (it == edge_ids_.end()) return std::nullopt;
    return it->second;
}

int ComputationDag::edge_index(const std::string& id) const {
    auto g = find_edge(id);
    require(g.has_value(), "unknown DAG edge '" + id + "'");
    return *g;
}

int ComputationDag::edge_between(int tail, int head) const {
    for (int g : out_.at(tail))
        if (edges_[g].head == head) return g;
    return -1;
}

const std::vector<int>& ComputationDag::topo_order() const {
    require(acyclic_, "computation DAG has a directed cycle");
    return topo_;
}

int ComputationDag::max_out_degree() const {
    size_t d = 0;
    for (const auto& o : out_) d = std::max(d, o.size());
    return static_cast<int>(d);
}

ValidationReport validate_computation_dag(const ComputationDag& dag) {
    ValidationReport rep;
    if (!dag.acyclic()) {
        std::string where;
        for (const auto& e : dag.edges()) {
            if (e.tail == e.head) {
                where = "self-loop at '" + dag.id(e.tail) + "'";
                break;
            }
        }
        rep.add("acyclicity", where.empty() ? "directed cycle present" : where);
    }
    if (dag.sources().empty()) rep.add("sources", "no source vertices");
    for (int s : dag.sources()) {
        if (!dag.in_edges(s).empty()) rep.add("source_in_degree", "source '" + dag.id(s) + "' has incoming edges");
        if (s != dag.sink() && dag.out_edges(s).empty())
            rep.add("source_out_degree", "source '" + dag.id(s) + "' has no outgoing edge");
    }
    if (!dag.out_edges(dag.sink()).empty()) rep.add("sink_out_degree", "sink '" + dag.id(dag.sink()) + "' has outgoing edges");
    if (dag.is_source(dag.sink()))
        rep.add("source_sink_distinct", "sink '" + dag.id(dag.sink()) + "' is also a source; it is unreachable from the sources");
    for (int v = 0; v < dag.size(); ++v) {
        if (v == dag.sink() || dag.is_source(v)) continue;
        if (dag.in_edges(v).empty() || dag.out_edges(v).empty())
            rep.add("intermediate_degree", "vertex '" + dag.id(v) + "' needs in- and out-degree >= 1");
    }
    for (int v = 0; v < dag.size(); ++v) {
        for (int g : dag.out_edges(v)) {
            if (dag.edge(g).weight != static_cast<double>(dag.weight(v))) {
                rep.add("uniform_out_weight", "edge '" + dag.edge(g).id + "' weight differs from w('" + dag.id(v) + "')");
                break;
            }
        }
    }
    return rep;
}

std::vector<int> resolve_pins(const NetworkGraph& net, const ComputationDag& dag) {
    std::vector<int> pin(dag.size(), -1);
    const auto& srcs = dag.sources();
    if (!dag.source_pins().empty()) {
        for (size_t i = 0; i < srcs.size(); ++i) pin[srcs[i]] = net.index(dag.source_pins()[i]);
    } else {
        require(srcs.size() == net.sources().size(),
                "DAG has " + std::to_string(srcs.size()) + " sources but network lists " +
                    std::to_string(net.sources().size()));
        for (size_t i = 0; i < srcs.size(); ++i) pin[srcs[i]] = net.sources()[i];
    }
    pin[dag.sink()] = net.sink();
    return pin;
}

void require_valid_instance(const NetworkGraph& net, const ComputationDag& dag) {
    auto rep = validate_computation_dag(dag);
    if (!rep.ok()) fail(ErrorKind::InvalidInput, "invalid computation DAG:\n" + rep.str());
    resolve_pins(net, dag);
}

DistanceMatrix::DistanceMatrix(const NetworkGraph& net, const std::vector<double>& prices)
    : n_(net.n()), prices_(prices) {
    require(static_cast<int>(prices.size()) == net.m(), "price vector length differs from edge count");
    for (double p : prices) require(p >= 0.0, "negative edge price");
    adj_.resize(n_);
    for (int u = 0; u < n_; ++u) adj_[u] = net.adj(u);
    const size_t nn = static_cast<size_t>(n_) * n_;
    d_.assign(nn, kInf);
    hops_.assign(nn, std::numeric_limits<int>::max());
    using Key = std::tuple<double, int, int>;
    for (int s = 0; s < n_; ++s) {
        double* dist = &d_[static_cast<size_t>(s) * n_];
        int* hop = &hops_[static_cast<size_t>(s) * n_];
        std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
        dist[s] = 0.0;
        hop[s] = 0;
        pq.emplace(0.0, 0, s);
        while (!pq.empty()) {
            auto [du, hu, u] = pq.top();
            pq.pop();
            if (du != dist[u] || hu != hop[u]) continue;
            for (const auto& a : adj_[u]) {
                double w = prices_[a.edge];
                if (!(w < kInf)) continue;
                double nd = du + w;
                int nh = hu + 1;
                if (nd < dist[a.to] || (nd == dist[a.to] && nh < hop[a.to])) {
                    dist[a.to] = nd;
                    hop[a.to] = nh;
                    pq.emplace(nd, nh, a.to);
                }
            }
        }
    }
    for (int u = 0; u < n_; ++u) {
        for (int v = u + 1; v < n_; ++v) {
            size_t a = static_cast<size_t>(u) * n_ + v, b = static_cast<size_t>(v) * n_ + u;
            double m = std::min(d_[a], d_[b]);
            d_[a] = d_[b] = m;
        }
    }
}

std::vector<int> DistanceMatrix::path(int u, int v) const {
    if (!reachable(u, v)) {
        fail(ErrorKind::Infeasible, "no network path between node indices " + std::to_string(u) + " and " +
                                        std::to_string(v));
    }
    std::vector<int> seq{u};
    int cur = u;
    while (cur != v) {
        double dc = (*this)(cur, v);
        int hc = hops(v, cur);
        int next = -1;
        for (const auto& a : adj_[cur]) {
            double w = prices_[a.edge];
            if (!(w < kInf) || hops(v, a.to) != hc - 1) continue;
            double tol = 1e-9 * std::max(1.0, std::abs(dc));
            if (std::abs(w + (*this)(a.to, v) - dc) <= tol) {
                next = a.to;
                break;
            }
        }
        require(next >= 0, "shortest path reconstruction failed");
        seq.push_back(next);
        cur = next;
    }
    return seq;
}

DistanceMatrix all_pairs_shortest(const NetworkGraph& net) { return DistanceMatrix(net, net.weights()); }

DistanceMatrix all_pairs_shortest(const NetworkGraph& net, const std::vector<double>& prices) {
    return DistanceMatrix(net, prices);
}

SpanningTreeInfo spanning_tree_cycle_load(const ComputationDag& dag, const std::optional<std::vector<int>>& tree) {
    const int nv = dag.size();
    const int ne = dag.num_edges();
    std::vector<std::vector<std::pair<int, int>>> adj(nv);
    for (int g = 0; g < ne; ++g) {
        adj[dag.edge(g).tail].push_back({dag.edge(g).head, g});
        adj[dag.edge(g).head].push_back({dag.edge(g).tail, g});
    }
    SpanningTreeInfo info;
    info.in_tree.assign(ne, 0);
    info.cycle_count.assign(ne, 0);
    info.cycle_edges.assign(ne, {});

    if (tree) {
        std::vector<int> parent(nv);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
        require(static_cast<int>(tree->size()) == nv - 1, "spanning tree must have |Omega|-1 edges");
        for (int g : *tree) {
            require(g >= 0 && g < ne, "spanning tree edge index out of range");
            int a = root(dag.edge(g).tail), b = root(dag.edge(g).head);
            require(a != b, "spanning tree edge set contains a cycle");
            parent[a] = b;
            info.in_tree[g] = 1;
        }
    }

    // Root the tree at the sink; when no tree is given, BFS picks it.
    std::vector<int> par(nv, -1), par_edge(nv, -1), depth(nv, -1);
    std::queue<int> q;
    q.push(dag.sink());
    depth[dag.sink()] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, g] : adj[u]) {
            if (depth[w] >= 0) continue;
            if (tree && !info.in_tree[g]) continue;
            depth[w] = depth[u] + 1;
            par[w] = u;
            par_edge[w] = g;
            if (!tree) info.in_tree[g] = 1;
            q.push(w);
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (depth[v] < 0) {
            fail(ErrorKind::InvalidInput, tree ? "spanning tree does not span the DAG skeleton"
                                               : "DAG skeleton is disconnected");
        }
    }

    std::vector<double> wsum(ne, 0.0);
    for (int g = 0; g < ne; ++g) {
        if (info.in_tree[g]) continue;
        int a = dag.edge(g).tail, b = dag.edge(g).head;
        auto& cyc = info.cycle_edges[g];
        while (a != b) {
            if (depth[a] >= depth[b]) {
                cyc.push_back(par_edge[a]);
                a = par[a];
            } else {
                cyc.push_back(par_edge[b]);
                b = par[b];
            }
        }
        for (int t : cyc) {
            ++info.cycle_count[t];
            wsum[t] += dag.edge(g).weight;
        }
    }
    for (int g = 0; g < ne; ++g) {
        if (!info.in_tree[g]) continue;
        info.F = std::max(info.F, info.cycle_count[g]);
        if (wsum[g] > 0.0) {
            double r = dag.edge(g).weight > 0.0 ? wsum[g] / dag.edge(g).weight : kInf;
            info.weighted_load = std::max(info.weighted_load, r);
        }
    }
    return info;
}

Layering layer_dag(const ComputationDag& dag) {
    Layering L;
    if (!dag.acyclic()) return L;
    L.layer_of.assign(dag.size(), 0);
    for (int v : dag.topo_order())
        for (int g : dag.in_edges(v)) L.layer_of[v] = std::max(L.layer_of[v], L.layer_of[dag.edge(g).tail] + 1);
    int depth = *std::max_element(L.layer_of.begin(), L.layer_of.end());
    L.layers.assign(depth + 1, {});
    for (int v = 0; v < dag.size(); ++v) L.layers[L.layer_of[v]].push_back(v);
    for (const auto& layer : L.layers) L.width = std::max(L.width, static_cast<int>(layer.size()));
    for (int g = 0; g < dag.num_edges(); ++g) {
        if (L.layer_of[dag.edge(g).head] != L.layer_of[dag.edge(g).tail] + 1) {
            L.bad_edge = g;
            return L;
        }
    }
    L.layered = true;
    return L;
}

bool is_in_tree(const ComputationDag& dag) {
    if (!dag.acyclic()) return false;
    for (int v = 0; v < dag.size(); ++v) {
        if (v == dag.sink()) continue;
        if (dag.out_edges(v).size() != 1) return false;
    }
    return true;
}

}  // namespace calpkit
