#include "calpkit/generate.hpp"

#include <algorithm>
#include <set>

#include "calpkit/error.hpp"

namespace calpkit {

int Rng::uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

NetworkGraph random_network(Rng& rng, const GenOptions& opt) {
    require(opt.nodes >= 1, "network needs at least one node");
    const int n = opt.nodes;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("u" + std::to_string(i));
    std::set<std::pair<int, int>> present;
    std::vector<EdgeSpec> edges;
    auto add = [&](int a, int b) {
        if (a == b || !present.insert({std::min(a, b), std::max(a, b)}).second) return;
        double cap = static_cast<double>(rng.uniform(1, opt.max_capacity)) / opt.capacity_den;
        double price = rng.uniform(1, opt.max_price);
        edges.push_back({ids[a], ids[b], cap, price});
    };
    for (int i = 1; i < n; ++i) add(i, rng.uniform(0, i - 1));
    const int max_edges = n * (n - 1) / 2;
    for (int k = 0; k < opt.extra_edges && static_cast<int>(present.size()) < max_edges; ++k) {
        for (int tries = 0; tries < 20; ++tries) {
            int a = rng.uniform(0, n - 1), b = rng.uniform(0, n - 1);
            if (a != b && !present.count({std::min(a, b), std::max(a, b)})) {
                add(a, b);
                break;
            }
        }
    }
    const int sink = rng.uniform(0, n - 1);
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != sink) others.push_back(i);
    for (int i = static_cast<int>(others.size()) - 1; i > 0; --i) std::swap(others[i], others[rng.uniform(0, i)]);
    int ns = std::min<int>(std::max(1, opt.sources), static_cast<int>(others.size()));
    std::vector<int> chosen(others.begin(), others.begin() + ns);
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::string> sources;
    for (int v : chosen) sources.push_back(ids[v]);
    if (sources.empty()) sources.push_back(ids[sink]);
    return NetworkGraph(ids, edges, sources, ids[sink]);
}

namespace {

struct Skeleton {
    int count = 0;
    int kappa = 0;  // vertices [0, kappa) are sources, count - 1 is the sink
    std::set<std::pair<int, int>> edges;
};

Skeleton general_skeleton(Rng& rng, const GenOptions& opt) {
    Skeleton s;
    s.kappa = std::max(1, opt.sources);
    s.count = std::max(opt.dag_vertices, s.kappa + 1);
    const int V = s.count;
    for (int i = s.kappa; i < V; ++i) {
        int k = rng.uniform(1, std::min(2, i));
        for (int j = 0; j < k; ++j) s.edges.insert({rng.uniform(0, i - 1), i});
    }
    for (int v = 0; v < V - 1; ++v) {
        bool has_out = std::any_of(s.edges.begin(), s.edges.end(), [&](auto e) { return e.first == v; });
        if (!has_out) s.edges.insert({v, rng.uniform(std::max(v + 1, s.kappa), V - 1)});
    }
    return s;
}

Skeleton tree_skeleton(Rng& rng, const GenOptions& opt) {
    const int inner = std::max(0, opt.dag_vertices - 1 - std::max(1, opt.sources));
    // Creation order: 0 is the sink, 1..inner intermediates, each hanging below an earlier vertex.
    std::vector<int> parent(inner + 1, -1);
    std::vector<int> children(inner + 1, 0);
    for (int i = 1; i <= inner; ++i) {
        parent[i] = rng.uniform(0, i - 1);
        ++children[parent[i]];
    }
    std::vector<int> src_parent;
    for (int i = 0; i <= inner; ++i)
        if (children[i] == 0) src_parent.push_back(i);
    while (static_cast<int>(src_parent.size()) < opt.sources) src_parent.push_back(rng.uniform(0, inner));
    Skeleton s;
    s.kappa = static_cast<int>(src_parent.size());
    s.count = s.kappa + inner + 1;
    // Final index: sources first, then intermediates from deepest-created to earliest, sink last.
    auto idx = [&](int created) { return s.count - 1 - created; };
    for (int i = 1; i <= inner; ++i) s.edges.insert({idx(i), idx(parent[i])});
    for (int k = 0; k < s.kappa; ++k) s.edges.insert({k, idx(src_parent[k])});
    return s;
}

Skeleton layered_skeleton(Rng& rng, const GenOptions& opt) {
    Skeleton s;
    s.kappa = std::max(1, opt.sources);
    int middle = std::max(0, opt.dag_vertices - s.kappa - 1);
    std::vector<std::vector<int>> layers(1);
    for (int i = 0; i < s.kappa; ++i) layers[0].push_back(i);
    int next = s.kappa;
    while (middle > 0) {
        int w = std::min(middle, rng.uniform(1, std::max(1, opt.layer_width)));
        layers.emplace_back();
        for (int i = 0; i < w; ++i) layers.back().push_back(next++);
        middle -= w;
    }
    layers.push_back({next++});
    s.count = next;
    for (size_t L = 1; L < layers.size(); ++L) {
        const auto& prev = layers[L - 1];
        const int hi = static_cast<int>(prev.size()) - 1;
        for (int v : layers[L]) {
            int k = rng.uniform(1, std::min<int>(2, static_cast<int>(prev.size())));
            for (int j = 0; j < k; ++j) s.edges.insert({prev[rng.uniform(0, hi)], v});
        }
        for (int u : prev) {
            bool has_out = std::any_of(s.edges.begin(), s.edges.end(), [&](auto e) { return e.first == u; });
            if (!has_out) s.edges.insert({u, layers[L][rng.uniform(0, static_cast<int>(layers[L].size()) - 1)]});
        }
    }
    return s;
}

}  // namespace

ComputationDag random_dag(Rng& rng, const NetworkGraph& net, const GenOptions& opt) {
    Skeleton s;
    switch (opt.shape) {
        case DagShape::Tree: s = tree_skeleton(rng, opt); break;
        case DagShape::Layered: s = layered_skeleton(rng, opt); break;
        case DagShape::General: s = general_skeleton(rng, opt); break;
    }
    std::vector<DagNodeSpec> nodes;
    for (int v = 0; v < s.count; ++v)
        nodes.push_back({"w" + std::to_string(v + 1), v == s.count - 1 ? 1 : rng.uniform(1, opt.max_weight)});
    std::vector<DagEdgeSpec> edges;
    for (auto [a, b] : s.edges) edges.push_back({nodes[a].id, nodes[b].id, std::nullopt, {}});
    std::vector<std::string> sources, pins;
    const auto& ns = net.sources();
    for (int k = 0; k < s.kappa; ++k) {
        sources.push_back(nodes[k].id);
        pins.push_back(net.id(ns[k < static_cast<int>(ns.size()) ? k : rng.uniform(0, static_cast<int>(ns.size()) - 1)]));
    }
    return ComputationDag(nodes, edges, sources, nodes.back().id, pins);
}

Instance random_instance(std::uint64_t seed, const GenOptions& opt) {
    Rng rng(seed);
    Instance I;
    I.name = std::string(opt.shape == DagShape::Tree ? "tree" : opt.shape == DagShape::Layered ? "layered" : "dag") +
             "-" + std::to_string(seed);
    I.net = random_network(rng, opt);
    I.dag = random_dag(rng, I.net, opt);
    return I;
}

NetworkGraph two_node_network(double capacity, double price) {
    return NetworkGraph({"n1", "n2"}, {{"n1", "n2", capacity, price}}, {"n1", "n2"}, "n2");
}

}  // namespace calpkit
