#include "calpkit/embedding.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "calpkit/error.hpp"

namespace calpkit {

namespace {

std::string path_str(const NetworkGraph& net, const Path& p) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += '-';
        s += (p[i] >= 0 && p[i] < net.n()) ? net.id(p[i]) : "?";
    }
    return s;
}

// Structural path checks; returns false after reporting when the path is unusable.
bool check_path(const NetworkGraph& net, const ComputationDag& dag, int g, const Path& p, ValidationReport& rep) {
    const std::string where = "edge '" + dag.edge(g).id + "' path " + path_str(net, p);
    if (p.empty()) {
        rep.add("path", "edge '" + dag.edge(g).id + "' has an empty vertex list");
        return false;
    }
    for (int v : p) {
        if (v < 0 || v >= net.n()) {
            rep.add("path", where + " references an unknown node");
            return false;
        }
    }
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        rep.add("path", where + " repeats a node");
        return false;
    }
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        if (net.edge_between(p[i], p[i + 1]) < 0) {
            rep.add("path", where + " uses a non-edge");
            return false;
        }
    }
    return true;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

Embedding Embedding::normalized() const {
    Embedding e = *this;
    for (auto& ps : e.paths) std::sort(ps.begin(), ps.end());
    return e;
}

Embedding REmbedding::general() const {
    Embedding e;
    e.paths.reserve(paths.size());
    for (const auto& p : paths) e.paths.push_back({p});
    return e;
}

ValidationReport validate_embedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    ValidationReport rep;
    if (static_cast<int>(emb.paths.size()) != dag.num_edges()) {
        rep.add("shape", "embedding covers " + std::to_string(emb.paths.size()) + " edges, DAG has " +
                             std::to_string(dag.num_edges()));
        return rep;
    }
    const auto pin = resolve_pins(net, dag);
    bool structural_ok = true;
    for (int g = 0; g < dag.num_edges(); ++g) {
        if (emb.paths[g].empty()) {
            rep.add("shape", "edge '" + dag.edge(g).id + "' has no path");
            structural_ok = false;
        }
        for (const auto& p : emb.paths[g]) structural_ok &= check_path(net, dag, g, p, rep);
    }
    if (!structural_ok) return rep;

    std::vector<std::vector<int>> starts(dag.num_edges()), ends(dag.num_edges());
    for (int g = 0; g < dag.num_edges(); ++g) {
        for (const auto& p : emb.paths[g]) {
            starts[g].push_back(p.front());
            ends[g].push_back(p.back());
        }
    }

    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        if (dag.is_source(E.tail)) {
            for (const auto& p : emb.paths[g])
                if (p.front() != pin[E.tail])
                    rep.add("source_start", "edge '" + E.id + "' path " + path_str(net, p) + " does not start at " +
                                                net.id(pin[E.tail]));
        }
        if (E.head == dag.sink()) {
            for (const auto& p : emb.paths[g])
                if (p.back() != net.sink())
                    rep.add("sink_end", "edge '" + E.id + "' path " + path_str(net, p) + " does not end at " +
                                            net.id(net.sink()));
        }
        // (3) predecessor ends versus successor starts
        if (E.head != dag.sink()) {
            std::set<int> succ_starts;
            for (int h : dag.out_edges(E.head)) {
                succ_starts.insert(starts[h].begin(), starts[h].end());
                for (int s : starts[h]) {
                    if (std::find(ends[g].begin(), ends[g].end(), s) == ends[g].end())
                        rep.add("endpoint_match", "edge '" + dag.edge(h).id + "' starts at " + net.id(s) +
                                                      " where edge '" + E.id + "' does not deliver");
                }
            }
            for (int e : ends[g]) {
                if (!succ_starts.count(e))
                    rep.add("endpoint_match", "edge '" + E.id + "' delivers to " + net.id(e) +
                                                  " where no successor edge starts");
            }
        }
        // (4) distinct ends
        auto se = ends[g];
        std::sort(se.begin(), se.end());
        if (std::adjacent_find(se.begin(), se.end()) != se.end())
            rep.add("distinct_ends", "edge '" + E.id + "' has two paths ending at the same node");
        // (5) paths with distinct starts are vertex-disjoint
        const auto& ps = emb.paths[g];
        for (size_t i = 0; i < ps.size(); ++i) {
            for (size_t j = i + 1; j < ps.size(); ++j) {
                if (ps[i].front() == ps[j].front()) continue;
                bool meet = std::any_of(ps[i].begin(), ps[i].end(), [&](int v) {
                    return std::find(ps[j].begin(), ps[j].end(), v) != ps[j].end();
                });
                if (meet)
                    rep.add("disjoint_paths", "edge '" + E.id + "' paths " + path_str(net, ps[i]) + " and " +
                                                  path_str(net, ps[j]) + " intersect");
            }
        }
    }
    return rep;
}

ValidationReport validate_rembedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    ValidationReport rep;
    if (static_cast<int>(emb.paths.size()) != dag.num_edges()) {
        rep.add("shape", "embedding covers " + std::to_string(emb.paths.size()) + " edges, DAG has " +
                             std::to_string(dag.num_edges()));
        return rep;
    }
    bool ok = true;
    for (int g = 0; g < dag.num_edges(); ++g) {
        if (emb.paths[g].size() != 1) {
            rep.add("single_path", "edge '" + dag.edge(g).id + "' maps to " + std::to_string(emb.paths[g].size()) +
                                       " paths");
            ok = false;
            continue;
        }
        ok &= check_path(net, dag, g, emb.paths[g][0], rep);
    }
    if (!ok) return rep;
    const auto pin = resolve_pins(net, dag);
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        const Path& p = emb.paths[g][0];
        if (dag.is_source(E.tail) && p.front() != pin[E.tail])
            rep.add("source_start", "edge '" + E.id + "' does not start at " + net.id(pin[E.tail]));
        if (E.head == dag.sink() && p.back() != net.sink())
            rep.add("sink_end", "edge '" + E.id + "' does not end at " + net.id(net.sink()));
        for (int h : dag.out_edges(E.head)) {
            if (emb.paths[h][0].front() != p.back())
                rep.add("endpoint_match", "edge '" + dag.edge(h).id + "' does not start where '" + E.id + "' ends");
        }
    }
    return rep;
}

ValidationReport validate_rembedding(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb) {
    auto rep = validate_rembedding(net, dag, remb.general());
    if (!rep.ok()) return rep;
    if (static_cast<int>(remb.assignment.size()) != dag.size()) {
        rep.add("assignment", "assignment length differs from vertex count");
        return rep;
    }
    const auto pin = resolve_pins(net, dag);
    for (int v = 0; v < dag.size(); ++v) {
        if (pin[v] >= 0 && remb.assignment[v] != pin[v])
            rep.add("assignment", "vertex '" + dag.id(v) + "' is pinned to " + net.id(pin[v]));
    }
    for (int g = 0; g < dag.num_edges(); ++g) {
        const auto& E = dag.edge(g);
        if (remb.paths[g].front() != remb.assignment[E.tail] || remb.paths[g].back() != remb.assignment[E.head])
            rep.add("assignment", "edge '" + E.id + "' path disagrees with the vertex assignment");
    }
    return rep;
}

REmbedding to_rembedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    auto rep = validate_rembedding(net, dag, emb);
    if (!rep.ok()) fail(ErrorKind::InvalidInput, "not an R-embedding:\n" + rep.str());
    REmbedding r;
    r.assignment = resolve_pins(net, dag);
    for (int g = 0; g < dag.num_edges(); ++g) {
        r.paths.push_back(emb.paths[g][0]);
        r.assignment[dag.edge(g).tail] = emb.paths[g][0].front();
        r.assignment[dag.edge(g).head] = emb.paths[g][0].back();
    }
    return r;
}

std::vector<int> path_edges(const NetworkGraph& net, const Path& path) {
    std::vector<int> es;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int e = net.edge_between(path[i], path[i + 1]);
        require(e >= 0, "path uses a non-edge");
        es.push_back(e);
    }
    return es;
}

int Usage::r(int theta, int e) const {
    const auto& fe = function_edges.at(theta);
    return std::binary_search(fe.begin(), fe.end(), e) ? 1 : 0;
}

Usage edge_usage(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    require(static_cast<int>(emb.paths.size()) == dag.num_edges(), "embedding shape differs from DAG");
    Usage u;
    u.function_edges.assign(dag.size(), {});
    u.total.assign(net.m(), 0.0);
    for (int g = 0; g < dag.num_edges(); ++g) {
        auto& fe = u.function_edges[dag.edge(g).tail];
        for (const auto& p : emb.paths[g]) {
            auto es = path_edges(net, p);
            fe.insert(fe.end(), es.begin(), es.end());
        }
    }
    for (int v = 0; v < dag.size(); ++v) {
        u.function_edges[v] = sorted_unique(std::move(u.function_edges[v]));
        for (int e : u.function_edges[v]) u.total[e] += dag.weight(v);
    }
    return u;
}

double cost_C(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb,
              const std::vector<double>& prices) {
    auto u = edge_usage(net, dag, emb);
    double c = 0.0;
    for (int e = 0; e < net.m(); ++e)
        if (u.total[e] != 0.0) c += u.total[e] * prices.at(e);
    return c;
}

double cost_C(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb,
              const std::vector<double>& prices) {
    return cost_C(net, dag, remb.general(), prices);
}

double cost_CC(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb,
               const std::vector<double>& prices) {
    require(static_cast<int>(remb.paths.size()) == dag.num_edges(), "embedding shape differs from DAG");
    double c = 0.0;
    for (int g = 0; g < dag.num_edges(); ++g) {
        double w = dag.edge(g).weight;
        if (w == 0.0) continue;
        for (int e : path_edges(net, remb.paths[g])) c += w * prices.at(e);
    }
    return c;
}

REmbedding assignment_to_rembedding(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<int>& assignment, const DistanceMatrix& dist) {
    require(static_cast<int>(assignment.size()) == dag.size(), "assignment length differs from vertex count");
    const auto pin = resolve_pins(net, dag);
    for (int v = 0; v < dag.size(); ++v) {
        require(assignment[v] >= 0 && assignment[v] < net.n(), "assignment of '" + dag.id(v) + "' out of range");
        require(pin[v] < 0 || assignment[v] == pin[v], "assignment moves pinned vertex '" + dag.id(v) + "'");
    }
    REmbedding r;
    r.assignment = assignment;
    r.paths.reserve(dag.num_edges());
    for (const auto& E : dag.edges()) r.paths.push_back(dist.path(assignment[E.tail], assignment[E.head]));
    return r;
}

REmbedding assignment_to_rembedding(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<int>& assignment) {
    return assignment_to_rembedding(net, dag, assignment, all_pairs_shortest(net));
}

std::vector<std::vector<int>> computation_sites(const NetworkGraph& net, const ComputationDag& dag,
                                                const Embedding& emb) {
    const auto pin = resolve_pins(net, dag);
    std::vector<std::vector<int>> sites(dag.size());
    for (int v = 0; v < dag.size(); ++v) {
        if (pin[v] >= 0) {
            sites[v] = {pin[v]};
            continue;
        }
        for (int g : dag.out_edges(v))
            for (const auto& p : emb.paths.at(g))
                if (!p.empty()) sites[v].push_back(p.front());
        sites[v] = sorted_unique(std::move(sites[v]));
    }
    return sites;
}

Embedding embedding_from_sites(const NetworkGraph& net, const ComputationDag& dag,
                               std::vector<std::vector<int>> sites, const DistanceMatrix& dist) {
    const auto pin = resolve_pins(net, dag);
    require(static_cast<int>(sites.size()) == dag.size(), "site list length differs from vertex count");
    for (auto& s : sites) s = sorted_unique(std::move(s));
    sites[dag.sink()] = {net.sink()};
    Embedding emb;
    emb.paths.assign(dag.num_edges(), {});
    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (v == dag.sink()) continue;
        auto& own = sites[v];
        if (pin[v] >= 0) own = {pin[v]};
        require(!own.empty(), "vertex '" + dag.id(v) + "' has no site");
        std::vector<int> used;
        for (int g : dag.out_edges(v)) {
            for (int q : sites[dag.edge(g).head]) {
                int from = -1;
                if (std::binary_search(own.begin(), own.end(), q)) {
                    from = q;
                } else {
                    for (int p : own)
                        if (from < 0 || dist(p, q) < dist(from, q)) from = p;
                }
                emb.paths[g].push_back(dist.path(from, q));
                used.push_back(from);
            }
        }
        if (pin[v] < 0) own = sorted_unique(std::move(used));
    }
    return emb;
}

}  // namespace calpkit
