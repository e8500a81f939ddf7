#include "calpkit/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "calpkit/error.hpp"

namespace calpkit {

SimpleGraph SimpleGraph::from_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
    SimpleGraph H;
    std::map<std::string, int> index;
    auto id = [&](const std::string& s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(H.vertices.size()));
        if (fresh) H.vertices.push_back(s);
        return it->second;
    };
    for (const auto& [u, v] : edges) {
        int a = id(u), b = id(v);
        H.edges.push_back({a, b});
    }
    return H;
}

bool SimpleGraph::cubic() const {
    std::vector<int> deg(vertices.size(), 0);
    for (auto [u, v] : edges) ++deg[u], ++deg[v];
    return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 3; });
}

int cut_size(const SimpleGraph& H, const std::vector<char>& in_v1) {
    int k = 0;
    for (auto [u, v] : H.edges) k += in_v1[u] != in_v1[v];
    return k;
}

int max_cut_bruteforce(const SimpleGraph& H, std::vector<char>* best) {
    const int n = static_cast<int>(H.vertices.size());
    require(n <= 30, "max-cut enumeration limited to 30 vertices");
    if (n == 0) {
        if (best) best->clear();
        return 0;
    }
    int top = -1;
    std::vector<char> side(n), arg;
    for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
        side[0] = 1;
        for (int i = 1; i < n; ++i) side[i] = ((mask >> (i - 1)) & 1) ? 0 : 1;
        int k = cut_size(H, side);
        if (k > top) top = k, arg = side;
    }
    if (best) *best = arg;
    return top;
}

MaxCutInstance build_maxcut_instance(const SimpleGraph& H, bool require_cubic) {
    const int nh = static_cast<int>(H.vertices.size());
    {
        std::set<std::pair<int, int>> seen;
        std::vector<int> deg(nh, 0);
        for (auto [u, v] : H.edges) {
            require(u >= 0 && u < nh && v >= 0 && v < nh, "edge references an unknown vertex");
            require(u != v, "H has a self-loop at '" + H.vertices[u] + "'");
            require(seen.insert({std::min(u, v), std::max(u, v)}).second, "H has parallel edges");
            ++deg[u], ++deg[v];
        }
        for (int v = 0; v < nh; ++v) {
            if (require_cubic && deg[v] != 3)
                fail(ErrorKind::InvalidInput, "H is not cubic: vertex '" + H.vertices[v] + "' has degree " +
                                                  std::to_string(deg[v]));
            require(deg[v] > 0, "H vertex '" + H.vertices[v] + "' is isolated");
        }
    }

    // Raw DAG with per-edge weights, before the out-edge gadget.
    struct Raw {
        std::string name;
        std::vector<std::pair<int, int>> out;  // (target, weight)
        std::string pin;                       // source pin, empty otherwise
    };
    std::vector<Raw> raw;
    auto add = [&](std::string name, std::string pin = {}) {
        raw.push_back({std::move(name), {}, std::move(pin)});
        return static_cast<int>(raw.size()) - 1;
    };
    std::vector<int> hraw(nh);
    for (int v = 0; v < nh; ++v) hraw[v] = add("h." + H.vertices[v]);
    struct RawGadget {
        int a, b, c, d;
        std::vector<int> src;
    };
    std::vector<RawGadget> rg;
    for (size_t i = 0; i < H.edges.size(); ++i) {
        const std::string p = "e" + std::to_string(i) + ".";
        RawGadget g;
        static const std::array<std::pair<const char*, const char*>, 8> kSources = {
            {{"S1x", "S1"}, {"S2x", "S2"}, {"S1y", "S1"}, {"S2y", "S2"},
             {"S1a", "S1"}, {"S2b", "S2"}, {"S2c", "S2"}, {"S1d", "S1"}}};
        for (auto [nm, pin] : kSources) g.src.push_back(add(p + nm, pin));
        g.a = add(p + "a");
        g.b = add(p + "b");
        g.c = add(p + "c");
        g.d = add(p + "d");
        rg.push_back(std::move(g));
    }
    const int sink = add("wp");
    for (size_t i = 0; i < H.edges.size(); ++i) {
        const auto& g = rg[i];
        int x = hraw[H.edges[i].first], y = hraw[H.edges[i].second];
        const int into[8] = {x, x, y, y, g.a, g.b, g.c, g.d};
        for (int s = 0; s < 8; ++s) raw[g.src[s]].out.push_back({into[s], 4});
        raw[x].out.push_back({g.a, 1});
        raw[x].out.push_back({g.c, 1});
        raw[y].out.push_back({g.b, 1});
        raw[y].out.push_back({g.d, 1});
        raw[g.a].out.push_back({g.b, 1});
        raw[g.d].out.push_back({g.c, 1});
        for (int v : {g.a, g.b, g.c, g.d}) raw[v].out.push_back({sink, 4});
    }

    // Out-edge gadget: u -> u'_j (weight z) -> target (weight l_j).
    std::vector<DagNodeSpec> nodes;
    std::vector<DagEdgeSpec> edges;
    std::vector<std::string> sources, pins;
    std::vector<std::pair<std::string, std::string>> parent_of;
    for (const auto& r : raw) {
        int w = 1;
        if (r.out.size() == 1) w = r.out[0].second;
        if (r.out.size() > 1) {
            int lmax = 0;
            for (auto [t, l] : r.out) lmax = std::max(lmax, l);
            w = static_cast<int>(r.out.size()) * lmax + 1;
        }
        nodes.push_back({r.name, w});
        if (!r.pin.empty()) sources.push_back(r.name), pins.push_back(r.pin);
    }
    for (const auto& r : raw) {
        if (r.out.size() == 1) {
            edges.push_back({r.name, raw[r.out[0].first].name, std::nullopt, {}});
            continue;
        }
        for (size_t j = 0; j < r.out.size(); ++j) {
            std::string pr = r.name + "'" + std::to_string(j + 1);
            nodes.push_back({pr, r.out[j].second});
            edges.push_back({r.name, pr, std::nullopt, {}});
            edges.push_back({pr, raw[r.out[j].first].name, std::nullopt, {}});
            parent_of.push_back({pr, r.name});
        }
    }

    MaxCutInstance inst;
    inst.H = H;
    inst.net = NetworkGraph({"S1", "S2", "t"}, {{"S1", "S2", 1.0, 1.0}, {"S1", "t", 1.0, 1.0}, {"S2", "t", 1.0, 1.0}},
                            {"S1", "S2"}, "t");
    inst.dag = ComputationDag(nodes, edges, sources, raw[sink].name, pins);
    inst.S1 = inst.net.index("S1");
    inst.S2 = inst.net.index("S2");
    inst.t = inst.net.index("t");
    const auto& G = inst.dag;
    for (int v = 0; v < nh; ++v) inst.h_vertex.push_back(G.index(raw[hraw[v]].name));
    for (size_t i = 0; i < H.edges.size(); ++i) {
        EdgeGadget g;
        g.x = inst.h_vertex[H.edges[i].first];
        g.y = inst.h_vertex[H.edges[i].second];
        g.a = G.index(raw[rg[i].a].name);
        g.b = G.index(raw[rg[i].b].name);
        g.c = G.index(raw[rg[i].c].name);
        g.d = G.index(raw[rg[i].d].name);
        for (int s : rg[i].src) g.sources.push_back(G.index(raw[s].name));
        inst.gadgets.push_back(std::move(g));
    }
    inst.parent.assign(G.size(), -1);
    inst.primes.assign(G.size(), {});
    for (const auto& [pr, par] : parent_of) {
        int c = G.index(pr), p = G.index(par);
        inst.parent[c] = p;
        inst.primes[p].push_back(c);
    }
    require_valid_instance(inst.net, inst.dag);
    return inst;
}

std::vector<int> colocate_primes(const MaxCutInstance& inst, std::vector<int> assignment) {
    const auto pin = resolve_pins(inst.net, inst.dag);
    assignment.resize(inst.dag.size(), -1);
    for (int v = 0; v < inst.dag.size(); ++v)
        if (pin[v] >= 0) assignment[v] = pin[v];
    for (int v = 0; v < inst.dag.size(); ++v)
        if (inst.parent[v] >= 0 && assignment[v] < 0) assignment[v] = assignment[inst.parent[v]];
    return assignment;
}

GadgetTable gadget_cost_table() {
    SimpleGraph H;
    H.vertices = {"x", "y"};
    H.edges = {{0, 1}};
    auto inst = build_maxcut_instance(H, false);
    DistanceMatrix dist(inst.net, inst.net.weights());
    SteinerCache cache(inst.net, dist);
    const auto& g = inst.gadgets[0];
    GadgetTable T;
    for (auto& row : T.best) row.fill(kInf);
    std::vector<int> a(inst.dag.size(), -1);
    int s[6];
    for (int code = 0; code < 729; ++code) {
        int c = code;
        for (int i = 5; i >= 0; --i) s[i] = c % 3, c /= 3;
        std::fill(a.begin(), a.end(), -1);
        a[g.x] = s[0], a[g.y] = s[1], a[g.a] = s[2], a[g.b] = s[3], a[g.c] = s[4], a[g.d] = s[5];
        double cost = assignment_cost_c(inst.dag, colocate_primes(inst, a), cache);
        ++T.placements;
        if (cost < T.best[s[0]][s[1]]) {
            T.best[s[0]][s[1]] = cost;
            T.arg[s[0]][s[1]] = {s[2], s[3], s[4], s[5]};
        }
    }
    const int S1 = inst.S1, S2 = inst.S2, t = inst.t;
    T.split_min = std::min(T.best[S1][S2], T.best[S2][S1]);
    T.same_min = std::min(T.best[S1][S1], T.best[S2][S2]);
    T.mixed_min = kInf;
    for (int xs = 0; xs < 3; ++xs)
        for (int ys = 0; ys < 3; ++ys)
            if (xs == t || ys == t) T.mixed_min = std::min(T.mixed_min, T.best[xs][ys]);
    return T;
}

namespace {

std::vector<int> full_assignment(const MaxCutInstance& inst, const GadgetTable& T, const std::vector<int>& h_sites) {
    std::vector<int> a(inst.dag.size(), -1);
    for (size_t v = 0; v < h_sites.size(); ++v) a[inst.h_vertex[v]] = h_sites[v];
    for (const auto& g : inst.gadgets) {
        const auto& best = T.arg[a[g.x]][a[g.y]];
        a[g.a] = best[0], a[g.b] = best[1], a[g.c] = best[2], a[g.d] = best[3];
    }
    return colocate_primes(inst, a);
}

}  // namespace

MinCostResult maxcut_to_embedding(const MaxCutInstance& inst, const std::vector<char>& in_v1) {
    require(in_v1.size() == inst.H.vertices.size(), "cut does not match H");
    auto T = gadget_cost_table();
    std::vector<int> h_sites;
    for (char s : in_v1) h_sites.push_back(s ? inst.S1 : inst.S2);
    auto a = full_assignment(inst, T, h_sites);
    DistanceMatrix dist(inst.net, inst.net.weights());
    SteinerCache cache(inst.net, dist);
    MinCostResult r;
    r.emb = steiner_rembedding(inst.net, inst.dag, a, cache);
    r.cost = assignment_cost_c(inst.dag, a, cache);
    return r;
}

CanonicalSearch canonical_search_min(const MaxCutInstance& inst) {
    const int nh = static_cast<int>(inst.H.vertices.size());
    require(nh <= 12, "canonical search limited to 12 H vertices");
    auto T = gadget_cost_table();
    CanonicalSearch out;
    out.cost = kInf;
    std::vector<int> s(nh, 0);
    long total = 1;
    for (int i = 0; i < nh; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = nh - 1; i >= 0; --i) s[i] = static_cast<int>(c % 3), c /= 3;
        double cost = 0.0;
        for (auto [u, v] : inst.H.edges) cost += T.best[s[u]][s[v]];
        ++out.assignments;
        if (cost < out.cost) out.cost = cost, out.h_sites = s;
    }
    auto a = full_assignment(inst, T, out.h_sites);
    DistanceMatrix dist(inst.net, inst.net.weights());
    SteinerCache cache(inst.net, dist);
    out.emb = steiner_rembedding(inst.net, inst.dag, a, cache);
    double real = cost_C(inst.net, inst.dag, out.emb, inst.net.weights());
    if (std::abs(real - out.cost) > 1e-9)
        fail(ErrorKind::InvalidInput, "gadget costs do not add up on the full instance");
    out.cost = real;
    return out;
}

namespace {

// C-cost lower bound of a site-set placement: every function pays w times a Steiner forest
// connecting the sites of its consumers to its own sites.
class SiteCost {
public:
    SiteCost(const MaxCutInstance& inst) : inst_(inst), dist_(inst.net, inst.net.weights()) {}

    double term(const std::vector<std::vector<int>>& S, int v) {
        const auto& dag = inst_.dag;
        if (dag.out_edges(v).empty() || dag.weight(v) == 0) return 0.0;
        std::vector<int> terms;
        for (int g : dag.out_edges(v))
            for (int q : S[dag.edge(g).head])
                if (!std::binary_search(S[v].begin(), S[v].end(), q)) terms.push_back(q);
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        if (terms.empty()) return 0.0;
        auto key = std::make_pair(S[v], terms);
        auto it = memo_.find(key);
        if (it == memo_.end()) it = memo_.emplace(key, steiner_tree(inst_.net, dist_, S[v], terms).cost).first;
        return dag.weight(v) * it->second;
    }

    double total(const std::vector<std::vector<int>>& S) {
        double c = 0.0;
        for (int v = 0; v < inst_.dag.size(); ++v) c += term(S, v);
        return c;
    }

    // Cost change when the vertices in `group` take the site sets in `repl`.
    double delta(std::vector<std::vector<int>>& S, const std::vector<int>& group,
                 const std::vector<std::vector<int>>& repl) {
        std::vector<int> touched;
        for (int v : group) {
            touched.push_back(v);
            for (int g : inst_.dag.in_edges(v)) touched.push_back(inst_.dag.edge(g).tail);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        double before = 0.0, after = 0.0;
        for (int v : touched) before += term(S, v);
        std::vector<std::vector<int>> saved;
        for (size_t i = 0; i < group.size(); ++i) saved.push_back(S[group[i]]), S[group[i]] = repl[i];
        for (int v : touched) after += term(S, v);
        for (size_t i = 0; i < group.size(); ++i) S[group[i]] = saved[i];
        return after - before;
    }

    const DistanceMatrix& dist() const { return dist_; }

private:
    const MaxCutInstance& inst_;
    DistanceMatrix dist_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, double> memo_;
};

}  // namespace

CanonicalResult canonicalize_embedding(const MaxCutInstance& inst, const Embedding& emb) {
    const auto& net = inst.net;
    const auto& dag = inst.dag;
    auto rep = validate_embedding(net, dag, emb);
    if (!rep.ok()) fail(ErrorKind::InvalidInput, "embedding is not valid: " + rep.str());
    const auto pin = resolve_pins(net, dag);
    CanonicalResult out;
    out.original_cost = cost_C(net, dag, emb, net.weights());
    auto S = computation_sites(net, dag, emb);
    for (auto& s : S) std::sort(s.begin(), s.end());
    SiteCost sc(inst);
    double cur = sc.total(S);
    const double tol = 1e-9;
    const int n = net.n();

    auto unit_of = [&](int v) {
        int p = inst.parent[v] >= 0 ? inst.parent[v] : v;
        std::vector<int> u{p};
        u.insert(u.end(), inst.primes[p].begin(), inst.primes[p].end());
        return u;
    };
    auto apply = [&](const std::vector<int>& group, const std::vector<std::vector<int>>& repl, double d) {
        for (size_t i = 0; i < group.size(); ++i) S[group[i]] = repl[i];
        cur += d;
    };

    // Single placement per vertex.
    for (int v : dag.topo_order()) {
        if (pin[v] >= 0 || S[v].size() <= 1) continue;
        double best = kInf;
        int arg = -1;
        for (int s = 0; s < n; ++s) {
            double d = sc.delta(S, {v}, {{s}});
            if (d < best) best = d, arg = s;
        }
        if (best <= tol) {
            apply({v}, {{arg}}, best);
            continue;
        }
        auto unit = unit_of(v);
        double jbest = kInf;
        int jarg = -1;
        for (int s = 0; s < n; ++s) {
            double d = sc.delta(S, unit, std::vector<std::vector<int>>(unit.size(), {s}));
            if (d < jbest) jbest = d, jarg = s;
        }
        if (jbest <= tol) {
            apply(unit, std::vector<std::vector<int>>(unit.size(), {jarg}), jbest);
            continue;
        }
        out.complete = false;
        out.notes.push_back("no non-increasing single placement for '" + dag.id(v) + "'");
        apply({v}, {{arg}}, best);
    }

    // Intermediates of the out-edge gadget join their parent.
    for (int p = 0; p < dag.size(); ++p) {
        if (inst.primes[p].empty()) continue;
        const auto& pr = inst.primes[p];
        bool together = std::all_of(pr.begin(), pr.end(), [&](int c) { return S[c] == S[p]; });
        if (together) continue;
        auto unit = unit_of(p);
        std::vector<std::vector<int>> repl(pr.size(), S[p]);
        double best = sc.delta(S, pr, repl);
        std::vector<int> group = pr;
        for (int s = 0; s < n; ++s) {
            if (pin[p] >= 0 && s != pin[p]) continue;
            std::vector<std::vector<int>> r(unit.size(), {s});
            double d = sc.delta(S, unit, r);
            if (d < best - tol) best = d, group = unit, repl = r;
        }
        if (best <= tol)
            apply(group, repl, best);
        else
            out.notes.push_back("intermediates of '" + dag.id(p) + "' stay apart");
    }

    // Local improvement over whole units.
    for (int pass = 0; pass < 50; ++pass) {
        bool moved = false;
        for (int v : dag.topo_order()) {
            if (pin[v] >= 0 || inst.parent[v] >= 0) continue;
            auto unit = unit_of(v);
            bool together = std::all_of(unit.begin(), unit.end(), [&](int c) { return S[c] == S[v]; });
            if (!together) unit = {v};
            for (int s = 0; s < n; ++s) {
                if (S[v] == std::vector<int>{s}) continue;
                std::vector<std::vector<int>> r(unit.size(), {s});
                double d = sc.delta(S, unit, r);
                if (d < -tol) {
                    apply(unit, r, d);
                    moved = true;
                }
            }
        }
        if (!moved) break;
    }

    std::vector<int> assignment(dag.size());
    for (int v = 0; v < dag.size(); ++v) assignment[v] = S[v].front();
    assignment[dag.sink()] = net.sink();
    SteinerCache cache(net, sc.dist());
    out.emb = steiner_rembedding(net, dag, assignment, cache);
    out.cost = cost_C(net, dag, out.emb, net.weights());
    if (out.cost > out.original_cost + 1e-9) {
        out.complete = false;
        out.notes.push_back("canonical form costs more than the input");
    }
    return out;
}

MaxCutCertificate embedding_to_maxcut(const MaxCutInstance& inst, const Embedding& emb) {
    auto canon = canonicalize_embedding(inst, emb);
    MaxCutCertificate c;
    for (int hv : inst.h_vertex) c.in_v1.push_back(canon.emb.assignment[hv] != inst.S2);
    c.crossing = cut_size(inst.H, c.in_v1);
    c.cost = canon.original_cost;
    c.guaranteed = static_cast<int>(std::ceil(28.0 * static_cast<double>(inst.H.edges.size()) - c.cost - 1e-9));
    c.certified = c.crossing >= c.guaranteed;
    return c;
}

ClaimCheck certify_claimed_cost(const MaxCutInstance& inst, double cost) {
    ClaimCheck r;
    r.implied_cut = static_cast<int>(std::ceil(28.0 * static_cast<double>(inst.H.edges.size()) - cost - 1e-9));
    r.max_cut = max_cut_bruteforce(inst.H);
    r.contradiction = r.implied_cut > r.max_cut;
    return r;
}

}  // namespace calpkit
