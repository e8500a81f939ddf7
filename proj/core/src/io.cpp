#include "calpkit/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "calpkit/error.hpp"

namespace calpkit::io {

json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double to_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "Infinity") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(ErrorKind::InvalidInput, "expected a number, got " + j.dump());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
    }
}

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string str(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(ErrorKind::InvalidInput, "expected an identifier, got " + j.dump());
}

std::vector<std::string> str_list(const json& j) {
    if (!j.is_array()) fail(ErrorKind::InvalidInput, "expected a list, got " + j.dump());
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(str(e));
    return out;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("malformed JSON input: ") + e.what());
    }
}

}  // namespace

NetworkGraph network_from_json(const json& j) {
    return guarded([&] {
        std::vector<EdgeSpec> edges;
        for (const auto& e : field(j, "edges")) {
            EdgeSpec s;
            s.u = str(field(e, "u"));
            s.v = str(field(e, "v"));
            s.capacity = e.contains("capacity") ? to_number(e["capacity"]) : 1.0;
            s.weight = e.contains("weight") ? to_number(e["weight"]) : 1.0;
            edges.push_back(std::move(s));
        }
        return NetworkGraph(str_list(field(j, "nodes")), edges, str_list(field(j, "sources")), str(field(j, "sink")));
    });
}

json to_json(const NetworkGraph& net) {
    json edges = json::array();
    for (const auto& e : net.edges())
        edges.push_back({{"u", net.id(e.u)}, {"v", net.id(e.v)}, {"capacity", number(e.capacity)},
                         {"weight", number(e.weight)}});
    json sources = json::array();
    for (int s : net.sources()) sources.push_back(net.id(s));
    return {{"nodes", net.ids()}, {"edges", edges}, {"sources", sources}, {"sink", net.id(net.sink())}};
}

ComputationDag dag_from_json(const json& j) {
    return guarded([&] {
        std::vector<DagNodeSpec> nodes;
        for (const auto& n : field(j, "nodes")) {
            if (n.is_string()) {
                nodes.push_back({n.get<std::string>(), 1});
                continue;
            }
            DagNodeSpec s;
            s.id = str(field(n, "id"));
            if (n.contains("weight")) {
                double w = to_number(n["weight"]);
                if (w != std::floor(w) || w < 0 || w > 1e9)
                    fail(ErrorKind::InvalidInput, "function weight of '" + s.id + "' must be a non-negative integer");
                s.weight = static_cast<int>(w);
            }
            nodes.push_back(std::move(s));
        }
        std::vector<DagEdgeSpec> edges;
        for (const auto& e : field(j, "edges")) {
            DagEdgeSpec s;
            s.u = str(field(e, "u"));
            s.v = str(field(e, "v"));
            if (e.contains("weight")) s.weight = to_number(e["weight"]);
            if (e.contains("id")) s.id = str(e["id"]);
            edges.push_back(std::move(s));
        }
        std::vector<std::string> pins;
        if (j.contains("source_pins")) pins = str_list(j["source_pins"]);
        return ComputationDag(nodes, edges, str_list(field(j, "sources")), str(field(j, "sink")), pins);
    });
}

json to_json(const ComputationDag& dag) {
    json nodes = json::array();
    for (int v = 0; v < dag.size(); ++v) nodes.push_back({{"id", dag.id(v)}, {"weight", dag.weight(v)}});
    json edges = json::array();
    for (const auto& e : dag.edges()) {
        json je = {{"u", dag.id(e.tail)}, {"v", dag.id(e.head)}};
        if (e.explicit_weight) je["weight"] = number(e.weight);
        if (e.id != dag.id(e.tail) + "->" + dag.id(e.head)) je["id"] = e.id;
        edges.push_back(std::move(je));
    }
    json sources = json::array();
    for (int s : dag.sources()) sources.push_back(dag.id(s));
    json j = {{"nodes", nodes}, {"edges", edges}, {"sources", sources}, {"sink", dag.id(dag.sink())}};
    if (!dag.source_pins().empty()) j["source_pins"] = dag.source_pins();
    return j;
}

Instance instance_from_json(const json& j, std::string name) {
    Instance I;
    I.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::move(name);
    I.net = network_from_json(field(j, "network"));
    I.dag = dag_from_json(field(j, "dag"));
    if (j.contains("spanning_tree")) {
        std::vector<int> tree;
        guarded([&] {
            for (const auto& g : j["spanning_tree"]) tree.push_back(I.dag.edge_index(g.get<std::string>()));
        });
        I.tree = std::move(tree);
    }
    return I;
}

Instance read_instance(const std::string& path) {
    auto stem = path.substr(path.find_last_of('/') + 1);
    stem = stem.substr(0, stem.find('.'));
    return instance_from_json(read_json_file(path), stem);
}

json to_json(const Instance& inst) {
    json j = {{"network", to_json(inst.net)}, {"dag", to_json(inst.dag)}};
    if (!inst.name.empty()) j["name"] = inst.name;
    if (inst.tree) {
        json t = json::array();
        for (int g : *inst.tree) t.push_back(inst.dag.edge(g).id);
        j["spanning_tree"] = t;
    }
    return j;
}

Embedding embedding_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j) {
    return guarded([&] {
        if (!j.is_object()) fail(ErrorKind::InvalidInput, "embedding must be an object keyed by DAG edge id");
        // R-embeddings are written as {"assignment": ..., "paths": ...}.
        const json& edges = j.contains("paths") && j["paths"].is_object() && !dag.find_edge("paths") ? j["paths"] : j;
        Embedding emb;
        emb.paths.assign(dag.num_edges(), {});
        for (const auto& [key, val] : edges.items()) {
            auto g = dag.find_edge(key);
            if (!g) fail(ErrorKind::InvalidInput, "embedding names unknown DAG edge '" + key + "'");
            // A single path may be given without the outer list.
            bool single = val.is_array() && !val.empty() && !val[0].is_array();
            for (const auto& p : single ? json::array({val}) : val) {
                Path path;
                for (const auto& v : p) {
                    auto u = net.find(str(v));
                    if (!u) fail(ErrorKind::InvalidInput, "embedding names unknown network node '" + str(v) + "'");
                    path.push_back(*u);
                }
                emb.paths[*g].push_back(std::move(path));
            }
        }
        return emb;
    });
}

json to_json(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    json j = json::object();
    for (int g = 0; g < dag.num_edges() && g < static_cast<int>(emb.paths.size()); ++g) {
        json paths = json::array();
        for (const auto& p : emb.paths[g]) {
            json jp = json::array();
            for (int v : p) jp.push_back(net.id(v));
            paths.push_back(std::move(jp));
        }
        j[dag.edge(g).id] = std::move(paths);
    }
    return j;
}

json to_json(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& emb) {
    json a = json::object();
    for (int v = 0; v < dag.size() && v < static_cast<int>(emb.assignment.size()); ++v)
        if (emb.assignment[v] >= 0) a[dag.id(v)] = net.id(emb.assignment[v]);
    return {{"paths", to_json(net, dag, emb.general())}, {"assignment", a}};
}

std::vector<int> assignment_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j) {
    std::vector<int> a(dag.size(), -1);
    for (const auto& [key, val] : j.items()) a[dag.index(key)] = net.index(str(val));
    return a;
}

std::vector<RateColumn> columns_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j) {
    std::vector<RateColumn> cols;
    auto one = [&](const json& c, const std::string& fallback) {
        RateColumn rc;
        if (c.is_object() && c.contains("embedding")) {
            rc.name = c.contains("name") ? str(c["name"]) : fallback;
            const auto& e = c["embedding"];
            rc.emb = embedding_from_json(net, dag, e.is_object() && e.contains("paths") ? e["paths"] : e);
            if (c.contains("flow")) rc.flow = to_number(c["flow"]);
        } else {
            rc.name = fallback;
            rc.emb = embedding_from_json(net, dag, c);
        }
        cols.push_back(std::move(rc));
    };
    const json& list = j.is_object() && j.contains("columns") ? j["columns"] : j;
    if (list.is_array()) {
        for (size_t i = 0; i < list.size(); ++i) one(list[i], "col" + std::to_string(i + 1));
    } else if (list.is_object()) {
        for (const auto& [k, v] : list.items()) one(v, k);
    } else {
        fail(ErrorKind::InvalidInput, "columns must be a list or an object");
    }
    return cols;
}

json columns_to_json(const NetworkGraph& net, const ComputationDag& dag, const std::vector<RateColumn>& cols) {
    json arr = json::array();
    for (const auto& c : cols) arr.push_back({{"name", c.name}, {"embedding", to_json(net, dag, c.emb)}});
    return {{"columns", arr}};
}

json to_json(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol) {
    json cols = json::array();
    for (const auto& c : sol.columns)
        cols.push_back({{"name", c.name}, {"flow", number(c.flow)}, {"embedding", to_json(net, dag, c.emb)}});
    json duals = json::object();
    for (int e = 0; e < net.m() && e < static_cast<int>(sol.duals.size()); ++e)
        duals[net.id(net.edge(e).u) + "-" + net.id(net.edge(e).v)] = number(sol.duals[e]);
    return {{"R", number(sol.R)},
            {"status", to_string(sol.status)},
            {"ratio", number(sol.ratio)},
            {"upper_bound", number(sol.upper_bound)},
            {"rounds", sol.rounds},
            {"pricing", sol.pricing},
            {"columns", cols},
            {"duals", duals}};
}

RateSolution rate_solution_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j) {
    RateSolution sol;
    sol.columns = columns_from_json(net, dag, j);
    double total = 0.0;
    for (const auto& c : sol.columns) total += c.flow;
    sol.R = j.is_object() && j.contains("R") ? to_number(j["R"]) : total;
    sol.status = RateStatus::Approximate;
    sol.ratio = j.is_object() && j.contains("ratio") ? to_number(j["ratio"]) : 1.0;
    sol.upper_bound = j.is_object() && j.contains("upper_bound") ? to_number(j["upper_bound"]) : kInf;
    sol.pricing = j.is_object() && j.contains("pricing") ? str(j["pricing"]) : "none";
    return sol;
}

json to_json(const ValidationReport& rep) {
    json v = json::array();
    for (const auto& x : rep.violations) v.push_back({{"property", x.property}, {"detail", x.detail}});
    return {{"valid", rep.ok()}, {"violations", v}, {"warnings", rep.warnings}};
}

json to_json(const CutInstance& inst) {
    json arcs = json::array();
    for (const auto& a : inst.arcs)
        arcs.push_back({{"from", inst.names[a.from]}, {"to", inst.names[a.to]}, {"weight", number(a.weight)}});
    return {{"vertices", inst.names}, {"arcs", arcs}, {"j1", inst.names[inst.j1]}, {"j2", inst.names[inst.j2]}};
}

json to_json(const CutInstance& inst, const CutSolution& sol) {
    json J1 = json::array(), J2 = json::array(), J3 = json::array();
    for (int v = 0; v < inst.num_vertices; ++v) (sol.side[v] == 1 ? J1 : sol.side[v] == 2 ? J2 : J3).push_back(inst.names[v]);
    return {{"J1", J1}, {"J2", J2}, {"J3", J3}, {"weight", number(sol.weight)}};
}

json to_json(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p) {
    json x = json::object();
    for (int a = 0; a < dag.size(); ++a) {
        json row = json::object();
        for (int u = 0; u < p.n; ++u)
            if (p.x[a][u] != 0.0) row[net.id(u)] = p.x[a][u];
        x[dag.id(a)] = row;
    }
    return {{"nodes", net.ids()}, {"x", x}};
}

void write_trace(std::ostream& os, const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& tr) {
    os << json{{"type", "scheme"}, {"K", tr.K}}.dump() << '\n';
    for (const auto& ev : tr.events) {
        json j;
        if (ev.kind == ScheduleEvent::Compute)
            j = {{"type", "compute"}, {"node", net.id(ev.node)}, {"theta", dag.id(ev.theta)}, {"k", ev.k}};
        else
            j = {{"type", "communicate"},
                 {"edge", {net.id(ev.from), net.id(ev.to)}},
                 {"theta", dag.id(ev.theta)},
                 {"k", ev.k}};
        os << j.dump() << '\n';
    }
}

ScheduleTrace read_trace(std::istream& is, const NetworkGraph& net, const ComputationDag& dag) {
    ScheduleTrace tr;
    bool have_k = false;
    std::int64_t kmax = 0;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(ErrorKind::InvalidInput, "trace line " + std::to_string(lineno) + " is not JSON: " + e.what());
        }
        guarded([&] {
            auto type = str(field(j, "type"));
            if (type == "scheme") {
                tr.K = field(j, "K").get<std::int64_t>();
                have_k = true;
                return 0;
            }
            ScheduleEvent ev;
            auto theta = dag.find(str(field(j, "theta")));
            if (!theta) fail(ErrorKind::InvalidInput, "trace line " + std::to_string(lineno) + ": unknown function");
            ev.theta = *theta;
            ev.k = field(j, "k").get<std::int64_t>();
            auto node = [&](const json& v) {
                auto u = net.find(str(v));
                if (!u) fail(ErrorKind::InvalidInput, "trace line " + std::to_string(lineno) + ": unknown node");
                return *u;
            };
            if (type == "compute") {
                ev.kind = ScheduleEvent::Compute;
                ev.node = node(field(j, "node"));
            } else if (type == "communicate") {
                ev.kind = ScheduleEvent::Communicate;
                const auto& e = field(j, "edge");
                if (!e.is_array() || e.size() != 2) fail(ErrorKind::InvalidInput, "edge must be a [from, to] pair");
                ev.from = node(e[0]);
                ev.to = node(e[1]);
            } else {
                fail(ErrorKind::InvalidInput, "trace line " + std::to_string(lineno) + ": unknown event type '" + type + "'");
            }
            kmax = std::max(kmax, ev.k);
            tr.events.push_back(ev);
            return 0;
        });
    }
    if (!have_k) tr.K = kmax;
    return tr;
}

SimpleGraph graph_from_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> edges;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            fail(ErrorKind::InvalidInput, std::string("graph is not valid JSON: ") + e.what());
        }
        guarded([&] {
            const json& list = j.is_object() ? field(j, "edges") : j;
            for (const auto& e : list) {
                if (!e.is_array() || e.size() != 2) fail(ErrorKind::InvalidInput, "edge must be a [u, v] pair");
                edges.push_back({str(e[0]), str(e[1])});
            }
            return 0;
        });
        return SimpleGraph::from_edges(edges);
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string u, v, extra;
        if (!(ls >> u)) continue;
        if (!(ls >> v) || (ls >> extra)) fail(ErrorKind::InvalidInput, "graph line must hold exactly two vertices: " + line);
        edges.push_back({u, v});
    }
    return SimpleGraph::from_edges(edges);
}

}  // namespace calpkit::io
