#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace calpkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Violation {
    std::string property;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
    bool has(std::string_view property) const;
    void add(std::string property, std::string detail);
    void merge(const ValidationReport& other);
    std::string str() const;
};

// Network N = (V, E): undirected, capacities c(e) and prices x(e).
struct EdgeSpec {
    std::string u;
    std::string v;
    double capacity = 0.0;
    double weight = 1.0;
};

struct NetEdge {
    int u;
    int v;
    double capacity;
    double weight;
};

class NetworkGraph {
public:
    struct Adj {
        int to;
        int edge;
    };

    NetworkGraph() = default;
    NetworkGraph(std::vector<std::string> nodes, const std::vector<EdgeSpec>& edges,
                 const std::vector<std::string>& sources, const std::string& sink);

    int n() const { return static_cast<int>(ids_.size()); }
    int m() const { return static_cast<int>(edges_.size()); }

    const std::string& id(int v) const { return ids_.at(v); }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<int> find(const std::string& id) const;
    int index(const std::string& id) const;

    const std::vector<NetEdge>& edges() const { return edges_; }
    const NetEdge& edge(int e) const { return edges_.at(e); }
    int edge_between(int u, int v) const;
    int other(int e, int u) const { return edges_[e].u == u ? edges_[e].v : edges_[e].u; }
    const std::vector<Adj>& adj(int u) const { return adj_.at(u); }

    const std::vector<int>& sources() const { return sources_; }
    int sink() const { return sink_; }

    std::vector<double> weights() const;
    std::vector<double> capacities() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<NetEdge> edges_;
    std::vector<std::vector<Adj>> adj_;
    std::unordered_map<std::int64_t, int> edge_index_;
    std::vector<int> sources_;
    int sink_ = -1;
};

ValidationReport validate_network(const NetworkGraph& net);

// Computation DAG G = (Omega, Gamma). Vertex v carries function theta_v with weight w(theta_v).
struct DagNodeSpec {
    std::string id;
    int weight = 1;
};

struct DagEdgeSpec {
    std::string u;
    std::string v;
    std::optional<double> weight;
    std::string id;  // defaults to "u->v"
};

class ComputationDag {
public:
    struct Edge {
        int tail;
        int head;
        double weight;
        bool explicit_weight;
        std::string id;
    };

    ComputationDag() = default;
    // source_pins: network node id per source; empty means positional pairing with the
    // network's source list.
    ComputationDag(const std::vector<DagNodeSpec>& nodes, const std::vector<DagEdgeSpec>& edges,
                   const std::vector<std::string>& sources, const std::string& sink,
                   std::vector<std::string> source_pins = {});

    int size() const { return static_cast<int>(ids_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::string& id(int v) const { return ids_.at(v); }
    std::optional<int> find(const std::string& id) const;
    int index(const std::string& id) const;
    int weight(int v) const { return weights_.at(v); }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int g) const { return edges_.at(g); }
    std::optional<int> find_edge(const std::string& id) const;
    int edge_index(const std::string& id) const;
    int edge_between(int tail, int head) const;

    const std::vector<int>& out_edges(int v) const { return out_.at(v); }
    const std::vector<int>& in_edges(int v) const { return in_.at(v); }

    const std::vector<int>& sources() const { return sources_; }
    int sink() const { return sink_; }
    bool is_source(int v) const { return source_pos_.at(v) >= 0; }
    int source_position(int v) const { return source_pos_.at(v); }
    const std::vector<std::string>& source_pins() const { return pins_; }

    bool acyclic() const { return acyclic_; }
    // Kahn order with smallest index first; requires acyclic().
    const std::vector<int>& topo_order() const;
    int max_out_degree() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> weights_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, int> edge_ids_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> sources_;
    std::vector<int> source_pos_;
    int sink_ = -1;
    std::vector<std::string> pins_;
    bool acyclic_ = false;
    std::vector<int> topo_;
};

ValidationReport validate_computation_dag(const ComputationDag& dag);

// Network node per DAG vertex: pins for sources and the sink, -1 for free vertices.
std::vector<int> resolve_pins(const NetworkGraph& net, const ComputationDag& dag);

// Throws InvalidInput with the report text when the DAG or pairing is unusable.
void require_valid_instance(const NetworkGraph& net, const ComputationDag& dag);

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(const NetworkGraph& net, const std::vector<double>& prices);

    int n() const { return n_; }
    double operator()(int u, int v) const { return d_[static_cast<size_t>(u) * n_ + v]; }
    bool reachable(int u, int v) const { return (*this)(u, v) < kInf; }
    int hops(int u, int v) const { return hops_[static_cast<size_t>(u) * n_ + v]; }
    // Lexicographically smallest vertex sequence among shortest (then fewest-hop) paths.
    std::vector<int> path(int u, int v) const;
    const std::vector<double>& prices() const { return prices_; }

private:
    int n_ = 0;
    std::vector<double> d_;
    std::vector<int> hops_;
    std::vector<std::vector<NetworkGraph::Adj>> adj_;
    std::vector<double> prices_;
};

DistanceMatrix all_pairs_shortest(const NetworkGraph& net);
DistanceMatrix all_pairs_shortest(const NetworkGraph& net, const std::vector<double>& prices);

struct SpanningTreeInfo {
    std::vector<char> in_tree;                     // per DAG edge
    std::vector<int> cycle_count;                  // per DAG edge; 0 for non-tree edges
    std::vector<std::vector<int>> cycle_edges;     // per non-tree edge: tree edges on its cycle
    int F = 0;
    // max over tree edges e of sum of w(g)/w(e) over non-tree g whose cycle uses e
    double weighted_load = 0.0;
};

SpanningTreeInfo spanning_tree_cycle_load(const ComputationDag& dag,
                                          const std::optional<std::vector<int>>& tree = std::nullopt);

struct Layering {
    bool layered = false;
    std::vector<int> layer_of;
    std::vector<std::vector<int>> layers;
    int width = 0;
    int bad_edge = -1;
};

// Longest-path layering from the sources.
Layering layer_dag(const ComputationDag& dag);

// Every non-sink vertex has out-degree one.
bool is_in_tree(const ComputationDag& dag);

}  // namespace calpkit
