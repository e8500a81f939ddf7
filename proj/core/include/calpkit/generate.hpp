#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "calpkit/graphs.hpp"

namespace calpkit {

struct Instance {
    std::string name;
    NetworkGraph net;
    ComputationDag dag;
    std::optional<std::vector<int>> tree;  // DAG edges of a preferred spanning tree
};

// Portable helpers on top of mt19937_64 (the standard distributions differ between libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::uint64_t next() { return g_(); }
    int uniform(int lo, int hi);  // inclusive
    double unit();                // [0, 1)
    bool coin(double p) { return unit() < p; }

private:
    std::mt19937_64 g_;
};

enum class DagShape { Tree, Layered, General };

struct GenOptions {
    int nodes = 4;          // network size
    int extra_edges = 2;    // edges beyond a random spanning tree
    int dag_vertices = 6;   // including sources and sink
    int sources = 2;
    int max_weight = 3;
    int max_price = 3;
    int capacity_den = 4;   // capacities are multiples of 1/capacity_den
    int max_capacity = 8;   // in units of 1/capacity_den
    int layer_width = 3;
    DagShape shape = DagShape::General;
};

NetworkGraph random_network(Rng& rng, const GenOptions& opt);
// Sources get random pins among the network sources; the sink maps to the network sink.
ComputationDag random_dag(Rng& rng, const NetworkGraph& net, const GenOptions& opt);
Instance random_instance(std::uint64_t seed, const GenOptions& opt);

// Network with two nodes "n1", "n2" (sink n2) and one edge.
NetworkGraph two_node_network(double capacity = 1.0, double price = 1.0);

}  // namespace calpkit
