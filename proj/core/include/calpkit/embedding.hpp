#pragma once

#include <vector>

#include "calpkit/graphs.hpp"

namespace calpkit {

// Sequence of distinct network nodes; a single node is a zero-length path.
using Path = std::vector<int>;

// Map from DAG edges to non-empty path sets, indexed by DAG edge.
struct Embedding {
    std::vector<std::vector<Path>> paths;

    // Paths of each DAG edge sorted, so that equal embeddings compare equal.
    Embedding normalized() const;
    bool operator==(const Embedding& other) const { return normalized().paths == other.normalized().paths; }
};

// Single path per DAG edge together with the induced vertex assignment.
struct REmbedding {
    std::vector<Path> paths;
    std::vector<int> assignment;

    Embedding general() const;
};

ValidationReport validate_embedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);
ValidationReport validate_rembedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);
ValidationReport validate_rembedding(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb);

// Converts a single-path embedding; throws InvalidInput if some edge has several paths.
REmbedding to_rembedding(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);

// Network edges along a path, in order.
std::vector<int> path_edges(const NetworkGraph& net, const Path& path);

struct Usage {
    std::vector<std::vector<int>> function_edges;  // per DAG vertex: sorted edges with r^theta(e) = 1
    std::vector<double> total;                     // r_E(e)

    int r(int theta, int e) const;
};

Usage edge_usage(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);

double cost_C(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb,
              const std::vector<double>& prices);
double cost_C(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb,
              const std::vector<double>& prices);
double cost_CC(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& remb,
               const std::vector<double>& prices);

REmbedding assignment_to_rembedding(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<int>& assignment, const DistanceMatrix& dist);
REmbedding assignment_to_rembedding(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<int>& assignment);

// Nodes where each DAG vertex is computed: pins for sources and sink, path starts otherwise.
std::vector<std::vector<int>> computation_sites(const NetworkGraph& net, const ComputationDag& dag,
                                                const Embedding& emb);

// Builds an embedding from per-vertex site sets: each successor site is reached from the
// nearest site, sites nobody reads from are dropped (reverse topological sweep).
Embedding embedding_from_sites(const NetworkGraph& net, const ComputationDag& dag,
                               std::vector<std::vector<int>> sites, const DistanceMatrix& dist);

}  // namespace calpkit
