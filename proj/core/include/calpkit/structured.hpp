#pragma once

#include <optional>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"
#include "calpkit/oracle.hpp"

namespace calpkit {

// Exact MinCost(CC) for in-trees (every non-sink vertex has out-degree one).
MinCostResult tree_dp_mincost_cc(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices);

// Exact MinCost(CC) for layered DAGs; state is the joint placement of one layer.
MinCostResult layered_dp_mincost_cc(const NetworkGraph& net, const ComputationDag& dag,
                                    const std::vector<double>& prices, int max_width = 4);

// Approximation ratio of a CC-exact solver used for R-CALP pricing.
int layered_rcalp_ratio(const ComputationDag& dag);

struct SpanningTreeResult {
    REmbedding emb;
    double cost = 0.0;        // CC(X)
    double tree_cost = 0.0;   // CC(T), a lower bound on the CC optimum
    int F = 0;
    double weighted_load = 0.0;
    double bound = 0.0;           // (1 + F) * CC(T)
    double weighted_bound = 0.0;  // (1 + weighted load) * CC(T); equals bound for uniform weights
};

SpanningTreeResult spanning_tree_approx_mincost_cc(const NetworkGraph& net, const ComputationDag& dag,
                                                   const std::vector<double>& prices,
                                                   const std::optional<std::vector<int>>& tree = std::nullopt);

}  // namespace calpkit
