#pragma once

#include <map>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"

namespace calpkit {

// Budgets are limits on log2 of the number of enumerated assignments. CALPKIT_BUDGET
// overrides the defaults.
double cc_budget();
double c_budget();

struct MinCostResult {
    REmbedding emb;
    double cost = 0.0;
};

struct SteinerTree {
    double cost = 0.0;
    std::vector<int> edges;  // network edge indices
};

// Minimum-price tree joining every terminal to at least one of `roots` (roots are contracted).
// Dreyfus-Wagner over the shortest-path metric.
SteinerTree steiner_tree(const NetworkGraph& net, const DistanceMatrix& dist, const std::vector<int>& roots,
                         const std::vector<int>& terminals);

double steiner_cost(const NetworkGraph& net, const std::vector<double>& prices, int root,
                    const std::vector<int>& terminals);

// Unique path between two nodes of an edge set that forms a forest; empty if disconnected.
Path tree_path(const NetworkGraph& net, const std::vector<int>& edges, int from, int to);

class SteinerCache {
public:
    SteinerCache(const NetworkGraph& net, const DistanceMatrix& dist) : net_(net), dist_(dist) {}
    double cost(int root, std::vector<int> terminals);
    const SteinerTree& tree(int root, std::vector<int> terminals);

private:
    const NetworkGraph& net_;
    const DistanceMatrix& dist_;
    std::map<std::vector<int>, SteinerTree> memo_;
};

// Delivery cost of each function under an assignment: w(theta) times the Steiner tree joining
// its site with the sites of its successors.
double assignment_cost_c(const ComputationDag& dag, const std::vector<int>& assignment, SteinerCache& cache);

// Routes every function along its Steiner tree; C-cost equals assignment_cost_c.
REmbedding steiner_rembedding(const NetworkGraph& net, const ComputationDag& dag, const std::vector<int>& assignment,
                              SteinerCache& cache);

MinCostResult mincost_cc_exact(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices,
                               double budget_log2 = cc_budget());
MinCostResult mincost_c_exact(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& prices,
                              double budget_log2 = c_budget());

}  // namespace calpkit
