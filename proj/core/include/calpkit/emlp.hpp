#pragma once

#include <cstdint>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"

namespace calpkit {

struct Transport {
    double cost = 0.0;
    std::vector<double> flow;  // n x n, row-major: flow[u * n + v]
};

// Optimal transport between two distributions under the metric d.
Transport em_distance(const std::vector<double>& a, const std::vector<double>& b, const DistanceMatrix& d);

struct FractionalPlacement {
    int n = 0;
    std::vector<std::vector<double>> x;  // per DAG vertex, distribution over network nodes
    std::vector<std::vector<double>> y;  // per DAG edge, n x n joint table y[u * n + v]
};

struct EarthmoverSolution {
    FractionalPlacement placement;
    double lp_value = 0.0;
};

// LP relaxation of the placement QIP: min sum_g w(g) sum_uv d(u,v) y_g(u,v) with marginal constraints.
EarthmoverSolution solve_earthmover_lp(const NetworkGraph& net, const ComputationDag& dag,
                                       const std::vector<double>& prices);

// Largest deviation from the placement invariants (row sums, marginals, pins).
double placement_residual(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p);

struct RoundedPlacement {
    std::vector<int> assignment;
    REmbedding emb;
    double cost = 0.0;  // CC cost under the rounding prices
    double delta = 0.0;
    std::vector<int> permutation;
};

// One CKR trial: delta uniform in [1, 2), a uniform permutation of V; each vertex goes to the
// first node u of the permutation with d_EM(x_a, u) <= delta * min_v d_EM(x_a, v).
RoundedPlacement ckr_round(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p,
                           const DistanceMatrix& d, std::uint64_t seed);

}  // namespace calpkit
