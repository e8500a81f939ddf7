#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"
#include "calpkit/oracle.hpp"

namespace calpkit {

// Undirected simple graph H for the max-cut reduction.
struct SimpleGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<int, int>> edges;

    static SimpleGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges);
    bool cubic() const;
};

int cut_size(const SimpleGraph& H, const std::vector<char>& in_v1);
// Exhaustive; the best partition has vertex 0 in V1.
int max_cut_bruteforce(const SimpleGraph& H, std::vector<char>* best = nullptr);

struct EdgeGadget {
    int x = -1, y = -1;          // DAG vertices of the H endpoints
    int a = -1, b = -1, c = -1, d = -1;
    std::vector<int> sources;    // the eight weight-4 sources
};

struct MaxCutInstance {
    SimpleGraph H;
    NetworkGraph net;  // K3 on S1, S2, t with unit prices
    ComputationDag dag;
    int S1 = 0, S2 = 1, t = 2;
    std::vector<int> h_vertex;           // DAG vertex per H vertex
    std::vector<EdgeGadget> gadgets;     // per H edge
    std::vector<int> parent;             // per DAG vertex: the vertex it was split from, or -1
    std::vector<std::vector<int>> primes;  // per DAG vertex: intermediates of its out-edge gadget
};

// One diamond gadget per H edge, multi-output vertices expanded with weight h * max(l) + 1.
MaxCutInstance build_maxcut_instance(const SimpleGraph& H, bool require_cubic = true);

// Assignment with intermediates at their parents; missing entries (-1) are filled that way.
std::vector<int> colocate_primes(const MaxCutInstance& inst, std::vector<int> assignment);

// H vertices in V1 go to S1, the rest to S2; gadget interiors take their cheapest placement.
MinCostResult maxcut_to_embedding(const MaxCutInstance& inst, const std::vector<char>& in_v1);

struct CanonicalResult {
    REmbedding emb;
    double cost = 0.0;           // C-cost of emb
    double original_cost = 0.0;  // C-cost of the input
    bool complete = true;        // false if some step had to raise the cost
    std::vector<std::string> notes;
};

// Single placement per vertex and intermediates co-located with their parents, never raising cost
// unless reported in `complete`.
CanonicalResult canonicalize_embedding(const MaxCutInstance& inst, const Embedding& emb);

struct MaxCutCertificate {
    std::vector<char> in_v1;
    int crossing = 0;
    double cost = 0.0;     // cost of the input embedding
    int guaranteed = 0;    // ceil(28 |E_H| - cost)
    bool certified = false;  // crossing >= guaranteed
};

// H vertices placed at S1 or t go to V1, at S2 to V2.
MaxCutCertificate embedding_to_maxcut(const MaxCutInstance& inst, const Embedding& emb);

struct ClaimCheck {
    int implied_cut = 0;
    int max_cut = 0;
    bool contradiction = false;  // no embedding of that cost can exist
};

ClaimCheck certify_claimed_cost(const MaxCutInstance& inst, double cost);

struct GadgetTable {
    // best[xs][ys]: cheapest gadget cost with x at node xs and y at ys (0 = S1, 1 = S2, 2 = t)
    std::array<std::array<double, 3>, 3> best{};
    std::array<std::array<std::array<int, 4>, 3>, 3> arg{};  // sites of a, b, c, d
    double split_min = 0.0;  // x, y on different sources
    double same_min = 0.0;   // x, y on the same source
    double mixed_min = 0.0;  // x or y at t
    int placements = 0;
};

// Exhaustive over all 3^6 placements of x, y, a, b, c, d with intermediates at their parents.
GadgetTable gadget_cost_table();

struct CanonicalSearch {
    double cost = 0.0;
    std::vector<int> h_sites;  // network node per H vertex
    REmbedding emb;
    long assignments = 0;
};

// Minimum over all H placements of the per-gadget optima; the winner is re-costed on the full DAG.
CanonicalSearch canonical_search_min(const MaxCutInstance& inst);

}  // namespace calpkit
