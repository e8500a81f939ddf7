#pragma once

#include <string>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"

namespace calpkit {

struct CutArc {
    int from;
    int to;
    double weight;  // kInf allowed
};

struct CutInstance {
    int num_vertices = 0;
    std::vector<std::string> names;
    std::vector<CutArc> arcs;
    int j1 = -1;
    int j2 = -1;
};

// side[v]: 1 for J1, 2 for J2, 0 for the rest (J3).
struct CutSolution {
    std::vector<char> side;
    double weight = 0.0;
};

// 2-Cut instance of a two-node network together with the vertex gadget map.
struct TwoNodeCut {
    CutInstance inst;
    std::vector<int> in_vertex;   // per DAG vertex (the sink has only this one)
    std::vector<int> out_vertex;  // per DAG vertex, -1 for the sink
    int n1 = -1;                  // network node that is not the sink
    int n2 = -1;                  // the sink node
};

TwoNodeCut build_2cut_instance(const NetworkGraph& net2, const ComputationDag& dag);
TwoNodeCut build_2cut_instance(const NetworkGraph& net2, const ComputationDag& dag, const std::vector<double>& prices);

// Total weight of arcs leaving the set marked in `in_set`.
double delta(const CutInstance& inst, const std::vector<char>& in_set);

// delta(A + j1) plus the minimum cut separating j2 from A + j1.
double h_value(const CutInstance& inst, const std::vector<char>& A);

double cut_weight(const CutInstance& inst, const CutSolution& sol);

// Exhaustive minimization of h over subsets of the non-terminal vertices.
CutSolution solve_2cut(const CutInstance& inst, int max_vertices = 22);

struct TwoNodeEmbedding {
    Embedding emb;
    std::vector<std::vector<int>> sites;
    double cost = 0.0;
};

TwoNodeEmbedding cut_to_embedding(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                                  const CutSolution& sol, const std::vector<double>& prices);
TwoNodeEmbedding cut_to_embedding(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                                  const CutSolution& sol);

CutSolution embedding_to_cut(const NetworkGraph& net2, const ComputationDag& dag, const TwoNodeCut& tc,
                             const Embedding& emb);

// Exact minimum C-cost over general embeddings of a two-node network.
TwoNodeEmbedding mincost_twonode(const NetworkGraph& net2, const ComputationDag& dag,
                                 const std::vector<double>& prices);

}  // namespace calpkit
