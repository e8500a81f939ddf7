#pragma once

#include <vector>

namespace calpkit {

// Highest-label push-relabel on a directed graph with finite capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n);

    int add_arc(int from, int to, double cap);
    double run(int s, int t);
    // Vertices reachable from s in the residual graph after run().
    std::vector<char> source_side(int s) const;
    double flow_on(int arc) const;

private:
    struct Arc {
        int to;
        int rev;
        double cap;
        double initial;
    };
    int n_;
    std::vector<std::vector<Arc>> g_;
    std::vector<std::pair<int, int>> handles_;
};

}  // namespace calpkit
