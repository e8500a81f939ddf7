#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"

namespace calpkit {

struct RateColumn {
    std::string name;
    Embedding emb;
    double flow = 0.0;
};

enum class RateStatus {
    Optimal,      // exact over the column family searched
    Approximate,  // within `ratio` of the R-CALP optimum
    Unbounded,    // some column uses no capacity
    RoundLimit,   // column generation stopped by the round guard
};

struct RateSolution {
    std::vector<RateColumn> columns;
    double R = 0.0;
    std::vector<double> duals;  // y(e) >= 0, per network edge
    RateStatus status = RateStatus::Optimal;
    double ratio = 1.0;         // guaranteed R >= opt / ratio
    double upper_bound = 0.0;   // certified bound on the R-CALP optimum (kInf if none)
    int rounds = 0;
    std::string pricing;
};

const char* to_string(RateStatus s);

// r_E(e) for every network edge.
std::vector<double> column_usage(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);

// Exact LP optimum over the given columns; every column is validated.
RateSolution solve_packing_lp(const NetworkGraph& net, const ComputationDag& dag, const std::vector<RateColumn>& columns);

enum class Pricing { None, Oracle, Tree, Layered, SpanTree, EmLp };

const char* to_string(Pricing p);
std::optional<Pricing> parse_pricing(const std::string& s);

struct PricingOptions {
    Pricing strategy = Pricing::Oracle;
    int layered_max_width = 4;
    std::uint64_t seed = 1;
    int rounding_trials = 16;
};

struct PricedColumn {
    REmbedding emb;
    double cost = 0.0;         // C-cost under the prices
    double lower_bound = 0.0;  // certified lower bound on min C over R-embeddings
    double ratio = 1.0;        // a-priori approximation ratio of the strategy
};

PricedColumn price_column(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& duals,
                          const PricingOptions& opt);

// Master LP + pricing until no column has C-cost below one. `initial` columns are kept.
RateSolution solve_rcalp_colgen(const NetworkGraph& net, const ComputationDag& dag, const PricingOptions& opt,
                                const std::vector<RateColumn>& initial = {});

// Garg-Koenemann packing with the same pricing oracle; the result is scaled to feasibility.
RateSolution solve_rcalp_mwu(const NetworkGraph& net, const ComputationDag& dag, double epsilon,
                             const PricingOptions& opt);

// Largest relative capacity violation max_e (sum r_E(e) x(E) - c(e)) / max(1, c(e)); <= 0 when feasible.
double capacity_violation(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol);

}  // namespace calpkit
