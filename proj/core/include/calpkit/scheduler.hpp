#pragma once

#include <cstdint>
#include <vector>

#include "calpkit/calp.hpp"
#include "calpkit/embedding.hpp"
#include "calpkit/graphs.hpp"

namespace calpkit {

struct RationalFlows {
    std::vector<std::int64_t> num;
    std::vector<std::int64_t> den;
    std::vector<double> x;  // num / den
    std::int64_t d = 1;     // lcm of the denominators
    std::int64_t K = 0;     // d * sum x
};

// Rational flows with sum x' >= sum x - eps. Values within 1e-9 of a fraction with denominator
// <= 10^6 snap to it; the rest are floored onto the grid 1/ceil(m/eps).
RationalFlows rationalize_flows(const std::vector<double>& flows, double eps);
RationalFlows rationalize_flows(const RateSolution& sol, double eps);

// Computation at `node`, or communication over the network edge from -> to. `theta` is a DAG vertex.
struct ScheduleEvent {
    enum Kind : std::uint8_t { Compute, Communicate };
    Kind kind = Compute;
    int node = -1;
    int from = -1;
    int to = -1;
    int theta = -1;
    std::int64_t k = 0;  // symbol index, 1-based
};

// DAG vertex whose function ends up at t: the sink, or its only predecessor when the sink has
// in-degree one (then no computation happens at t).
int delivered_function(const ComputationDag& dag);

// Per-symbol event order of an embedding (k left at 0).
struct EmbeddingOrder {
    std::vector<ScheduleEvent> events;
    int communications = 0;  // L(E)
    int computations = 0;    // g(E): computations of non-source functions at path starts
};

EmbeddingOrder embedding_order(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);

struct ScheduleTrace {
    std::int64_t K = 0;
    std::vector<ScheduleEvent> events;
};

// Limit on the number of events build_schedule will emit.
inline constexpr std::int64_t kMaxScheduleEvents = 50'000'000;

ScheduleTrace build_schedule(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol,
                             double eps = 1e-2);

// Bits sent over each network edge: N_e.
std::vector<double> link_usage(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace);

struct ScheduleReport {
    ValidationReport report;
    double lambda = 0.0;  // max rate with N_e * lambda <= K c(e)
    std::vector<double> N;
    std::int64_t first_bad_event = -1;
    bool final_ok = false;
};

// Replays the events against the scheme's state-set semantics.
ScheduleReport validate_schedule(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace);

// Groups symbols by the embedding they follow; x(E) = lambda * count / K.
RateSolution schedule_to_flows(const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& trace);

}  // namespace calpkit
