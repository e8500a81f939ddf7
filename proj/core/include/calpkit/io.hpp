#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "calpkit/calp.hpp"
#include "calpkit/emlp.hpp"
#include "calpkit/generate.hpp"
#include "calpkit/reductions.hpp"
#include "calpkit/scheduler.hpp"
#include "calpkit/twonode.hpp"

namespace calpkit::io {

using nlohmann::json;

// Doubles with infinity written as "inf".
json number(double v);
double to_number(const json& j);

std::string read_file(const std::string& path);
json read_json_file(const std::string& path);

NetworkGraph network_from_json(const json& j);
json to_json(const NetworkGraph& net);
ComputationDag dag_from_json(const json& j);
json to_json(const ComputationDag& dag);

// {"network": ..., "dag": ...}
Instance instance_from_json(const json& j, std::string name = {});
Instance read_instance(const std::string& path);
json to_json(const Instance& inst);

// {"gamma_id": [[node, ...], ...]}; DAG edges are keyed by id ("u->v" unless named). Also accepts {"assignment", "paths"}.
Embedding embedding_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j);
json to_json(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb);
json to_json(const NetworkGraph& net, const ComputationDag& dag, const REmbedding& emb);
std::vector<int> assignment_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j);

// {"columns": [{"name", "embedding"}]}, a bare list of those, or {"name": embedding}.
std::vector<RateColumn> columns_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j);
json columns_to_json(const NetworkGraph& net, const ComputationDag& dag, const std::vector<RateColumn>& cols);

json to_json(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol);
// Columns with their "flow" values, as written by to_json.
RateSolution rate_solution_from_json(const NetworkGraph& net, const ComputationDag& dag, const json& j);
json to_json(const ValidationReport& rep);
json to_json(const CutInstance& inst);
json to_json(const CutInstance& inst, const CutSolution& sol);
json to_json(const NetworkGraph& net, const ComputationDag& dag, const FractionalPlacement& p);

// JSON lines: optional header {"type":"scheme","K":K}, then one event per line.
void write_trace(std::ostream& os, const NetworkGraph& net, const ComputationDag& dag, const ScheduleTrace& tr);
ScheduleTrace read_trace(std::istream& is, const NetworkGraph& net, const ComputationDag& dag);

// Edge list: JSON {"edges": [[u, v], ...]} or text with one "u v" pair per line ('#' comments).
SimpleGraph graph_from_text(const std::string& text);

}  // namespace calpkit::io
