#pragma once

#include <string>

#include "json.hpp"
#include "limid/model.hpp"
#include "limid/solve.hpp"

namespace limid {

using Json = nlohmann::ordered_json;

// Diagram document:
// {
//   "nodes": [{"name", "kind": "chance"|"decision"|"utility",
//              "parents": [names], "domain": size}],
//   "cpts": {name: [row-major values]},
//   "utilities": {name: [values]}
// }
// Unknown keys are rejected; "domain" is required for chance and decision
// nodes and forbidden on utility nodes.
InfluenceDiagram diagram_from_json(const Json& doc);
Json diagram_to_json(const InfluenceDiagram& diagram);

// Reads and validates a diagram file, throwing InputError with a usable
// diagnostic on any problem.
InfluenceDiagram load_diagram_file(const std::string& path);

// "parent=value" pairs joined by "," in declared parent order.
std::string parent_config_string(const InfluenceDiagram& diagram, NodeId decision,
                                 std::uint64_t row);

// Strategy document: {decision name: {config string: alternative index}}.
Json strategy_to_json(const InfluenceDiagram& diagram, const Strategy& strategy);

// Accepts either a bare strategy document or a full result document with
// a "strategy" member.  Only pure strategies are representable.
Strategy strategy_from_json(const InfluenceDiagram& diagram, const Json& doc);

// Result document for solve/brute (and, without bound fields, spu).
Json result_to_json(const InfluenceDiagram& diagram, const SolveResult& result,
                    bool include_bound = true);

}  // namespace limid
