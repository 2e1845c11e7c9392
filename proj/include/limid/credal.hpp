#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "limid/model.hpp"

namespace limid {

// Precisely known conditional table, rows x categories (same layout as Cpt).
struct PreciseSpec {
  std::vector<double> table;
};

// Vacuous credal set: any distribution over the node's domain, one free
// simplex per parent configuration.  Used for translated decision nodes.
struct FreeDecisionSpec {};

// Finitely generated credal set given as explicit vertices, one list per
// parent configuration: vertices[row][vertex][category].
struct VertexListSpec {
  std::vector<std::vector<std::vector<double>>> vertices;
};

using CredalSpec = std::variant<PreciseSpec, FreeDecisionSpec, VertexListSpec>;

struct CredalNode {
  NodeId id = -1;
  std::string name;
  std::vector<NodeId> parents;  // declared order
  int domain = 0;
  CredalSpec spec;
};

// Query: probability of one category of one node.
struct CredalQuery {
  NodeId node = -1;
  int category = 0;
};

class CredalNetwork {
 public:
  NodeId add_precise(const std::string& name, const std::vector<NodeId>& parents,
                     int domain, std::vector<double> table);
  NodeId add_free_decision(const std::string& name, const std::vector<NodeId>& parents,
                           int domain);
  NodeId add_vertex_list(const std::string& name, const std::vector<NodeId>& parents,
                         int domain,
                         std::vector<std::vector<std::vector<double>>> vertices);
  void add_query(NodeId node, int category);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const CredalNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<CredalNode>& nodes() const { return nodes_; }
  const std::vector<CredalQuery>& queries() const { return queries_; }

  std::vector<std::vector<NodeId>> children() const;
  std::uint64_t parent_config_count(NodeId id) const;
  std::uint64_t config_index(NodeId id, const std::vector<int>& parent_values) const;

 private:
  NodeId add_node(const std::string& name, const std::vector<NodeId>& parents,
                  int domain, CredalSpec spec);
  std::vector<CredalNode> nodes_;
  std::vector<CredalQuery> queries_;
};

// Concrete choice inside every credal set of the network: a distribution
// table per free-decision node and a vertex index per parent
// configuration of every vertex-list node.
struct StrategySelection {
  std::map<NodeId, std::vector<double>> decision_tables;  // rows x categories
  std::map<NodeId, std::vector<int>> vertex_choices;      // one index per row
};

// Translates a utility-normalized influence diagram: chance nodes stay
// precise, each utility node becomes a binary precise node whose
// category-0 probability equals the normalized utility entry, and each
// decision node becomes a vacuous credal node.  Node ids are preserved.
CredalNetwork limid_to_credal(const InfluenceDiagram& normalized);

// Sum over all queries of the marginal probability of the query category
// under the precise network induced by the selection.
double sum_marginals(const CredalNetwork& net, const StrategySelection& selection);

// Strict ancestors of the query plus the query itself, ascending.
std::vector<NodeId> relevant_ancestors(const CredalNetwork& net, NodeId query);

// Convenience: view a diagram strategy as a selection for the translated
// network (vertex-list nodes untouched).
StrategySelection selection_from_strategy(const Strategy& strategy);

}  // namespace limid
