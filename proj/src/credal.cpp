#include "limid/credal.hpp"

#include <algorithm>
#include <cassert>

namespace limid {

NodeId CredalNetwork::add_node(const std::string& name, const std::vector<NodeId>& parents,
                               int domain, CredalSpec spec) {
  for (NodeId p : parents) {
    if (p < 0 || p >= num_nodes())
      throw Error("unknown parent id " + std::to_string(p) + " for node '" + name + "'");
  }
  CredalNode n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.name = name;
  n.parents = parents;
  n.domain = domain;
  n.spec = std::move(spec);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

NodeId CredalNetwork::add_precise(const std::string& name, const std::vector<NodeId>& parents,
                                  int domain, std::vector<double> table) {
  return add_node(name, parents, domain, PreciseSpec{std::move(table)});
}

NodeId CredalNetwork::add_free_decision(const std::string& name,
                                        const std::vector<NodeId>& parents, int domain) {
  return add_node(name, parents, domain, FreeDecisionSpec{});
}

NodeId CredalNetwork::add_vertex_list(const std::string& name,
                                      const std::vector<NodeId>& parents, int domain,
                                      std::vector<std::vector<std::vector<double>>> vertices) {
  return add_node(name, parents, domain, VertexListSpec{std::move(vertices)});
}

void CredalNetwork::add_query(NodeId node, int category) {
  if (node < 0 || node >= num_nodes()) throw Error("add_query: bad node id");
  queries_.push_back({node, category});
}

std::vector<std::vector<NodeId>> CredalNetwork::children() const {
  std::vector<std::vector<NodeId>> out(nodes_.size());
  for (const CredalNode& n : nodes_)
    for (NodeId p : n.parents) out[static_cast<std::size_t>(p)].push_back(n.id);
  return out;
}

std::uint64_t CredalNetwork::parent_config_count(NodeId id) const {
  std::uint64_t c = 1;
  for (NodeId p : node(id).parents) c *= static_cast<std::uint64_t>(node(p).domain);
  return c;
}

std::uint64_t CredalNetwork::config_index(NodeId id,
                                          const std::vector<int>& parent_values) const {
  const CredalNode& n = node(id);
  assert(parent_values.size() == n.parents.size());
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < n.parents.size(); ++i)
    idx = idx * static_cast<std::uint64_t>(node(n.parents[i]).domain) +
          static_cast<std::uint64_t>(parent_values[i]);
  return idx;
}

CredalNetwork limid_to_credal(const InfluenceDiagram& d) {
  CredalNetwork net;
  for (const DiagramNode& n : d.nodes()) {
    switch (n.kind) {
      case NodeKind::Chance:
        net.add_precise(n.name, n.parents, n.domain_size, d.cpt(n.id)->values);
        break;
      case NodeKind::Decision:
        net.add_free_decision(n.name, n.parents, n.domain_size);
        break;
      case NodeKind::Utility: {
        const UtilityTable* t = d.utility(n.id);
        std::vector<double> table;
        table.reserve(t->values.size() * 2);
        for (double f : t->values) {
          if (f < -1e-12 || f > 1.0 + 1e-12)
            throw ContractViolation("utility entry " + std::to_string(f) + " of '" + n.name +
                                    "' is outside [0,1]; normalize the diagram first");
          table.push_back(f);
          table.push_back(1.0 - f);
        }
        const NodeId id = net.add_precise(n.name, n.parents, 2, std::move(table));
        net.add_query(id, 0);
        break;
      }
    }
  }
  return net;
}

std::vector<NodeId> relevant_ancestors(const CredalNetwork& net, NodeId query) {
  if (query < 0 || query >= net.num_nodes()) throw Error("relevant_ancestors: bad node id");
  std::vector<char> seen(static_cast<std::size_t>(net.num_nodes()), 0);
  std::vector<NodeId> stack{query};
  seen[static_cast<std::size_t>(query)] = 1;
  std::vector<NodeId> out;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (NodeId p : net.node(v).parents) {
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Effective conditional table of a node under a selection.
std::vector<double> effective_table(const CredalNetwork& net, const CredalNode& n,
                                    const StrategySelection& sel) {
  if (const auto* p = std::get_if<PreciseSpec>(&n.spec)) return p->table;
  if (std::get_if<FreeDecisionSpec>(&n.spec)) {
    auto it = sel.decision_tables.find(n.id);
    if (it == sel.decision_tables.end())
      throw IncompleteSelectionError("selection misses free-decision node '" + n.name + "'");
    const std::uint64_t want =
        net.parent_config_count(n.id) * static_cast<std::uint64_t>(n.domain);
    if (it->second.size() != want)
      throw IncompleteSelectionError("selection table for '" + n.name + "' has wrong size");
    return it->second;
  }
  const auto& vl = std::get<VertexListSpec>(n.spec);
  auto it = sel.vertex_choices.find(n.id);
  if (it == sel.vertex_choices.end())
    throw IncompleteSelectionError("selection misses vertex-list node '" + n.name + "'");
  const std::uint64_t rows = net.parent_config_count(n.id);
  if (it->second.size() != rows)
    throw IncompleteSelectionError("vertex choice for '" + n.name + "' has wrong row count");
  std::vector<double> table;
  table.reserve(rows * static_cast<std::uint64_t>(n.domain));
  for (std::uint64_t j = 0; j < rows; ++j) {
    const int k = it->second[j];
    if (k < 0 || static_cast<std::size_t>(k) >= vl.vertices[j].size())
      throw IncompleteSelectionError("vertex choice out of range for '" + n.name + "'");
    const auto& v = vl.vertices[j][static_cast<std::size_t>(k)];
    table.insert(table.end(), v.begin(), v.end());
  }
  return table;
}

}  // namespace

double sum_marginals(const CredalNetwork& net, const StrategySelection& sel) {
  // Coverage is checked for the whole network, not just the part that is
  // relevant to some query.
  for (const CredalNode& n : net.nodes()) (void)effective_table(net, n, sel);

  double total = 0.0;
  for (const CredalQuery& q : net.queries()) {
    const std::vector<NodeId> rel = relevant_ancestors(net, q.node);
    std::vector<Factor> factors;
    std::vector<std::vector<int>> scopes;
    for (NodeId v : rel) {
      const CredalNode& n = net.node(v);
      std::vector<int> cards;
      for (NodeId p : n.parents) cards.push_back(net.node(p).domain);
      if (v == q.node) {
        // Slice of the query node's table at the query category: a factor
        // over the parents only.
        const std::vector<double> table = effective_table(net, n, sel);
        const std::uint64_t rows = net.parent_config_count(v);
        std::vector<double> slice(rows);
        for (std::uint64_t j = 0; j < rows; ++j)
          slice[j] = table[j * static_cast<std::uint64_t>(n.domain) +
                           static_cast<std::uint64_t>(q.category)];
        std::vector<int> table_vars(n.parents.begin(), n.parents.end());
        factors.push_back(Factor::from_table(table_vars, cards, slice));
        scopes.push_back(table_vars);
      } else {
        std::vector<int> table_vars(n.parents.begin(), n.parents.end());
        table_vars.push_back(v);
        cards.push_back(n.domain);
        factors.push_back(Factor::from_table(table_vars, cards, effective_table(net, n, sel)));
        scopes.push_back(table_vars);
      }
    }
    total += contract(std::move(factors), min_degree_order(scopes, {}));
  }
  return total;
}

StrategySelection selection_from_strategy(const Strategy& strategy) {
  StrategySelection sel;
  for (const Policy& p : strategy.policies) sel.decision_tables[p.decision] = p.table;
  return sel;
}

}  // namespace limid
