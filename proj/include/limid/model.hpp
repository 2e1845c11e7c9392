#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limid/error.hpp"
#include "limid/factor.hpp"

namespace limid {

// Dense node index; names live in the diagram.
using NodeId = int;

enum class NodeKind { Chance, Decision, Utility };

struct DiagramNode {
  NodeId id = -1;
  std::string name;
  NodeKind kind = NodeKind::Chance;
  std::vector<NodeId> parents;  // declared order
  int domain_size = 0;          // 0 for utility nodes
};

// Conditional probability table.  One row per parent configuration and
// one column per own category; parent configurations are indexed with
// the last declared parent varying fastest.
struct Cpt {
  NodeId owner = -1;
  std::vector<double> values;
};

// Utility table: one entry per parent configuration, same row indexing
// convention as Cpt.
struct UtilityTable {
  NodeId owner = -1;
  std::vector<double> values;
};

// Policy for one decision node: rows x alternatives, row-major.
struct Policy {
  NodeId decision = -1;
  std::vector<double> table;
};

// One policy per decision node, kept ascending by decision id.
struct Strategy {
  std::vector<Policy> policies;
  const Policy* find(NodeId decision) const;
};

struct NormalizationInfo {
  double f_lo = 0.0;
  double f_hi = 1.0;
  int utility_count = 0;
};

class InfluenceDiagram {
 public:
  // Builders are permissive about value-level problems; validate_diagram
  // reports them.  Unknown parent ids still throw.
  NodeId add_chance(const std::string& name, const std::vector<NodeId>& parents,
                    int domain_size);
  NodeId add_decision(const std::string& name, const std::vector<NodeId>& parents,
                      int domain_size);
  NodeId add_utility(const std::string& name, const std::vector<NodeId>& parents);
  void set_cpt(NodeId owner, std::vector<double> values);
  void set_utility(NodeId owner, std::vector<double> values);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const DiagramNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<DiagramNode>& nodes() const { return nodes_; }
  const Cpt* cpt(NodeId id) const;
  const UtilityTable* utility(NodeId id) const;
  std::optional<NodeId> find(const std::string& name) const;

  std::vector<NodeId> chance_ids() const;
  std::vector<NodeId> decision_ids() const;
  std::vector<NodeId> utility_ids() const;
  std::vector<std::vector<NodeId>> children() const;

  // Strict ancestors of a node, ascending.
  std::vector<NodeId> ancestors(NodeId id) const;

  // Parent-configuration helpers (last declared parent varies fastest).
  std::uint64_t parent_config_count(NodeId id) const;
  std::uint64_t config_index(NodeId id, const std::vector<int>& parent_values) const;
  std::vector<int> config_values(NodeId id, std::uint64_t index) const;

 private:
  NodeId add_node(const std::string& name, NodeKind kind,
                  const std::vector<NodeId>& parents, int domain_size);

  std::vector<DiagramNode> nodes_;
  std::vector<Cpt> cpts_;               // aligned with nodes_, empty when absent
  std::vector<UtilityTable> utilities_; // aligned with nodes_, empty when absent
};

struct ValidationIssue {
  NodeId node = -1;  // -1 for diagram-level issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

// Checks every structural and numeric invariant of the diagram.
// Violations are reported, not thrown.
ValidationReport validate_diagram(const InfluenceDiagram& diagram);

// Strategy helpers -----------------------------------------------------

bool is_pure(const Strategy& strategy);

// Validates policy shape and row sums against the diagram.
ValidationReport validate_strategy(const InfluenceDiagram& diagram,
                                   const Strategy& strategy);

// Pure strategy picking alternative 0 everywhere (the lexicographically
// smallest encoding).
Strategy first_lexicographic_strategy(const InfluenceDiagram& diagram);

// Pure strategy from per-decision, per-row chosen alternatives; the outer
// vector follows ascending decision id.
Strategy pure_strategy_from_choices(const InfluenceDiagram& diagram,
                                    const std::vector<std::vector<int>>& choices);

// Number of pure strategies as a long double (may be astronomically big).
long double count_pure_strategies(const InfluenceDiagram& diagram);

// Decodes the ordinal-th pure strategy in lexicographic encoding order.
Strategy pure_strategy_from_ordinal(const InfluenceDiagram& diagram,
                                    std::uint64_t ordinal);

// Expected utility -----------------------------------------------------

// Direct enumeration of every joint configuration; the oracle for all
// other expected-utility computations.  Throws SizeLimitError when the
// joint space exceeds config_cap.
double expected_utility_naive(const InfluenceDiagram& diagram,
                              const Strategy& strategy,
                              std::uint64_t config_cap = (1ull << 24));

// Variable elimination per utility node on the strategy-induced
// factorization.  Matches the naive oracle wherever the oracle runs.
double expected_utility(const InfluenceDiagram& diagram, const Strategy& strategy);

// Precomputed elimination plans for repeated evaluations of the same
// diagram under different strategies.  Immutable and safe to share
// across threads.
class EuEvaluator {
 public:
  explicit EuEvaluator(const InfluenceDiagram& diagram);
  double operator()(const Strategy& strategy) const;

 private:
  struct Plan {
    NodeId utility;
    std::vector<Factor> fixed;        // chance CPTs + the utility factor
    std::vector<NodeId> decisions;    // decision ancestors needing policies
    std::vector<int> elim_order;
  };
  const InfluenceDiagram* diagram_;
  std::vector<Plan> plans_;
  std::vector<NodeId> needed_decisions_;  // union over plans, ascending
};

// Exhaustive search over pure strategies.  Ties break toward the
// lexicographically smallest policy encoding.  threads > 1 enables the
// OpenMP kernel; the result is identical to the serial reference.
std::pair<Strategy, double> brute_force_meu(const InfluenceDiagram& diagram,
                                            std::uint64_t strategy_cap = (1ull << 20),
                                            int threads = 1);

// Serial reference implementation of the same sweep, kept as the test
// oracle for the parallel kernel.
std::pair<Strategy, double> brute_force_meu_serial(const InfluenceDiagram& diagram,
                                                   std::uint64_t strategy_cap = (1ull << 20));

// Utility normalization -------------------------------------------------

// Global minimum and maximum utility entry.  Throws TrivialDiagramError
// when the diagram has no utility entries.
std::pair<double, double> global_utility_range(const InfluenceDiagram& diagram);

// Affine rescaling of every utility entry into [0,1].  Throws
// TrivialDiagramError when all entries are equal.
std::pair<InfluenceDiagram, NormalizationInfo> normalize_utilities(
    const InfluenceDiagram& diagram);

// Maps a normalized expected utility (or upper bound) back to the
// original scale.
double denormalize_eu(double eu_normalized, const NormalizationInfo& info);

}  // namespace limid
