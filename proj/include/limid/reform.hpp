#pragma once

#include <string>
#include <utility>
#include <vector>

#include "limid/credal.hpp"
#include "limid/linear.hpp"
#include "limid/model.hpp"

namespace limid {

// Topological order of the relevant ancestors of one query, query last.
struct PrecedenceOrdering {
  NodeId query = -1;
  std::vector<NodeId> sequence;
};

enum class MilpVarKind { PolicyBinary, VertexBinary, Term, Product };

struct MilpVariable {
  int index = -1;
  MilpVarKind kind = MilpVarKind::Term;
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool integral = false;

  NodeId node = -1;  // owning node (policy/vertex) or query node (term)
  int row = -1;      // parent configuration (policy/vertex)
  int alt = -1;      // alternative (policy) or vertex index (vertex)
  int serial = -1;   // creation index within the query (term)
  int factor_binary = -1;  // product operands
  int factor_term = -1;
};

// One bilinear monomial: coeff * binary * term.
struct BilinearEntry {
  int binary = -1;
  int term = -1;
  double coeff = 0.0;
};

// lhs = sum(linear) + sum(bilinear) + constant
struct BilinearEquality {
  int lhs = -1;
  NodeId query = -1;
  std::vector<std::pair<int, double>> linear;
  std::vector<BilinearEntry> bilinear;
  double constant = 0.0;
};

// Metadata for mapping policy binaries back to a strategy.
struct DecisionGroupMeta {
  NodeId node = -1;
  std::string name;
  int rows = 0;
  int domain = 0;
  int first_var = -1;  // variables are contiguous: row-major, alternative fastest
};

struct VertexGroupMeta {
  NodeId node = -1;
  std::string name;
  std::vector<int> vertices_per_row;
  int first_var = -1;
};

struct BilinearProgram {
  std::vector<MilpVariable> variables;
  std::vector<BilinearEquality> equalities;  // per query, emission order
  std::vector<std::pair<int, double>> objective;  // maximize, one entry per query
  std::vector<DecisionGroupMeta> decisions;
  std::vector<VertexGroupMeta> vertex_sets;
};

struct MilpProblem {
  std::vector<MilpVariable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<int, double>> objective;  // maximize
  std::vector<DecisionGroupMeta> decisions;
  std::vector<VertexGroupMeta> vertex_sets;
  // Suggested starting basis for the LP relaxation: for definitional rows
  // the defined term variable, -1 elsewhere.
  std::vector<int> lp_basis_hint;

  int count(ConstraintKind kind) const;
  std::vector<int> binary_indices() const;
};

// Greedy ordering: among topologically ready nodes, pick the one that
// minimizes the size of the resulting frontier; ties break toward the
// smallest node id.  The query always comes last.
PrecedenceOrdering choose_precedence_ordering(const CredalNetwork& net, NodeId query);

// Symbolic top-down pass along the given orderings (one per query, in
// query order).  Emits one definitional equality per processed node and
// frontier context; frontier variables that become d-separated from the
// query are dropped from the context, and terms whose context pins a
// stored table row are folded to constants.
BilinearProgram generate_bilinear(const CredalNetwork& net,
                                  const std::vector<PrecedenceOrdering>& orderings);

// Replaces every binary-times-term monomial with a product variable and
// its four envelope constraints, appends the simplex constraints of every
// policy and vertex group, and fixes the constraint order to
// definitions, simplex, linearization.
MilpProblem linearize(const BilinearProgram& bilinear);

// Deterministic plain-text export with Maximize / Subject To / Bounds /
// Binaries sections.  Coefficients carry 17 significant digits.
std::string export_lp(const MilpProblem& milp);

// Reads the policy binaries out of a variable assignment and builds the
// pure strategy.  Binaries must be integral within 1e-6 and every simplex
// group must round to exactly one chosen alternative.
Strategy extract_strategy(const MilpProblem& milp, const std::vector<double>& assignment);

}  // namespace limid
