#pragma once

#include <cstddef>
#include <vector>

namespace limid {

// Discrete potential over a set of integer-indexed variables.
//
// Variables are kept strictly ascending and values are stored row-major
// with the last variable varying fastest.  All table-like inputs in this
// project (CPT rows, policies, utility tables) follow the same
// last-varies-fastest rule, so conversion is a pure permutation.
struct Factor {
  std::vector<int> vars;   // strictly ascending variable ids
  std::vector<int> cards;  // cardinality per variable, aligned with vars
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  static Factor scalar(double v);

  // Builds a factor from a table whose variables appear in table order
  // (last one varying fastest).  table_vars need not be sorted.
  static Factor from_table(const std::vector<int>& table_vars,
                           const std::vector<int>& table_cards,
                           const std::vector<double>& table_values);
};

Factor multiply(const Factor& a, const Factor& b);

// Sums a variable out of a factor.  The variable must occur in the scope.
Factor sum_out(const Factor& a, int var);

// Multiplies all factors together and sums every variable out, following
// the given elimination order.  The order must cover the whole scope
// union; the result is the full contraction value.
double contract(std::vector<Factor> factors, const std::vector<int>& elim_order);

// Min-degree elimination order over the interaction graph of the given
// scopes, excluding the variables listed in keep.  Ties break toward the
// smallest variable id, so the order is deterministic.
std::vector<int> min_degree_order(const std::vector<std::vector<int>>& scopes,
                                  const std::vector<int>& keep);

}  // namespace limid
