#pragma once

#include <utility>
#include <vector>

namespace limid {

enum class Relation { Eq, Le, Ge };

enum class ConstraintKind {
  Definition,     // definitional equality from the symbolic pass
  Simplex,        // probabilities of a credal set sum to one
  Linearization,  // product-variable envelope
  General,        // anything else (hand-built LPs)
};

struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;  // sorted by variable index
  Relation rel = Relation::Eq;
  double rhs = 0.0;
  ConstraintKind kind = ConstraintKind::General;
};

}  // namespace limid
