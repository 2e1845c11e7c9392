#pragma once

#include <utility>
#include <vector>

#include "limid/linear.hpp"

namespace limid {

enum class LpStatus { Optimal, Infeasible };

// Linear program over finitely bounded variables (everything this
// project produces lives in [0,1] or a computed finite range).
struct LpProblem {
  int num_vars = 0;
  std::vector<double> lower;  // size num_vars
  std::vector<double> upper;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<int, double>> objective;  // maximize
  // Optional starting basic variable per constraint row (-1 = automatic).
  // Only honored on equality rows; wrong hints fall back gracefully.
  std::vector<int> basis_hint;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> values;  // structural variables
  double objective = 0.0;
  long iterations = 0;
  double max_violation = 0.0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  long max_iterations = 0;  // 0 = automatic from problem size
  int threads = 1;          // >1 runs the tableau update kernel with OpenMP
};

// Bounded-variable primal simplex on a dense tableau, two phases,
// Dantzig pricing with an automatic switch to Bland's rule on stalling.
LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace limid
