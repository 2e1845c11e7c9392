#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "limid/model.hpp"
#include "limid/reform.hpp"
#include "limid/simplex.hpp"

namespace limid {

enum class SearchOrder { BestBound, DepthFirst };

struct SolveOptions {
  std::optional<double> time_limit_s;
  std::optional<std::int64_t> node_limit;
  double gap_tolerance_percent = 0.0;  // 0 = solve to proven optimality
  SearchOrder search = SearchOrder::BestBound;
  bool warm_start_spu = true;
  int threads = 1;              // >1 enables the OpenMP kernels
  std::ostream* log = nullptr;  // optional run log sink (tab separated)
};

enum class SolveStatus { Proven, Stopped };

struct SolveResult {
  Strategy strategy;
  double eu = 0.0;           // original utility scale
  double upper_bound = 0.0;  // original utility scale
  double gap_percent = 0.0;  // computed on the normalized scale
  std::int64_t nodes_evaluated = 0;
  SolveStatus status = SolveStatus::Proven;
};

// Incumbent on the scale of the MILP objective (the normalized scale for
// problems produced by the reformulation).
struct Incumbent {
  Strategy strategy;
  double value = 0.0;
};

// Anytime branch-and-bound over the binaries of a reformulated MILP.
// evaluate, when provided, must return the exact objective-scale value of
// a pure strategy; it powers incumbent repair and exact incumbent values.
// info maps objective-scale values back to the reporting scale (pass the
// default for already-original-scale problems).
SolveResult branch_and_bound(const MilpProblem& milp, const SolveOptions& options,
                             const std::optional<Incumbent>& incumbent0 = std::nullopt,
                             const NormalizationInfo& info = NormalizationInfo{0.0, 1.0, 0},
                             const std::function<double(const Strategy&)>& evaluate = {});

struct SpuOptions {
  std::vector<NodeId> sweep_order;  // empty = ascending node id
  bool prefer_first_on_tie = false; // default keeps the current alternative
};

struct SpuResult {
  Strategy strategy;
  double eu = 0.0;  // original utility scale
  int sweeps = 0;
  bool converged = false;
  std::int64_t evaluations = 0;
};

// Single policy updating: coordinate ascent over one decision row at a
// time, strict improvement required to move.  trace, when given, records
// the expected utility after every row update.
SpuResult spu(const InfluenceDiagram& diagram, const Strategy& init, int max_sweeps = 1000,
              const SpuOptions& options = {}, std::vector<double>* trace = nullptr);

// Full pipeline: normalize, translate to a credal network, generate and
// linearize the bilinear program, optionally warm start from SPU, run
// branch-and-bound, and map the results back to the original scale.
SolveResult solve_meu(const InfluenceDiagram& diagram, const SolveOptions& options = {});

}  // namespace limid
