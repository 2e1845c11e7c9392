#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "limid/model.hpp"
#include "limid/solve.hpp"

namespace limid {

struct RandomSpec {
  int total_nodes = 10;
  int decision_nodes = 3;
  int utility_nodes = 3;  // conventionally equal to decision_nodes
  int max_parents = 3;
  int domain_size = 2;
  std::uint64_t seed = 0;
};

// Deterministic random LIMID: shuffled topological order over the
// non-utility nodes, utility sinks with one or two parents, decisions
// with up to two chance parents, CPT rows uniform on the simplex,
// utility entries uniform in [-100, 100].
InfluenceDiagram gen_random_diagram(const RandomSpec& spec);

// Edge grouping of the effects-based-operations planning model: which
// action outcomes feed which capability node and which capability pair
// feeds which subgoal.  Alternative groupings are provided because the
// model description leaves room for interpretation.
struct EboMapping {
  std::string name;
  // Outcome parents per capability node, as indices into the action list
  // (IADS, Air_force, Artillery, Ground_force, Morale, Commander_in_custody).
  std::array<std::vector<int>, 6> capability_sources;
  // Capability pair per subgoal
  // (Air_superiority, Territory_occupation, Commander_surrender).
  std::array<std::array<int, 2>, 3> subgoal_sources;
  // Capability probability when its only child fails: half under the
  // halving rule, zero under the stricter reading.
  bool lone_child_half = true;
};

EboMapping ebo_default_mapping();
std::vector<EboMapping> ebo_mapping_variants();  // default first

InfluenceDiagram build_ebo();
InfluenceDiagram build_ebo(const EboMapping& mapping);

// The all-actions pure strategy for an EBO diagram.
Strategy ebo_all_actions(const InfluenceDiagram& ebo);

struct BenchRow {
  RandomSpec spec;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double cr_time_s = 0.0;
  double cr_eu = 0.0;
  double cr_upper_bound = 0.0;
  std::int64_t cr_nodes_evaluated = 0;
  double cr_gap_percent = 0.0;
  bool cr_proven = true;
  double spu_time_s = 0.0;
  double spu_eu = 0.0;
  // Both candidate error definitions, on the normalized scale.
  double spu_gap_vs_ub_percent = 0.0;
  double spu_gap_vs_cr_percent = 0.0;
};

struct BenchAggregate {
  RandomSpec spec;
  int rows = 0;
  double cr_time_s = 0.0;
  double cr_nodes_evaluated = 0.0;
  double cr_gap_percent = 0.0;
  double spu_time_s = 0.0;
  double spu_gap_vs_ub_percent = 0.0;
  double spu_gap_vs_cr_percent = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;

  // Tab-separated table; with_times=false replaces wall-clock columns
  // with "-" so outputs are byte-reproducible.
  std::string to_tsv(bool with_times = true) const;
  std::string to_json(bool with_times = true) const;
};

// Runs solve_meu and spu on `trials` seeds per spec (seed, seed+1, ...).
// Per-row failures are recorded in the row, never aborting the sweep.
BenchReport run_benchmark(const std::vector<RandomSpec>& specs, int trials,
                          const SolveOptions& options);

}  // namespace limid
