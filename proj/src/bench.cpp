#include "limid/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace limid {

namespace {

// Uniform double in (0, 1], stable across platforms.
double unit_draw(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

int int_draw(std::mt19937_64& rng, int lo, int hi) {  // inclusive range
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

std::vector<double> simplex_draw(std::mt19937_64& rng, int k) {
  std::vector<double> row(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& v : row) {
    v = -std::log(unit_draw(rng));
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

// k distinct values from pool, preserving the pool's order.
std::vector<int> sample_distinct(std::mt19937_64& rng, std::vector<int> pool, int k) {
  std::vector<int> picked;
  for (int i = 0; i < k; ++i) {
    const int at = int_draw(rng, 0, static_cast<int>(pool.size()) - 1);
    picked.push_back(pool[static_cast<std::size_t>(at)]);
    pool.erase(pool.begin() + at);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

InfluenceDiagram gen_random_diagram(const RandomSpec& spec) {
  if (spec.total_nodes <= 0 || spec.decision_nodes < 0 || spec.utility_nodes < 0)
    throw SpecError("random spec: counts must be positive");
  if (spec.decision_nodes + spec.utility_nodes > spec.total_nodes)
    throw SpecError("random spec: decision + utility nodes exceed the total");
  if (spec.utility_nodes > 0 && spec.total_nodes - spec.utility_nodes < 1)
    throw SpecError("random spec: no non-utility nodes available to parent utilities");
  if (spec.domain_size < 2) throw SpecError("random spec: domain size must be at least 2");

  const int chance = spec.total_nodes - spec.decision_nodes - spec.utility_nodes;
  std::mt19937_64 rng(spec.seed);

  // Shuffled topological order over the non-utility nodes.
  std::vector<int> kinds;  // 0 = chance, 1 = decision
  kinds.insert(kinds.end(), static_cast<std::size_t>(chance), 0);
  kinds.insert(kinds.end(), static_cast<std::size_t>(spec.decision_nodes), 1);
  for (int i = static_cast<int>(kinds.size()) - 1; i > 0; --i)
    std::swap(kinds[static_cast<std::size_t>(i)],
              kinds[static_cast<std::size_t>(int_draw(rng, 0, i))]);

  InfluenceDiagram d;
  std::vector<NodeId> placed;         // non-utility nodes in topo order
  std::vector<NodeId> placed_chance;  // chance subset, topo order
  int c_serial = 0, d_serial = 0;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == 0) {
      const int cap = std::min<int>(spec.max_parents, static_cast<int>(placed.size()));
      const int k = cap > 0 ? int_draw(rng, 0, cap) : 0;
      const std::vector<int> parents = sample_distinct(rng, placed, k);
      const NodeId id =
          d.add_chance("C" + std::to_string(c_serial++), parents, spec.domain_size);
      std::vector<double> cpt;
      const std::uint64_t rows = d.parent_config_count(id);
      for (std::uint64_t j = 0; j < rows; ++j) {
        const std::vector<double> row = simplex_draw(rng, spec.domain_size);
        cpt.insert(cpt.end(), row.begin(), row.end());
      }
      d.set_cpt(id, std::move(cpt));
      placed.push_back(id);
      placed_chance.push_back(id);
    } else {
      const int cap = std::min<int>(2, static_cast<int>(placed_chance.size()));
      const int k = cap > 0 ? int_draw(rng, 0, cap) : 0;
      const std::vector<int> parents = sample_distinct(rng, placed_chance, k);
      const NodeId id =
          d.add_decision("D" + std::to_string(d_serial++), parents, spec.domain_size);
      placed.push_back(id);
    }
  }
  for (int u = 0; u < spec.utility_nodes; ++u) {
    const int cap = std::min<int>(2, static_cast<int>(placed.size()));
    const int k = int_draw(rng, 1, cap);
    const std::vector<int> parents = sample_distinct(rng, placed, k);
    const NodeId id = d.add_utility("U" + std::to_string(u), parents);
    std::vector<double> table(d.parent_config_count(id));
    for (double& v : table) v = -100.0 + 200.0 * unit_draw(rng);
    d.set_utility(id, std::move(table));
  }
  return d;
}

// EBO planning model ------------------------------------------------------

namespace {

const std::vector<std::string>& ebo_actions() {
  static const std::vector<std::string> actions = {
      "destroy_C2",       "destroy_Radars",  "destroy_Communications",
      "launch_air_strike", "destroy_RD",      "destroy_storage",
      "destroy_assembly",  "launch_ground_attack", "launch_broadcasting",
      "capture_bodyguard", "use_special_force"};
  return actions;
}

double action_cost(const std::string& action) {
  if (action == "launch_ground_attack") return 150.0;
  if (action == "use_special_force") return 100.0;
  if (action == "capture_bodyguard") return 80.0;
  if (action == "launch_air_strike") return 50.0;
  return 20.0;
}

// Capability rows: halve per unachieved parent, zero from two on.  A
// lone failing child either halves or zeroes the node depending on the
// mapping's reading.
std::vector<double> capability_cpt(const InfluenceDiagram& d, NodeId id,
                                   bool lone_child_half) {
  std::vector<double> cpt;
  const std::uint64_t rows = d.parent_config_count(id);
  const std::size_t arity = d.node(id).parents.size();
  for (std::uint64_t j = 0; j < rows; ++j) {
    const std::vector<int> vals = d.config_values(id, j);
    int unachieved = 0;
    for (int v : vals)
      if (v == 0) ++unachieved;
    double p = unachieved == 0 ? 1.0 : unachieved == 1 ? 0.5 : 0.0;
    if (!lone_child_half && arity == 1 && unachieved == 1) p = 0.0;
    cpt.push_back(1.0 - p);
    cpt.push_back(p);
  }
  return cpt;
}

// Subgoal rows: certain with both parents achieved, even odds with one.
std::vector<double> subgoal_cpt(const InfluenceDiagram& d, NodeId id) {
  std::vector<double> cpt;
  const std::uint64_t rows = d.parent_config_count(id);
  for (std::uint64_t j = 0; j < rows; ++j) {
    const std::vector<int> vals = d.config_values(id, j);
    int achieved = 0;
    for (int v : vals)
      if (v == 1) ++achieved;
    const double p = achieved == 2 ? 1.0 : achieved == 1 ? 0.5 : 0.0;
    cpt.push_back(1.0 - p);
    cpt.push_back(p);
  }
  return cpt;
}

}  // namespace

EboMapping ebo_default_mapping() {
  EboMapping m;
  m.name = "default";
  m.capability_sources = {{{0, 1, 2}, {3}, {4, 5, 6}, {7}, {8}, {9, 10}}};
  m.subgoal_sources = {{{0, 1}, {2, 3}, {4, 5}}};
  return m;
}

std::vector<EboMapping> ebo_mapping_variants() {
  std::vector<EboMapping> out;
  out.push_back(ebo_default_mapping());
  {
    // Broadcasting and bodyguard capture both sway morale.
    EboMapping m = ebo_default_mapping();
    m.name = "custody_split";
    m.capability_sources[4] = {8, 9};
    m.capability_sources[5] = {10};
    out.push_back(m);
  }
  {
    // Custody backs air superiority, the air force backs the surrender.
    EboMapping m = ebo_default_mapping();
    m.name = "air_with_custody";
    m.subgoal_sources = {{{0, 5}, {2, 3}, {4, 1}}};
    out.push_back(m);
  }
  {
    // Communications strikes support the custody effort instead of IADS.
    EboMapping m = ebo_default_mapping();
    m.name = "comms_to_custody";
    m.capability_sources[0] = {0, 1};
    m.capability_sources[5] = {2, 9, 10};
    out.push_back(m);
  }
  {
    // A lone failing child zeroes its capability instead of halving it.
    EboMapping m = ebo_default_mapping();
    m.name = "lone_child_zero";
    m.lone_child_half = false;
    out.push_back(m);
  }
  return out;
}

InfluenceDiagram build_ebo() { return build_ebo(ebo_default_mapping()); }

InfluenceDiagram build_ebo(const EboMapping& mapping) {
  {
    std::vector<int> all;
    for (const auto& g : mapping.capability_sources) {
      if (g.empty()) throw SpecError("ebo mapping: a capability node has no outcome parents");
      all.insert(all.end(), g.begin(), g.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<int> want(11);
    for (int i = 0; i < 11; ++i) want[static_cast<std::size_t>(i)] = i;
    if (all != want) throw SpecError("ebo mapping: outcomes must partition the action list");
    std::vector<int> caps;
    for (const auto& g : mapping.subgoal_sources) caps.insert(caps.end(), g.begin(), g.end());
    std::sort(caps.begin(), caps.end());
    if (caps != std::vector<int>({0, 1, 2, 3, 4, 5}))
      throw SpecError("ebo mapping: subgoals must partition the capability list");
  }

  InfluenceDiagram d;
  const auto& actions = ebo_actions();

  std::vector<NodeId> decisions, outcomes;
  for (const std::string& a : actions) decisions.push_back(d.add_decision(a, {}, 2));
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const NodeId id = d.add_chance(actions[i] + "_outcome", {decisions[i]}, 2);
    // Success odds 0.9 when the action is taken, otherwise nothing happens.
    d.set_cpt(id, {1.0, 0.0, 0.1, 0.9});
    outcomes.push_back(id);
  }

  const std::array<std::string, 6> capability_names = {
      "IADS", "Air_force", "Artillery", "Ground_force", "Morale", "Commander_in_custody"};
  std::vector<NodeId> capabilities;
  for (std::size_t i = 0; i < capability_names.size(); ++i) {
    std::vector<NodeId> parents;
    for (int a : mapping.capability_sources[i]) parents.push_back(outcomes[static_cast<std::size_t>(a)]);
    const NodeId id = d.add_chance(capability_names[i], parents, 2);
    d.set_cpt(id, capability_cpt(d, id, mapping.lone_child_half));
    capabilities.push_back(id);
  }

  const std::array<std::string, 3> subgoal_names = {"Air_superiority", "Territory_occupation",
                                                    "Commander_surrender"};
  std::vector<NodeId> subgoals;
  for (std::size_t i = 0; i < subgoal_names.size(); ++i) {
    const std::vector<NodeId> parents = {
        capabilities[static_cast<std::size_t>(mapping.subgoal_sources[i][0])],
        capabilities[static_cast<std::size_t>(mapping.subgoal_sources[i][1])]};
    const NodeId id = d.add_chance(subgoal_names[i], parents, 2);
    d.set_cpt(id, subgoal_cpt(d, id));
    subgoals.push_back(id);
  }

  const NodeId hypothesis = d.add_chance("Hypothesis", subgoals, 2);
  {
    std::vector<double> cpt;
    const std::uint64_t rows = d.parent_config_count(hypothesis);
    for (std::uint64_t j = 0; j < rows; ++j) {
      const std::vector<int> vals = d.config_values(hypothesis, j);
      int unachieved = 0;
      for (int v : vals)
        if (v == 0) ++unachieved;
      static const double table[4] = {1.0, 0.6, 0.3, 0.0};
      const double p = table[unachieved];
      cpt.push_back(1.0 - p);
      cpt.push_back(p);
    }
    d.set_cpt(hypothesis, std::move(cpt));
  }

  const NodeId uh = d.add_utility("U_hypothesis", {hypothesis});
  d.set_utility(uh, {-500.0, 1000.0});
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const NodeId id = d.add_utility("cost_" + actions[i], {decisions[i]});
    d.set_utility(id, {0.0, -action_cost(actions[i])});
  }
  return d;
}

Strategy ebo_all_actions(const InfluenceDiagram& ebo) {
  std::vector<std::vector<int>> choices;
  for (NodeId dec : ebo.decision_ids()) {
    (void)dec;
    choices.push_back({1});
  }
  return pure_strategy_from_choices(ebo, choices);
}

// Benchmark runner --------------------------------------------------------

BenchReport run_benchmark(const std::vector<RandomSpec>& specs, int trials,
                          const SolveOptions& options) {
  BenchReport report;
  for (const RandomSpec& spec : specs) {
    BenchAggregate agg;
    agg.spec = spec;
    for (int t = 0; t < trials; ++t) {
      BenchRow row;
      row.spec = spec;
      row.seed = spec.seed + static_cast<std::uint64_t>(t);
      RandomSpec inst = spec;
      inst.seed = row.seed;
      try {
        const InfluenceDiagram d = gen_random_diagram(inst);
        const auto [lo, hi] = global_utility_range(d);
        const int ucount = static_cast<int>(d.utility_ids().size());
        const double span = hi - lo;

        const auto t_cr0 = std::chrono::steady_clock::now();
        const SolveResult cr = solve_meu(d, options);
        row.cr_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_cr0).count();
        row.cr_eu = cr.eu;
        row.cr_upper_bound = cr.upper_bound;
        row.cr_nodes_evaluated = cr.nodes_evaluated;
        row.cr_gap_percent = cr.gap_percent;
        row.cr_proven = cr.status == SolveStatus::Proven;

        const auto t_spu0 = std::chrono::steady_clock::now();
        const SpuResult sp = spu(d, first_lexicographic_strategy(d));
        row.spu_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_spu0).count();
        row.spu_eu = sp.eu;

        // Errors on the normalized scale, against both the certified upper
        // bound and the best value the solver reached.
        auto normalize = [&](double eu) {
          return span > 0 ? (eu - static_cast<double>(ucount) * lo) / span : 0.0;
        };
        const double ubn = normalize(cr.upper_bound);
        const double denom = std::max(std::abs(ubn), 1e-12);
        row.spu_gap_vs_ub_percent = 100.0 * (ubn - normalize(sp.eu)) / denom;
        row.spu_gap_vs_cr_percent = 100.0 * (normalize(cr.eu) - normalize(sp.eu)) / denom;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      if (row.ok) {
        agg.rows += 1;
        agg.cr_time_s += row.cr_time_s;
        agg.cr_nodes_evaluated += static_cast<double>(row.cr_nodes_evaluated);
        agg.cr_gap_percent += row.cr_gap_percent;
        agg.spu_time_s += row.spu_time_s;
        agg.spu_gap_vs_ub_percent += row.spu_gap_vs_ub_percent;
        agg.spu_gap_vs_cr_percent += row.spu_gap_vs_cr_percent;
      }
      report.rows.push_back(std::move(row));
    }
    if (agg.rows > 0) {
      agg.cr_time_s /= agg.rows;
      agg.cr_nodes_evaluated /= agg.rows;
      agg.cr_gap_percent /= agg.rows;
      agg.spu_time_s /= agg.rows;
      agg.spu_gap_vs_ub_percent /= agg.rows;
      agg.spu_gap_vs_cr_percent /= agg.rows;
    }
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string BenchReport::to_tsv(bool with_times) const {
  std::ostringstream os;
  os << "total\tdecisions\tutilities\tseed\tcr_time_s\tcr_evals\tcr_gap_pct\tcr_eu\tcr_ub\t"
        "spu_time_s\tspu_eu\tspu_err_vs_ub_pct\tspu_err_vs_cr_pct\terror\n";
  for (const BenchRow& r : rows) {
    os << r.spec.total_nodes << '\t' << r.spec.decision_nodes << '\t' << r.spec.utility_nodes
       << '\t' << r.seed << '\t' << (with_times ? fmt(r.cr_time_s) : std::string("-")) << '\t'
       << r.cr_nodes_evaluated << '\t' << fmt(r.cr_gap_percent) << '\t' << fmt(r.cr_eu) << '\t'
       << fmt(r.cr_upper_bound) << '\t' << (with_times ? fmt(r.spu_time_s) : std::string("-"))
       << '\t' << fmt(r.spu_eu) << '\t' << fmt(r.spu_gap_vs_ub_percent) << '\t'
       << fmt(r.spu_gap_vs_cr_percent) << '\t' << (r.ok ? "" : r.error) << '\n';
  }
  os << "# mean\ttotal\tdecisions\trows\tcr_time_s\tcr_evals\tcr_gap_pct\tspu_time_s\t"
        "spu_err_vs_ub_pct\tspu_err_vs_cr_pct\n";
  for (const BenchAggregate& a : aggregates) {
    os << "# mean\t" << a.spec.total_nodes << '\t' << a.spec.decision_nodes << '\t' << a.rows
       << '\t' << (with_times ? fmt(a.cr_time_s) : std::string("-")) << '\t'
       << fmt(a.cr_nodes_evaluated) << '\t' << fmt(a.cr_gap_percent) << '\t'
       << (with_times ? fmt(a.spu_time_s) : std::string("-")) << '\t'
       << fmt(a.spu_gap_vs_ub_percent) << '\t' << fmt(a.spu_gap_vs_cr_percent) << '\n';
  }
  return os.str();
}

std::string BenchReport::to_json(bool with_times) const {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const BenchRow& r : rows) {
    nlohmann::ordered_json j;
    j["total"] = r.spec.total_nodes;
    j["decisions"] = r.spec.decision_nodes;
    j["utilities"] = r.spec.utility_nodes;
    j["seed"] = r.seed;
    if (with_times) j["cr_time_s"] = r.cr_time_s;
    j["cr_evals"] = r.cr_nodes_evaluated;
    j["cr_gap_percent"] = r.cr_gap_percent;
    j["cr_eu"] = r.cr_eu;
    j["cr_upper_bound"] = r.cr_upper_bound;
    j["cr_proven"] = r.cr_proven;
    if (with_times) j["spu_time_s"] = r.spu_time_s;
    j["spu_eu"] = r.spu_eu;
    j["spu_err_vs_ub_percent"] = r.spu_gap_vs_ub_percent;
    j["spu_err_vs_cr_percent"] = r.spu_gap_vs_cr_percent;
    if (!r.ok) j["error"] = r.error;
    doc["rows"].push_back(std::move(j));
  }
  doc["aggregates"] = nlohmann::ordered_json::array();
  for (const BenchAggregate& a : aggregates) {
    nlohmann::ordered_json j;
    j["total"] = a.spec.total_nodes;
    j["decisions"] = a.spec.decision_nodes;
    j["rows"] = a.rows;
    if (with_times) j["cr_time_s"] = a.cr_time_s;
    j["cr_evals"] = a.cr_nodes_evaluated;
    j["cr_gap_percent"] = a.cr_gap_percent;
    if (with_times) j["spu_time_s"] = a.spu_time_s;
    j["spu_err_vs_ub_percent"] = a.spu_gap_vs_ub_percent;
    j["spu_err_vs_cr_percent"] = a.spu_gap_vs_cr_percent;
    doc["aggregates"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace limid
