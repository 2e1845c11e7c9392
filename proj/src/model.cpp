#include "limid/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace limid {

namespace {

constexpr double kRowSumTol = 1e-9;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

const Policy* Strategy::find(NodeId decision) const {
  for (const Policy& p : policies)
    if (p.decision == decision) return &p;
  return nullptr;
}

NodeId InfluenceDiagram::add_node(const std::string& name, NodeKind kind,
                                  const std::vector<NodeId>& parents,
                                  int domain_size) {
  for (NodeId p : parents) {
    if (p < 0 || p >= num_nodes())
      throw Error("unknown parent id " + std::to_string(p) + " for node '" + name + "'");
  }
  DiagramNode n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.name = name;
  n.kind = kind;
  n.parents = parents;
  n.domain_size = domain_size;
  nodes_.push_back(std::move(n));
  cpts_.emplace_back();
  utilities_.emplace_back();
  return nodes_.back().id;
}

NodeId InfluenceDiagram::add_chance(const std::string& name,
                                    const std::vector<NodeId>& parents,
                                    int domain_size) {
  return add_node(name, NodeKind::Chance, parents, domain_size);
}

NodeId InfluenceDiagram::add_decision(const std::string& name,
                                      const std::vector<NodeId>& parents,
                                      int domain_size) {
  return add_node(name, NodeKind::Decision, parents, domain_size);
}

NodeId InfluenceDiagram::add_utility(const std::string& name,
                                     const std::vector<NodeId>& parents) {
  return add_node(name, NodeKind::Utility, parents, 0);
}

void InfluenceDiagram::set_cpt(NodeId owner, std::vector<double> values) {
  if (owner < 0 || owner >= num_nodes()) throw Error("set_cpt: bad node id");
  cpts_[static_cast<std::size_t>(owner)] = Cpt{owner, std::move(values)};
}

void InfluenceDiagram::set_utility(NodeId owner, std::vector<double> values) {
  if (owner < 0 || owner >= num_nodes()) throw Error("set_utility: bad node id");
  utilities_[static_cast<std::size_t>(owner)] = UtilityTable{owner, std::move(values)};
}

const Cpt* InfluenceDiagram::cpt(NodeId id) const {
  const Cpt& c = cpts_.at(static_cast<std::size_t>(id));
  return c.owner >= 0 ? &c : nullptr;
}

const UtilityTable* InfluenceDiagram::utility(NodeId id) const {
  const UtilityTable& u = utilities_.at(static_cast<std::size_t>(id));
  return u.owner >= 0 ? &u : nullptr;
}

std::optional<NodeId> InfluenceDiagram::find(const std::string& name) const {
  for (const DiagramNode& n : nodes_)
    if (n.name == name) return n.id;
  return std::nullopt;
}

std::vector<NodeId> InfluenceDiagram::chance_ids() const {
  std::vector<NodeId> out;
  for (const DiagramNode& n : nodes_)
    if (n.kind == NodeKind::Chance) out.push_back(n.id);
  return out;
}

std::vector<NodeId> InfluenceDiagram::decision_ids() const {
  std::vector<NodeId> out;
  for (const DiagramNode& n : nodes_)
    if (n.kind == NodeKind::Decision) out.push_back(n.id);
  return out;
}

std::vector<NodeId> InfluenceDiagram::utility_ids() const {
  std::vector<NodeId> out;
  for (const DiagramNode& n : nodes_)
    if (n.kind == NodeKind::Utility) out.push_back(n.id);
  return out;
}

std::vector<std::vector<NodeId>> InfluenceDiagram::children() const {
  std::vector<std::vector<NodeId>> out(nodes_.size());
  for (const DiagramNode& n : nodes_)
    for (NodeId p : n.parents) out[static_cast<std::size_t>(p)].push_back(n.id);
  return out;
}

std::vector<NodeId> InfluenceDiagram::ancestors(NodeId id) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack(node(id).parents);
  std::vector<NodeId> out;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    out.push_back(v);
    for (NodeId p : node(v).parents) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t InfluenceDiagram::parent_config_count(NodeId id) const {
  std::uint64_t c = 1;
  for (NodeId p : node(id).parents)
    c *= static_cast<std::uint64_t>(node(p).domain_size);
  return c;
}

std::uint64_t InfluenceDiagram::config_index(NodeId id,
                                             const std::vector<int>& parent_values) const {
  const DiagramNode& n = node(id);
  assert(parent_values.size() == n.parents.size());
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < n.parents.size(); ++i)
    idx = idx * static_cast<std::uint64_t>(node(n.parents[i]).domain_size) +
          static_cast<std::uint64_t>(parent_values[i]);
  return idx;
}

std::vector<int> InfluenceDiagram::config_values(NodeId id, std::uint64_t index) const {
  const DiagramNode& n = node(id);
  std::vector<int> vals(n.parents.size(), 0);
  for (std::size_t i = n.parents.size(); i-- > 0;) {
    const std::uint64_t card = static_cast<std::uint64_t>(node(n.parents[i]).domain_size);
    vals[i] = static_cast<int>(index % card);
    index /= card;
  }
  return vals;
}

// Validation ------------------------------------------------------------

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const ValidationIssue& i : issues) os << i.message << "\n";
  return os.str();
}

ValidationReport validate_diagram(const InfluenceDiagram& d) {
  ValidationReport report;
  auto add = [&](NodeId n, std::string msg) {
    report.issues.push_back({n, std::move(msg)});
  };

  std::map<std::string, int> name_count;
  for (const DiagramNode& n : d.nodes()) ++name_count[n.name];
  for (const auto& [name, count] : name_count)
    if (count > 1) add(-1, "duplicate node name '" + name + "'");

  // Cycle check (Kahn).
  {
    std::vector<int> indeg(static_cast<std::size_t>(d.num_nodes()), 0);
    for (const DiagramNode& n : d.nodes())
      indeg[static_cast<std::size_t>(n.id)] = static_cast<int>(n.parents.size());
    auto kids = d.children();
    std::vector<NodeId> queue;
    for (const DiagramNode& n : d.nodes())
      if (indeg[static_cast<std::size_t>(n.id)] == 0) queue.push_back(n.id);
    std::size_t popped = 0;
    while (popped < queue.size()) {
      NodeId v = queue[popped++];
      for (NodeId c : kids[static_cast<std::size_t>(v)])
        if (--indeg[static_cast<std::size_t>(c)] == 0) queue.push_back(c);
    }
    if (popped != static_cast<std::size_t>(d.num_nodes()))
      add(-1, "diagram contains a cycle");
  }

  auto kids = d.children();
  for (const DiagramNode& n : d.nodes()) {
    std::set<NodeId> pset(n.parents.begin(), n.parents.end());
    if (pset.size() != n.parents.size())
      add(n.id, "node '" + n.name + "' lists a parent twice");

    switch (n.kind) {
      case NodeKind::Utility: {
        if (!kids[static_cast<std::size_t>(n.id)].empty())
          add(n.id, "utility node '" + n.name + "' has children");
        const UtilityTable* t = d.utility(n.id);
        if (!t) {
          add(n.id, "utility node '" + n.name + "' has no utility table");
        } else if (t->values.size() != d.parent_config_count(n.id)) {
          add(n.id, "utility table of '" + n.name + "' has " +
                        std::to_string(t->values.size()) + " entries, expected " +
                        std::to_string(d.parent_config_count(n.id)));
        }
        if (d.cpt(n.id)) add(n.id, "utility node '" + n.name + "' has a cpt");
        break;
      }
      case NodeKind::Chance: {
        if (n.domain_size < 2)
          add(n.id, "chance node '" + n.name + "' has domain size " +
                        std::to_string(n.domain_size) + " < 2");
        const Cpt* c = d.cpt(n.id);
        if (!c) {
          add(n.id, "chance node '" + n.name + "' has no cpt");
          break;
        }
        const std::uint64_t rows = d.parent_config_count(n.id);
        const std::uint64_t want = rows * static_cast<std::uint64_t>(std::max(n.domain_size, 0));
        if (c->values.size() != want) {
          add(n.id, "cpt of '" + n.name + "' has " + std::to_string(c->values.size()) +
                        " entries, expected " + std::to_string(want));
          break;
        }
        for (std::uint64_t j = 0; j < rows; ++j) {
          double s = 0;
          bool in_range = true;
          for (int v = 0; v < n.domain_size; ++v) {
            const double x = c->values[j * static_cast<std::uint64_t>(n.domain_size) +
                                       static_cast<std::uint64_t>(v)];
            s += x;
            if (x < -1e-12 || x > 1.0 + 1e-12) in_range = false;
          }
          if (!in_range)
            add(n.id, "cpt row " + std::to_string(j) + " of '" + n.name +
                          "' has an entry outside [0,1]");
          if (std::abs(s - 1.0) > kRowSumTol)
            add(n.id, "cpt row " + std::to_string(j) + " of '" + n.name + "' sums to " +
                          format_double(s) + " != 1");
        }
        if (d.utility(n.id)) add(n.id, "chance node '" + n.name + "' has a utility table");
        break;
      }
      case NodeKind::Decision: {
        if (n.domain_size < 2)
          add(n.id, "decision node '" + n.name + "' has domain size " +
                        std::to_string(n.domain_size) + " < 2");
        if (d.cpt(n.id)) add(n.id, "decision node '" + n.name + "' has a cpt");
        if (d.utility(n.id)) add(n.id, "decision node '" + n.name + "' has a utility table");
        break;
      }
    }
  }
  return report;
}

// Strategy helpers ------------------------------------------------------

bool is_pure(const Strategy& strategy) {
  for (const Policy& p : strategy.policies)
    for (double v : p.table)
      if (v != 0.0 && v != 1.0) return false;
  return true;
}

ValidationReport validate_strategy(const InfluenceDiagram& d, const Strategy& s) {
  ValidationReport report;
  auto add = [&](NodeId n, std::string msg) {
    report.issues.push_back({n, std::move(msg)});
  };
  std::vector<NodeId> decisions = d.decision_ids();
  std::set<NodeId> covered;
  for (const Policy& p : s.policies) {
    if (p.decision < 0 || p.decision >= d.num_nodes() ||
        d.node(p.decision).kind != NodeKind::Decision) {
      add(p.decision, "policy attached to a non-decision node");
      continue;
    }
    covered.insert(p.decision);
    const DiagramNode& n = d.node(p.decision);
    const std::uint64_t rows = d.parent_config_count(p.decision);
    if (p.table.size() != rows * static_cast<std::uint64_t>(n.domain_size)) {
      add(p.decision, "policy for '" + n.name + "' has wrong size");
      continue;
    }
    for (std::uint64_t j = 0; j < rows; ++j) {
      double sum = 0;
      for (int a = 0; a < n.domain_size; ++a) {
        const double v = p.table[j * static_cast<std::uint64_t>(n.domain_size) +
                                 static_cast<std::uint64_t>(a)];
        if (v < -1e-12 || v > 1.0 + 1e-12)
          add(p.decision, "policy entry outside [0,1] for '" + n.name + "'");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        add(p.decision, "policy row " + std::to_string(j) + " for '" + n.name +
                            "' sums to " + format_double(sum) + " != 1");
    }
  }
  for (NodeId dec : decisions)
    if (!covered.count(dec))
      add(dec, "strategy has no policy for decision '" + d.node(dec).name + "'");
  if (covered.size() != s.policies.size())
    add(-1, "strategy lists a decision twice");
  return report;
}

Strategy first_lexicographic_strategy(const InfluenceDiagram& d) {
  Strategy s;
  for (NodeId dec : d.decision_ids()) {
    const DiagramNode& n = d.node(dec);
    const std::uint64_t rows = d.parent_config_count(dec);
    Policy p;
    p.decision = dec;
    p.table.assign(rows * static_cast<std::uint64_t>(n.domain_size), 0.0);
    for (std::uint64_t j = 0; j < rows; ++j)
      p.table[j * static_cast<std::uint64_t>(n.domain_size)] = 1.0;
    s.policies.push_back(std::move(p));
  }
  return s;
}

Strategy pure_strategy_from_choices(const InfluenceDiagram& d,
                                    const std::vector<std::vector<int>>& choices) {
  Strategy s;
  const std::vector<NodeId> decisions = d.decision_ids();
  if (choices.size() != decisions.size())
    throw Error("pure_strategy_from_choices: wrong number of decisions");
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const DiagramNode& n = d.node(decisions[i]);
    const std::uint64_t rows = d.parent_config_count(decisions[i]);
    if (choices[i].size() != rows)
      throw Error("pure_strategy_from_choices: wrong number of rows for '" + n.name + "'");
    Policy p;
    p.decision = decisions[i];
    p.table.assign(rows * static_cast<std::uint64_t>(n.domain_size), 0.0);
    for (std::uint64_t j = 0; j < rows; ++j) {
      const int a = choices[i][j];
      if (a < 0 || a >= n.domain_size)
        throw Error("pure_strategy_from_choices: alternative out of range");
      p.table[j * static_cast<std::uint64_t>(n.domain_size) + static_cast<std::uint64_t>(a)] = 1.0;
    }
    s.policies.push_back(std::move(p));
  }
  return s;
}

long double count_pure_strategies(const InfluenceDiagram& d) {
  long double count = 1.0L;
  for (NodeId dec : d.decision_ids()) {
    const long double alts = d.node(dec).domain_size;
    const std::uint64_t rows = d.parent_config_count(dec);
    for (std::uint64_t j = 0; j < rows; ++j) count *= alts;
  }
  return count;
}

Strategy pure_strategy_from_ordinal(const InfluenceDiagram& d, std::uint64_t ordinal) {
  const std::vector<NodeId> decisions = d.decision_ids();
  // Radix per (decision, row) digit, decision-major then row order; the
  // last digit is least significant, so ordinal order is lexicographic.
  std::vector<std::vector<int>> choices(decisions.size());
  for (std::size_t i = decisions.size(); i-- > 0;) {
    const std::uint64_t rows = d.parent_config_count(decisions[i]);
    const std::uint64_t card = static_cast<std::uint64_t>(d.node(decisions[i]).domain_size);
    choices[i].assign(rows, 0);
    for (std::uint64_t j = rows; j-- > 0;) {
      choices[i][j] = static_cast<int>(ordinal % card);
      ordinal /= card;
    }
  }
  return pure_strategy_from_choices(d, choices);
}

// Expected utility ------------------------------------------------------

double expected_utility_naive(const InfluenceDiagram& d, const Strategy& strategy,
                              std::uint64_t config_cap) {
  std::vector<NodeId> xs;  // chance and decision nodes, ascending
  for (const DiagramNode& n : d.nodes())
    if (n.kind != NodeKind::Utility) xs.push_back(n.id);

  long double total_configs = 1.0L;
  for (NodeId v : xs) total_configs *= d.node(v).domain_size;
  if (total_configs > static_cast<long double>(config_cap))
    throw SizeLimitError("joint configuration space exceeds the enumeration cap (" +
                         std::to_string(config_cap) + ")");

  std::vector<int> value(static_cast<std::size_t>(d.num_nodes()), 0);
  const std::vector<NodeId> utils = d.utility_ids();

  auto parent_row = [&](NodeId id) {
    std::uint64_t idx = 0;
    const DiagramNode& n = d.node(id);
    for (NodeId p : n.parents)
      idx = idx * static_cast<std::uint64_t>(d.node(p).domain_size) +
            static_cast<std::uint64_t>(value[static_cast<std::size_t>(p)]);
    return idx;
  };

  double acc = 0.0;
  const std::uint64_t total = static_cast<std::uint64_t>(total_configs);
  for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
    // Decode cfg into node values (last listed node varies fastest).
    std::uint64_t rest = cfg;
    for (std::size_t i = xs.size(); i-- > 0;) {
      const std::uint64_t card = static_cast<std::uint64_t>(d.node(xs[i]).domain_size);
      value[static_cast<std::size_t>(xs[i])] = static_cast<int>(rest % card);
      rest /= card;
    }
    double w = 1.0;
    for (NodeId v : xs) {
      const DiagramNode& n = d.node(v);
      const std::uint64_t j = parent_row(v);
      const std::uint64_t cell = j * static_cast<std::uint64_t>(n.domain_size) +
                                 static_cast<std::uint64_t>(value[static_cast<std::size_t>(v)]);
      if (n.kind == NodeKind::Chance) {
        w *= d.cpt(v)->values[cell];
      } else {
        const Policy* p = strategy.find(v);
        if (!p) throw Error("strategy misses decision '" + n.name + "'");
        w *= p->table[cell];
      }
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    double u = 0.0;
    for (NodeId uid : utils) u += d.utility(uid)->values[parent_row(uid)];
    acc += w * u;
  }
  return acc;
}

EuEvaluator::EuEvaluator(const InfluenceDiagram& d) : diagram_(&d) {
  std::set<NodeId> needed;
  for (NodeId uid : d.utility_ids()) {
    Plan plan;
    plan.utility = uid;
    const std::vector<NodeId> rel = d.ancestors(uid);
    std::vector<std::vector<int>> scopes;
    for (NodeId v : rel) {
      const DiagramNode& n = d.node(v);
      std::vector<int> table_vars(n.parents.begin(), n.parents.end());
      table_vars.push_back(v);
      std::vector<int> cards;
      for (NodeId p : n.parents) cards.push_back(d.node(p).domain_size);
      cards.push_back(n.domain_size);
      if (n.kind == NodeKind::Chance) {
        plan.fixed.push_back(Factor::from_table(table_vars, cards, d.cpt(v)->values));
      } else {
        plan.decisions.push_back(v);
        needed.insert(v);
      }
      scopes.push_back(table_vars);
    }
    {
      const DiagramNode& n = d.node(uid);
      std::vector<int> table_vars(n.parents.begin(), n.parents.end());
      std::vector<int> cards;
      for (NodeId p : n.parents) cards.push_back(d.node(p).domain_size);
      plan.fixed.push_back(Factor::from_table(table_vars, cards, d.utility(uid)->values));
      scopes.push_back(table_vars);
    }
    plan.elim_order = min_degree_order(scopes, {});
    plans_.push_back(std::move(plan));
  }
  needed_decisions_.assign(needed.begin(), needed.end());
}

double EuEvaluator::operator()(const Strategy& strategy) const {
  const InfluenceDiagram& d = *diagram_;
  std::map<NodeId, Factor> policy_factors;
  for (NodeId dec : needed_decisions_) {
    const Policy* p = strategy.find(dec);
    if (!p) throw Error("strategy misses decision '" + d.node(dec).name + "'");
    const DiagramNode& n = d.node(dec);
    std::vector<int> table_vars(n.parents.begin(), n.parents.end());
    table_vars.push_back(dec);
    std::vector<int> cards;
    for (NodeId pp : n.parents) cards.push_back(d.node(pp).domain_size);
    cards.push_back(n.domain_size);
    policy_factors.emplace(dec, Factor::from_table(table_vars, cards, p->table));
  }
  double total = 0.0;
  for (const Plan& plan : plans_) {
    std::vector<Factor> fs = plan.fixed;
    for (NodeId dec : plan.decisions) fs.push_back(policy_factors.at(dec));
    total += contract(std::move(fs), plan.elim_order);
  }
  return total;
}

double expected_utility(const InfluenceDiagram& d, const Strategy& strategy) {
  return EuEvaluator(d)(strategy);
}

// Brute-force MEU --------------------------------------------------------

namespace {

std::uint64_t checked_strategy_count(const InfluenceDiagram& d, std::uint64_t cap) {
  const long double count = count_pure_strategies(d);
  if (count > static_cast<long double>(cap))
    throw SizeLimitError("pure-strategy space exceeds the cap (" + std::to_string(cap) + ")");
  return static_cast<std::uint64_t>(count);
}

}  // namespace

std::pair<Strategy, double> brute_force_meu_serial(const InfluenceDiagram& d,
                                                   std::uint64_t strategy_cap) {
  const std::uint64_t total = checked_strategy_count(d, strategy_cap);
  const EuEvaluator eval(d);
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_ord = 0;
  for (std::uint64_t ord = 0; ord < total; ++ord) {
    const double e = eval(pure_strategy_from_ordinal(d, ord));
    if (e > best) {
      best = e;
      best_ord = ord;
    }
  }
  return {pure_strategy_from_ordinal(d, best_ord), best};
}

std::pair<Strategy, double> brute_force_meu(const InfluenceDiagram& d,
                                            std::uint64_t strategy_cap, int threads) {
#ifdef _OPENMP
  if (threads > 1) {
    const std::uint64_t total = checked_strategy_count(d, strategy_cap);
    const EuEvaluator eval(d);
    const int nt = threads;
    std::vector<double> tbest(static_cast<std::size_t>(nt),
                              -std::numeric_limits<double>::infinity());
    std::vector<std::uint64_t> tord(static_cast<std::size_t>(nt), 0);
#pragma omp parallel num_threads(nt)
    {
      const int tid = omp_get_thread_num();
      double best = -std::numeric_limits<double>::infinity();
      std::uint64_t best_ord = 0;
#pragma omp for schedule(static)
      for (std::int64_t ord = 0; ord < static_cast<std::int64_t>(total); ++ord) {
        const double e = eval(pure_strategy_from_ordinal(d, static_cast<std::uint64_t>(ord)));
        const std::uint64_t o = static_cast<std::uint64_t>(ord);
        if (e > best || (e == best && o < best_ord)) {
          best = e;
          best_ord = o;
        }
      }
      tbest[static_cast<std::size_t>(tid)] = best;
      tord[static_cast<std::size_t>(tid)] = best_ord;
    }
    // Deterministic merge: strictly better value, or equal value with the
    // smaller ordinal, exactly reproduces the serial sweep.
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_ord = 0;
    bool have = false;
    for (int t = 0; t < nt; ++t) {
      if (std::isinf(tbest[static_cast<std::size_t>(t)]) &&
          tbest[static_cast<std::size_t>(t)] < 0)
        continue;
      if (!have || tbest[static_cast<std::size_t>(t)] > best ||
          (tbest[static_cast<std::size_t>(t)] == best &&
           tord[static_cast<std::size_t>(t)] < best_ord)) {
        best = tbest[static_cast<std::size_t>(t)];
        best_ord = tord[static_cast<std::size_t>(t)];
        have = true;
      }
    }
    if (!have) return brute_force_meu_serial(d, strategy_cap);
    return {pure_strategy_from_ordinal(d, best_ord), best};
  }
#else
  (void)threads;
#endif
  return brute_force_meu_serial(d, strategy_cap);
}

// Normalization ----------------------------------------------------------

std::pair<double, double> global_utility_range(const InfluenceDiagram& d) {
  bool any = false;
  double lo = 0, hi = 0;
  for (NodeId uid : d.utility_ids()) {
    for (double v : d.utility(uid)->values) {
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!any) throw TrivialDiagramError("diagram has no utility entries", 0.0, 0);
  return {lo, hi};
}

std::pair<InfluenceDiagram, NormalizationInfo> normalize_utilities(
    const InfluenceDiagram& d) {
  const auto [lo, hi] = global_utility_range(d);
  const int count = static_cast<int>(d.utility_ids().size());
  if (!(lo < hi))
    throw TrivialDiagramError("all utility entries are equal; every strategy is optimal",
                              lo, count);
  InfluenceDiagram out = d;
  for (NodeId uid : out.utility_ids()) {
    std::vector<double> values = out.utility(uid)->values;
    for (double& v : values) v = (v - lo) / (hi - lo);
    out.set_utility(uid, std::move(values));
  }
  return {std::move(out), NormalizationInfo{lo, hi, count}};
}

double denormalize_eu(double eu_normalized, const NormalizationInfo& info) {
  return eu_normalized * (info.f_hi - info.f_lo) +
         static_cast<double>(info.utility_count) * info.f_lo;
}

}  // namespace limid
