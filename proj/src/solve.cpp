#include "limid/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "limid/credal.hpp"

namespace limid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gap_percent_of(double ub, double lb) {
  if (!(std::isfinite(ub) && std::isfinite(lb))) return kInf;
  const double denom = std::max(std::abs(ub), 1e-12);
  return 100.0 * (ub - lb) / denom;
}

struct Node {
  std::int64_t id = 0;
  double bound = kInf;  // parent LP bound (root: +inf)
  std::vector<std::pair<int, int>> fixes;
};

// Rounds the LP point group-wise: the largest binary of every simplex
// group wins, ties toward the smaller alternative.
Strategy round_groupwise(const MilpProblem& milp, const std::vector<double>& x) {
  Strategy s;
  for (const DecisionGroupMeta& m : milp.decisions) {
    Policy p;
    p.decision = m.node;
    p.table.assign(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.domain), 0.0);
    for (int j = 0; j < m.rows; ++j) {
      int arg = 0;
      double best = -kInf;
      for (int a = 0; a < m.domain; ++a) {
        const double v = x[static_cast<std::size_t>(m.first_var + j * m.domain + a)];
        if (v > best) {
          best = v;
          arg = a;
        }
      }
      p.table[static_cast<std::size_t>(j * m.domain + arg)] = 1.0;
    }
    s.policies.push_back(std::move(p));
  }
  return s;
}

}  // namespace

SolveResult branch_and_bound(const MilpProblem& milp, const SolveOptions& options,
                             const std::optional<Incumbent>& incumbent0,
                             const NormalizationInfo& info,
                             const std::function<double(const Strategy&)>& evaluate) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  LpProblem lp;
  lp.num_vars = static_cast<int>(milp.variables.size());
  lp.lower.resize(milp.variables.size());
  lp.upper.resize(milp.variables.size());
  for (const MilpVariable& v : milp.variables) {
    lp.lower[static_cast<std::size_t>(v.index)] = v.lower;
    lp.upper[static_cast<std::size_t>(v.index)] = v.upper;
  }
  lp.constraints = milp.constraints;
  lp.objective = milp.objective;
  lp.basis_hint = milp.lp_basis_hint;
  const std::vector<double> base_lower = lp.lower;
  const std::vector<double> base_upper = lp.upper;

  SimplexOptions sopt;
  sopt.threads = options.threads;

  const std::vector<int> binaries = milp.binary_indices();

  // Simplex-group membership, used to propagate implied fixes when
  // branching: fixing a binary to 1 zeroes its whole group, and fixing
  // one side of a two-member group decides the other.
  std::map<int, std::vector<int>> group_of;
  {
    auto add_group = [&](int first, int count) {
      std::vector<int> members;
      for (int k = 0; k < count; ++k) members.push_back(first + k);
      for (int m : members) group_of[m] = members;
    };
    for (const DecisionGroupMeta& m : milp.decisions)
      for (int j = 0; j < m.rows; ++j) add_group(m.first_var + j * m.domain, m.domain);
    for (const VertexGroupMeta& m : milp.vertex_sets) {
      int off = 0;
      for (int per_row : m.vertices_per_row) {
        add_group(m.first_var + off, per_row);
        off += per_row;
      }
    }
  }
  auto with_implied = [&](std::vector<std::pair<int, int>> fixes, int var, int val) {
    fixes.emplace_back(var, val);
    auto it = group_of.find(var);
    if (it != group_of.end()) {
      const std::vector<int>& members = it->second;
      if (val == 1) {
        for (int m : members)
          if (m != var) fixes.emplace_back(m, 0);
      } else if (members.size() == 2) {
        fixes.emplace_back(members[0] == var ? members[1] : members[0], 1);
      }
    }
    return fixes;
  };

  std::optional<Strategy> best_strategy;
  double lb = -kInf;
  if (incumbent0) {
    best_strategy = incumbent0->strategy;
    lb = incumbent0->value;
  }

  // Open nodes.  BestBound pops the largest parent bound (tie: oldest id);
  // DepthFirst pops the most recent node.
  auto cmp = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  std::vector<Node> stack;
  std::multiset<double> open_bounds;
  std::int64_t next_id = 0;

  auto push_node = [&](Node n) {
    open_bounds.insert(n.bound);
    if (options.search == SearchOrder::BestBound)
      heap.push(std::move(n));
    else
      stack.push_back(std::move(n));
  };
  auto pop_node = [&]() -> Node {
    Node n;
    if (options.search == SearchOrder::BestBound) {
      n = heap.top();
      heap.pop();
    } else {
      n = stack.back();
      stack.pop_back();
    }
    open_bounds.erase(open_bounds.find(n.bound));
    return n;
  };
  auto open_empty = [&] {
    return options.search == SearchOrder::BestBound ? heap.empty() : stack.empty();
  };
  auto open_max = [&]() -> double {
    return open_bounds.empty() ? -kInf : *open_bounds.rbegin();
  };
  auto current_ub = [&]() -> double {
    double ub = open_bounds.empty() ? lb : std::max(lb, open_max());
    if (!std::isfinite(ub) && !open_bounds.empty()) ub = open_max();
    return ub;
  };

  auto log_line = [&](std::int64_t node_id, double bound, double ub) {
    if (!options.log) return;
    char buf[256];
    const double g = gap_percent_of(ub, lb);
    std::snprintf(buf, sizeof(buf), "%.6f\t%lld\t%.9g\t%.9g\t%.9g\t%.9g\n", elapsed(),
                  static_cast<long long>(node_id), bound, lb, ub, g);
    (*options.log) << buf;
  };

  push_node(Node{next_id++, kInf, {}});
  std::int64_t nodes_evaluated = 0;
  SolveStatus status = SolveStatus::Proven;
  bool tolerance_met = false;

  while (!open_empty()) {
    if (options.node_limit && nodes_evaluated >= std::max<std::int64_t>(1, *options.node_limit)) {
      status = SolveStatus::Stopped;
      break;
    }
    if (options.time_limit_s && elapsed() >= *options.time_limit_s) {
      status = SolveStatus::Stopped;
      break;
    }
    Node node = pop_node();
    if (node.bound <= lb + 1e-9) continue;  // bound inherited from the parent

    for (const auto& [var, val] : node.fixes) {
      lp.lower[static_cast<std::size_t>(var)] = static_cast<double>(val);
      lp.upper[static_cast<std::size_t>(var)] = static_cast<double>(val);
    }
    LpSolution sol = solve_lp(lp, sopt);
    for (const auto& [var, val] : node.fixes) {
      lp.lower[static_cast<std::size_t>(var)] = base_lower[static_cast<std::size_t>(var)];
      lp.upper[static_cast<std::size_t>(var)] = base_upper[static_cast<std::size_t>(var)];
    }
    ++nodes_evaluated;

    if (sol.status == LpStatus::Infeasible) {
      log_line(node.id, -kInf, current_ub());
      continue;
    }
    // Child bounds can exceed the parent bound only through roundoff.
    const double bound = std::min(sol.objective, node.bound);

    // Anytime stop: the requested gap is already certified.
    if (std::isfinite(lb)) {
      const double ub = std::max(current_ub(), bound);
      if (gap_percent_of(ub, lb) <= options.gap_tolerance_percent) {
        log_line(node.id, bound, ub);
        open_bounds.insert(bound);  // the node stays conceptually open
        tolerance_met = true;
        break;
      }
    }

    if (bound <= lb + 1e-9) {
      log_line(node.id, bound, current_ub());
      continue;
    }

    // Integral on all binaries?
    int branch_var = -1;
    double branch_frac = -1.0;
    for (int b : binaries) {
      const double v = sol.values[static_cast<std::size_t>(b)];
      const double frac = std::min(v, 1.0 - v);
      if (frac > 1e-6 && frac > branch_frac) {
        branch_frac = frac;
        branch_var = b;
      }
    }

    if (branch_var < 0) {
      Strategy s = extract_strategy(milp, sol.values);
      const double value = evaluate ? evaluate(s) : bound;
      if (value > lb) {
        lb = value;
        best_strategy = std::move(s);
      }
      log_line(node.id, bound, current_ub());
      continue;
    }

    // Cheap primal repair: round the fractional point and evaluate it.
    if (evaluate) {
      Strategy rounded = round_groupwise(milp, sol.values);
      const double value = evaluate(rounded);
      if (value > lb) {
        lb = value;
        best_strategy = std::move(rounded);
      }
      if (bound <= lb + 1e-9) {
        log_line(node.id, bound, current_ub());
        continue;
      }
    }

    Node one{next_id++, bound, with_implied(node.fixes, branch_var, 1)};
    Node zero{next_id++, bound, with_implied(node.fixes, branch_var, 0)};
    if (options.search == SearchOrder::DepthFirst) {
      // LIFO: push the zero child first so the one-branch is explored first.
      push_node(std::move(zero));
      push_node(std::move(one));
    } else {
      push_node(std::move(one));
      push_node(std::move(zero));
    }
    log_line(node.id, bound, current_ub());
  }

  double ub;
  if (tolerance_met || status == SolveStatus::Stopped) {
    ub = current_ub();
    if (!tolerance_met && status == SolveStatus::Stopped && !std::isfinite(ub)) ub = kInf;
    if (status != SolveStatus::Stopped) status = SolveStatus::Proven;
  } else {
    ub = lb;  // natural termination: the open set is exhausted
  }

  if (!best_strategy)
    throw SolverError(
        "branch-and-bound finished without an incumbent; provide a warm start or an evaluator");

  SolveResult result;
  result.strategy = *best_strategy;
  result.gap_percent = std::max(0.0, gap_percent_of(ub, lb));
  if (ub <= lb) result.gap_percent = 0.0;
  result.eu = denormalize_eu(lb, info);
  result.upper_bound = denormalize_eu(std::max(ub, lb), info);
  result.nodes_evaluated = nodes_evaluated;
  result.status = status;
  return result;
}

SpuResult spu(const InfluenceDiagram& diagram, const Strategy& init, int max_sweeps,
              const SpuOptions& options, std::vector<double>* trace) {
  if (!is_pure(init)) throw ContractViolation("spu requires a pure initial strategy");
  const EuEvaluator eval(diagram);

  std::vector<NodeId> order = options.sweep_order;
  if (order.empty()) order = diagram.decision_ids();
  for (NodeId v : order)
    if (diagram.node(v).kind != NodeKind::Decision)
      throw ContractViolation("spu sweep order contains a non-decision node");

  SpuResult out;
  out.strategy = init;
  out.eu = eval(init);
  out.evaluations = 1;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (NodeId dec : order) {
      Policy* policy = nullptr;
      for (Policy& p : out.strategy.policies)
        if (p.decision == dec) policy = &p;
      if (!policy) throw ContractViolation("initial strategy misses a decision node");
      const int domain = diagram.node(dec).domain_size;
      const std::uint64_t rows = diagram.parent_config_count(dec);
      for (std::uint64_t j = 0; j < rows; ++j) {
        int current = 0;
        for (int a = 0; a < domain; ++a)
          if (policy->table[j * static_cast<std::uint64_t>(domain) +
                            static_cast<std::uint64_t>(a)] == 1.0)
            current = a;
        int best_alt = current;
        double best_eu = out.eu;
        for (int a = 0; a < domain; ++a) {
          if (a == current) continue;
          for (int k = 0; k < domain; ++k)
            policy->table[j * static_cast<std::uint64_t>(domain) + static_cast<std::uint64_t>(k)] =
                (k == a) ? 1.0 : 0.0;
          const double e = eval(out.strategy);
          ++out.evaluations;
          const bool better =
              options.prefer_first_on_tie ? (e > best_eu || (e == best_eu && a < best_alt))
                                          : (e > best_eu);
          if (better) {
            best_eu = e;
            best_alt = a;
          }
        }
        for (int k = 0; k < domain; ++k)
          policy->table[j * static_cast<std::uint64_t>(domain) + static_cast<std::uint64_t>(k)] =
              (k == best_alt) ? 1.0 : 0.0;
        if (best_alt != current) changed = true;
        out.eu = best_eu;
        if (trace) trace->push_back(out.eu);
      }
    }
    out.sweeps = sweep + 1;
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  return out;
}

SolveResult solve_meu(const InfluenceDiagram& diagram, const SolveOptions& options) {
  const std::vector<NodeId> utils = diagram.utility_ids();
  if (utils.empty()) {
    SolveResult r;
    r.strategy = first_lexicographic_strategy(diagram);
    r.eu = 0.0;
    r.upper_bound = 0.0;
    r.gap_percent = 0.0;
    r.nodes_evaluated = 0;
    r.status = SolveStatus::Proven;
    return r;
  }

  InfluenceDiagram normalized;
  NormalizationInfo info;
  try {
    auto [nd, ni] = normalize_utilities(diagram);
    normalized = std::move(nd);
    info = ni;
  } catch (const TrivialDiagramError& e) {
    SolveResult r;
    r.strategy = first_lexicographic_strategy(diagram);
    r.eu = static_cast<double>(e.utility_count) * e.value;
    r.upper_bound = r.eu;
    r.gap_percent = 0.0;
    r.nodes_evaluated = 0;
    r.status = SolveStatus::Proven;
    return r;
  }

  const CredalNetwork net = limid_to_credal(normalized);
  std::vector<PrecedenceOrdering> orderings;
  orderings.reserve(net.queries().size());
  for (const CredalQuery& q : net.queries())
    orderings.push_back(choose_precedence_ordering(net, q.node));
  const MilpProblem milp = linearize(generate_bilinear(net, orderings));

  const EuEvaluator eval(normalized);
  std::optional<Incumbent> incumbent;
  if (options.warm_start_spu) {
    const SpuResult warm = spu(normalized, first_lexicographic_strategy(normalized));
    incumbent = Incumbent{warm.strategy, warm.eu};
  }
  return branch_and_bound(milp, options, incumbent, info,
                          [&eval](const Strategy& s) { return eval(s); });
}

}  // namespace limid
