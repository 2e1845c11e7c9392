#include "limid/reform.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace limid {

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  if (out.empty()) out = "x";
  return out;
}

// Unique, export-safe node names.
std::vector<std::string> safe_names(const CredalNetwork& net) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const CredalNode& n : net.nodes()) {
    std::string s = sanitize(n.name);
    if (used.count(s)) s += "_n" + std::to_string(n.id);
    used.insert(s);
    names.push_back(std::move(s));
  }
  return names;
}

// d-separation of x from q given z, via the moral graph of the ancestral
// closure of {x, q} and z.
bool d_separated(const CredalNetwork& net, NodeId x, NodeId q,
                 const std::vector<NodeId>& z) {
  if (x == q) return false;
  const std::size_t n = static_cast<std::size_t>(net.num_nodes());
  std::vector<char> in_z(n, 0);
  for (NodeId v : z) in_z[static_cast<std::size_t>(v)] = 1;

  std::vector<char> in_a(n, 0);
  std::vector<NodeId> stack{x, q};
  for (NodeId v : z) stack.push_back(v);
  for (NodeId v : stack) in_a[static_cast<std::size_t>(v)] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId p : net.node(v).parents) {
      if (!in_a[static_cast<std::size_t>(p)]) {
        in_a[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }

  std::vector<std::set<NodeId>> adj(n);
  auto connect = [&](NodeId a, NodeId b) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  };
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (!in_a[static_cast<std::size_t>(v)]) continue;
    const auto& parents = net.node(v).parents;
    for (NodeId p : parents) connect(v, p);
    for (std::size_t i = 0; i < parents.size(); ++i)
      for (std::size_t j = i + 1; j < parents.size(); ++j)
        connect(parents[i], parents[j]);
  }

  std::vector<char> seen(n, 0);
  std::vector<NodeId> queue{x};
  seen[static_cast<std::size_t>(x)] = 1;
  std::size_t head = 0;
  while (head < queue.size()) {
    const NodeId v = queue[head++];
    for (NodeId u : adj[static_cast<std::size_t>(v)]) {
      if (u == q) return false;
      if (seen[static_cast<std::size_t>(u)] || in_z[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      queue.push_back(u);
    }
  }
  return true;
}

// Iterated removal of frontier members that are d-separated from the
// query given the rest; scan order is ascending id, restarted after each
// removal so the result is deterministic.
std::vector<NodeId> refine_frontier(const CredalNetwork& net, std::vector<NodeId> frontier,
                                    NodeId query) {
  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      std::vector<NodeId> rest;
      rest.reserve(frontier.size() - 1);
      for (std::size_t k = 0; k < frontier.size(); ++k)
        if (k != i) rest.push_back(frontier[k]);
      if (d_separated(net, frontier[i], query, rest)) {
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  return frontier;
}

const PreciseSpec& precise_spec_of(const CredalNetwork& net, NodeId id) {
  const CredalNode& n = net.node(id);
  const auto* p = std::get_if<PreciseSpec>(&n.spec);
  if (!p)
    throw ContractViolation("query node '" + n.name + "' does not carry a precise table");
  return *p;
}

}  // namespace

int MilpProblem::count(ConstraintKind kind) const {
  int c = 0;
  for (const LinearConstraint& lc : constraints)
    if (lc.kind == kind) ++c;
  return c;
}

std::vector<int> MilpProblem::binary_indices() const {
  std::vector<int> out;
  for (const MilpVariable& v : variables)
    if (v.integral) out.push_back(v.index);
  return out;
}

PrecedenceOrdering choose_precedence_ordering(const CredalNetwork& net, NodeId query) {
  const std::vector<NodeId> rel = relevant_ancestors(net, query);
  std::set<NodeId> rel_set(rel.begin(), rel.end());

  std::map<NodeId, int> rem_children;     // unprocessed relevant children
  std::map<NodeId, int> waiting_parents;  // unprocessed parents
  const auto kids = net.children();
  for (NodeId v : rel) {
    int rc = 0;
    for (NodeId c : kids[static_cast<std::size_t>(v)])
      if (rel_set.count(c)) ++rc;
    rem_children[v] = rc;
    waiting_parents[v] = static_cast<int>(net.node(v).parents.size());
  }

  std::set<NodeId> ready;
  for (NodeId v : rel)
    if (waiting_parents[v] == 0) ready.insert(v);
  std::set<NodeId> frontier;

  PrecedenceOrdering out;
  out.query = query;
  while (out.sequence.size() + 1 < rel.size()) {
    NodeId best = -1;
    int best_size = 0;
    for (NodeId x : ready) {
      if (x == query) continue;
      int drops = 0;
      for (NodeId p : net.node(x).parents)
        if (frontier.count(p) && rem_children[p] == 1) ++drops;
      const int size = static_cast<int>(frontier.size()) + 1 - drops;
      if (best < 0 || size < best_size) {
        best = x;
        best_size = size;
      }
    }
    assert(best >= 0);
    out.sequence.push_back(best);
    ready.erase(best);
    for (NodeId p : net.node(best).parents) {
      if (--rem_children[p] == 0) frontier.erase(p);
    }
    frontier.insert(best);
    for (NodeId c : kids[static_cast<std::size_t>(best)]) {
      if (rel_set.count(c) && --waiting_parents[c] == 0) ready.insert(c);
    }
  }
  out.sequence.push_back(query);
  return out;
}

BilinearProgram generate_bilinear(const CredalNetwork& net,
                                  const std::vector<PrecedenceOrdering>& orderings) {
  if (orderings.size() != net.queries().size())
    throw ContractViolation("one precedence ordering per query is required");

  BilinearProgram bp;
  const std::vector<std::string> names = safe_names(net);
  const auto kids = net.children();

  // Policy and vertex binaries for every imprecise node, ascending id.
  std::map<NodeId, int> policy_first;
  std::map<NodeId, int> vertex_first;
  std::map<NodeId, std::vector<int>> vertex_row_offset;
  for (const CredalNode& n : net.nodes()) {
    if (std::get_if<FreeDecisionSpec>(&n.spec)) {
      DecisionGroupMeta meta;
      meta.node = n.id;
      meta.name = names[static_cast<std::size_t>(n.id)];
      meta.rows = static_cast<int>(net.parent_config_count(n.id));
      meta.domain = n.domain;
      meta.first_var = static_cast<int>(bp.variables.size());
      policy_first[n.id] = meta.first_var;
      for (int j = 0; j < meta.rows; ++j) {
        for (int a = 0; a < n.domain; ++a) {
          MilpVariable v;
          v.index = static_cast<int>(bp.variables.size());
          v.kind = MilpVarKind::PolicyBinary;
          v.name = "b_" + meta.name + "_j" + std::to_string(j) + "_a" + std::to_string(a);
          v.integral = true;
          v.node = n.id;
          v.row = j;
          v.alt = a;
          bp.variables.push_back(std::move(v));
        }
      }
      bp.decisions.push_back(std::move(meta));
    } else if (const auto* vl = std::get_if<VertexListSpec>(&n.spec)) {
      VertexGroupMeta meta;
      meta.node = n.id;
      meta.name = names[static_cast<std::size_t>(n.id)];
      meta.first_var = static_cast<int>(bp.variables.size());
      vertex_first[n.id] = meta.first_var;
      const std::uint64_t rows = net.parent_config_count(n.id);
      if (vl->vertices.size() != rows)
        throw ContractViolation("vertex list of '" + n.name + "' has wrong row count");
      std::vector<int> offsets;
      int off = 0;
      for (std::uint64_t j = 0; j < rows; ++j) {
        offsets.push_back(off);
        const int count = static_cast<int>(vl->vertices[j].size());
        meta.vertices_per_row.push_back(count);
        for (int k = 0; k < count; ++k) {
          MilpVariable v;
          v.index = static_cast<int>(bp.variables.size());
          v.kind = MilpVarKind::VertexBinary;
          v.name = "v_" + meta.name + "_j" + std::to_string(j) + "_k" + std::to_string(k);
          v.integral = true;
          v.node = n.id;
          v.row = static_cast<int>(j);
          v.alt = k;
          bp.variables.push_back(std::move(v));
        }
        off += count;
      }
      vertex_row_offset[n.id] = std::move(offsets);
      bp.vertex_sets.push_back(std::move(meta));
    }
  }

  for (std::size_t qi = 0; qi < net.queries().size(); ++qi) {
    const CredalQuery& query = net.queries()[qi];
    const PrecedenceOrdering& ord = orderings[qi];
    if (ord.query != query.node)
      throw ContractViolation("ordering " + std::to_string(qi) + " does not match its query");

    const std::vector<NodeId> rel = relevant_ancestors(net, query.node);
    {
      std::vector<NodeId> seq_sorted = ord.sequence;
      std::sort(seq_sorted.begin(), seq_sorted.end());
      if (seq_sorted != rel)
        throw ContractViolation("ordering must cover exactly the relevant ancestors");
      if (ord.sequence.back() != query.node)
        throw ContractViolation("the query node must come last in its ordering");
      std::map<NodeId, std::size_t> pos;
      for (std::size_t i = 0; i < ord.sequence.size(); ++i) pos[ord.sequence[i]] = i;
      for (NodeId v : ord.sequence)
        for (NodeId p : net.node(v).parents)
          if (pos.at(p) >= pos.at(v))
            throw ContractViolation("ordering violates ancestor precedence at '" +
                                    net.node(v).name + "'");
    }

    const CredalNode& qnode = net.node(query.node);
    const PreciseSpec& qspec = precise_spec_of(net, query.node);
    int serial = 0;
    auto new_term = [&]() {
      MilpVariable v;
      v.index = static_cast<int>(bp.variables.size());
      v.kind = MilpVarKind::Term;
      v.name = "t_q" + std::to_string(query.node) + "_" + std::to_string(serial);
      v.node = query.node;
      v.serial = serial++;
      bp.variables.push_back(v);
      return v.index;
    };

    const int top = new_term();
    bp.objective.emplace_back(top, 1.0);

    if (rel.size() == 1) {
      // Parentless query: its marginal is a stored constant.
      BilinearEquality eq;
      eq.lhs = top;
      eq.query = query.node;
      eq.constant = qspec.table[static_cast<std::size_t>(query.category)];
      bp.equalities.push_back(std::move(eq));
      continue;
    }

    const std::set<NodeId> rel_set(rel.begin(), rel.end());
    std::map<NodeId, int> rem_children;
    for (NodeId v : rel) {
      int rc = 0;
      for (NodeId c : kids[static_cast<std::size_t>(v)])
        if (rel_set.count(c)) ++rc;
      rem_children[v] = rc;
    }

    std::vector<NodeId> frontier;              // sorted
    std::map<std::vector<int>, int> pending;   // context -> term variable
    pending.emplace(std::vector<int>{}, top);
    std::set<NodeId> frontier_set;

    const std::vector<NodeId>& qparents = qnode.parents;
    const std::set<NodeId> qparent_set(qparents.begin(), qparents.end());

    for (std::size_t step = 0; step + 1 < ord.sequence.size(); ++step) {
      const NodeId x = ord.sequence[step];
      const CredalNode& xnode = net.node(x);

      // Structural frontier update: x enters, parents with no remaining
      // unprocessed relevant children leave.
      for (NodeId p : xnode.parents)
        if (--rem_children[p] == 0) frontier_set.erase(p);
      frontier_set.insert(x);
      std::vector<NodeId> structural(frontier_set.begin(), frontier_set.end());
      const std::vector<NodeId> refined = refine_frontier(net, structural, query.node);
      assert(std::binary_search(refined.begin(), refined.end(), x));
      frontier_set = std::set<NodeId>(refined.begin(), refined.end());

      bool terminal = true;
      for (NodeId p : qparents)
        if (!frontier_set.count(p)) terminal = false;
      assert(terminal == (step + 2 == ord.sequence.size()));

      // Positions of the old frontier variables inside contexts.
      std::map<NodeId, std::size_t> old_pos;
      for (std::size_t i = 0; i < frontier.size(); ++i) old_pos[frontier[i]] = i;

      std::map<std::vector<int>, int> next_pending;
      for (const auto& [ctx, termvar] : pending) {
        BilinearEquality eq;
        eq.lhs = termvar;
        eq.query = query.node;
        std::map<int, double> linear;

        // Row of x's table selected by the context.
        std::vector<int> xparent_vals;
        xparent_vals.reserve(xnode.parents.size());
        for (NodeId p : xnode.parents) {
          auto it = old_pos.find(p);
          assert(it != old_pos.end());
          xparent_vals.push_back(ctx[it->second]);
        }
        const std::uint64_t row = net.config_index(x, xparent_vals);

        for (int cat = 0; cat < xnode.domain; ++cat) {
          // New context over the refined frontier.
          std::vector<int> nctx;
          nctx.reserve(refined.size());
          for (NodeId v : refined) {
            if (v == x) {
              nctx.push_back(cat);
            } else {
              auto it = old_pos.find(v);
              assert(it != old_pos.end());
              nctx.push_back(ctx[it->second]);
            }
          }

          double constant_child = 0.0;
          int child_term = -1;
          if (terminal) {
            // The context pins a stored row of the query's table.
            std::vector<int> qvals;
            qvals.reserve(qparents.size());
            std::map<NodeId, std::size_t> npos;
            for (std::size_t i = 0; i < refined.size(); ++i) npos[refined[i]] = i;
            for (NodeId p : qparents) qvals.push_back(nctx[npos.at(p)]);
            const std::uint64_t qrow = net.config_index(query.node, qvals);
            constant_child =
                qspec.table[qrow * static_cast<std::uint64_t>(qnode.domain) +
                            static_cast<std::uint64_t>(query.category)];
          } else {
            auto it = next_pending.find(nctx);
            if (it == next_pending.end())
              it = next_pending.emplace(nctx, new_term()).first;
            child_term = it->second;
          }

          if (const auto* precise = std::get_if<PreciseSpec>(&xnode.spec)) {
            const double w =
                precise->table[row * static_cast<std::uint64_t>(xnode.domain) +
                               static_cast<std::uint64_t>(cat)];
            if (terminal)
              eq.constant += w * constant_child;
            else
              linear[child_term] += w;
          } else if (std::get_if<FreeDecisionSpec>(&xnode.spec)) {
            const int bvar = policy_first.at(x) +
                             static_cast<int>(row) * xnode.domain + cat;
            if (terminal)
              linear[bvar] += constant_child;  // constant folds into the coefficient
            else
              eq.bilinear.push_back({bvar, child_term, 1.0});
          } else {
            const auto& vl = std::get<VertexListSpec>(xnode.spec);
            const auto& verts = vl.vertices[row];
            const int base = vertex_first.at(x) + vertex_row_offset.at(x)[row];
            for (std::size_t k = 0; k < verts.size(); ++k) {
              const double w = verts[k][static_cast<std::size_t>(cat)];
              const int vvar = base + static_cast<int>(k);
              if (terminal)
                linear[vvar] += w * constant_child;
              else if (w != 0.0)
                eq.bilinear.push_back({vvar, child_term, w});
            }
          }
        }
        for (const auto& [var, coeff] : linear) eq.linear.emplace_back(var, coeff);
        bp.equalities.push_back(std::move(eq));
      }
      pending = std::move(next_pending);
      frontier = refined;
    }
    assert(pending.empty());
  }
  return bp;
}

MilpProblem linearize(const BilinearProgram& bp) {
  MilpProblem milp;
  milp.variables = bp.variables;
  milp.objective = bp.objective;
  milp.decisions = bp.decisions;
  milp.vertex_sets = bp.vertex_sets;

  std::map<std::pair<int, int>, int> product_of;
  auto product_var = [&](int b, int t) {
    const auto key = std::make_pair(b, t);
    auto it = product_of.find(key);
    if (it != product_of.end()) return it->second;
    MilpVariable v;
    v.index = static_cast<int>(milp.variables.size());
    v.kind = MilpVarKind::Product;
    v.name = "y_" + std::to_string(v.index);
    v.factor_binary = b;
    v.factor_term = t;
    milp.variables.push_back(v);
    product_of.emplace(key, v.index);
    return v.index;
  };

  // Definitional equalities: lhs - linear - products = constant.
  for (const BilinearEquality& eq : bp.equalities) {
    std::map<int, double> coeffs;
    coeffs[eq.lhs] += 1.0;
    for (const auto& [var, w] : eq.linear) coeffs[var] -= w;
    for (const BilinearEntry& be : eq.bilinear)
      coeffs[product_var(be.binary, be.term)] -= be.coeff;
    LinearConstraint lc;
    lc.rel = Relation::Eq;
    lc.rhs = eq.constant;
    lc.kind = ConstraintKind::Definition;
    for (const auto& [var, w] : coeffs)
      if (w != 0.0) lc.coeffs.emplace_back(var, w);
    milp.constraints.push_back(std::move(lc));
    milp.lp_basis_hint.push_back(eq.lhs);
  }

  // Simplex constraints for every policy row and vertex row.
  for (const DecisionGroupMeta& m : milp.decisions) {
    for (int j = 0; j < m.rows; ++j) {
      LinearConstraint lc;
      lc.rel = Relation::Eq;
      lc.rhs = 1.0;
      lc.kind = ConstraintKind::Simplex;
      for (int a = 0; a < m.domain; ++a)
        lc.coeffs.emplace_back(m.first_var + j * m.domain + a, 1.0);
      milp.constraints.push_back(std::move(lc));
      milp.lp_basis_hint.push_back(-1);
    }
  }
  for (const VertexGroupMeta& m : milp.vertex_sets) {
    int off = 0;
    for (std::size_t j = 0; j < m.vertices_per_row.size(); ++j) {
      LinearConstraint lc;
      lc.rel = Relation::Eq;
      lc.rhs = 1.0;
      lc.kind = ConstraintKind::Simplex;
      for (int k = 0; k < m.vertices_per_row[j]; ++k)
        lc.coeffs.emplace_back(m.first_var + off + k, 1.0);
      off += m.vertices_per_row[j];
      milp.constraints.push_back(std::move(lc));
      milp.lp_basis_hint.push_back(-1);
    }
  }

  // Product envelopes: y >= 0, y <= b, y >= t - 1 + b, y <= t.
  for (const MilpVariable& v : milp.variables) {
    if (v.kind != MilpVarKind::Product) continue;
    const int y = v.index, b = v.factor_binary, t = v.factor_term;
    auto push = [&](std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs) {
      LinearConstraint lc;
      std::sort(coeffs.begin(), coeffs.end());
      lc.coeffs = std::move(coeffs);
      lc.rel = rel;
      lc.rhs = rhs;
      lc.kind = ConstraintKind::Linearization;
      milp.constraints.push_back(std::move(lc));
      milp.lp_basis_hint.push_back(-1);
    };
    push({{y, 1.0}}, Relation::Ge, 0.0);
    push({{y, 1.0}, {b, -1.0}}, Relation::Le, 0.0);
    push({{y, 1.0}, {t, -1.0}, {b, -1.0}}, Relation::Ge, -1.0);
    push({{y, 1.0}, {t, -1.0}}, Relation::Le, 0.0);
  }
  return milp;
}

std::string export_lp(const MilpProblem& milp) {
  std::string out;
  char buf[96];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto signed_num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%+.17g", v);
    return std::string(buf);
  };

  out += "Maximize\n obj:";
  for (const auto& [var, c] : milp.objective)
    out += " " + signed_num(c) + " " + milp.variables[static_cast<std::size_t>(var)].name;
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < milp.constraints.size(); ++i) {
    const LinearConstraint& lc = milp.constraints[i];
    out += " c" + std::to_string(i) + ":";
    for (const auto& [var, c] : lc.coeffs)
      out += " " + signed_num(c) + " " + milp.variables[static_cast<std::size_t>(var)].name;
    switch (lc.rel) {
      case Relation::Eq: out += " = "; break;
      case Relation::Le: out += " <= "; break;
      case Relation::Ge: out += " >= "; break;
    }
    out += num(lc.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const MilpVariable& v : milp.variables)
    out += " " + num(v.lower) + " <= " + v.name + " <= " + num(v.upper) + "\n";
  out += "Binaries\n";
  for (const MilpVariable& v : milp.variables)
    if (v.integral) out += " " + v.name + "\n";
  out += "End\n";
  return out;
}

Strategy extract_strategy(const MilpProblem& milp, const std::vector<double>& assignment) {
  if (assignment.size() != milp.variables.size())
    throw InvalidAssignmentError("assignment size does not match the variable count");
  Strategy s;
  for (const DecisionGroupMeta& m : milp.decisions) {
    Policy p;
    p.decision = m.node;
    p.table.assign(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.domain), 0.0);
    for (int j = 0; j < m.rows; ++j) {
      int chosen = -1;
      for (int a = 0; a < m.domain; ++a) {
        const double x = assignment[static_cast<std::size_t>(m.first_var + j * m.domain + a)];
        const double r = std::round(x);
        if (std::abs(x - r) > 1e-6)
          throw InvalidAssignmentError(
              "variable " + milp.variables[static_cast<std::size_t>(m.first_var + j * m.domain + a)].name +
              " = " + std::to_string(x) + " is not integral");
        if (r >= 0.5) {
          if (chosen >= 0)
            throw InvalidAssignmentError("policy row " + std::to_string(j) + " of '" + m.name +
                                         "' selects more than one alternative");
          chosen = a;
        }
      }
      if (chosen < 0)
        throw InvalidAssignmentError("policy row " + std::to_string(j) + " of '" + m.name +
                                     "' selects no alternative");
      p.table[static_cast<std::size_t>(j * m.domain + chosen)] = 1.0;
    }
    s.policies.push_back(std::move(p));
  }
  return s;
}

}  // namespace limid
