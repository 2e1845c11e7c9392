#include "limid/reform.hpp"

#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace limid;

namespace {

struct BridgeSetup {
  InfluenceDiagram normalized;
  NormalizationInfo info;
  CredalNetwork net;
  std::vector<PrecedenceOrdering> orderings;  // the hand ordering for the goal query
};

// Reformulation of the bridge example with the hand-picked ordering
// bomb_bridge, bridge_condition, do_ground_attack, ground_attack,
// territory_occupation for the profit query.
BridgeSetup bridge_setup() {
  BridgeSetup s;
  auto [nd, info] = normalize_utilities(fixtures::bridge_ops());
  s.normalized = std::move(nd);
  s.info = info;
  s.net = limid_to_credal(s.normalized);
  const auto id = [&](const char* name) { return *s.normalized.find(name); };
  for (const CredalQuery& q : s.net.queries()) {
    PrecedenceOrdering ord;
    ord.query = q.node;
    if (q.node == id("profit_of_goal")) {
      ord.sequence = {id("bomb_bridge"),      id("bridge_condition"),
                      id("do_ground_attack"), id("ground_attack"),
                      id("territory_occupation"), q.node};
    } else {
      ord = choose_precedence_ordering(s.net, q.node);
    }
    s.orderings.push_back(std::move(ord));
  }
  return s;
}

// Resolves all term values bottom-up for a fixed binary assignment; an
// independent check of the generated equalities that bypasses any LP
// machinery.
std::vector<double> resolve_terms(const MilpProblem& milp, std::vector<double> x) {
  bool progress = true;
  std::vector<char> known(milp.variables.size(), 0);
  for (const MilpVariable& v : milp.variables) {
    if (v.kind == MilpVarKind::PolicyBinary || v.kind == MilpVarKind::VertexBinary)
      known[static_cast<std::size_t>(v.index)] = 1;
    if (v.kind == MilpVarKind::Product) {
      // y = b * t resolves once t is known.
    }
  }
  while (progress) {
    progress = false;
    // Products whose term operand is known.
    for (const MilpVariable& v : milp.variables) {
      if (v.kind != MilpVarKind::Product) continue;
      if (known[static_cast<std::size_t>(v.index)]) continue;
      if (!known[static_cast<std::size_t>(v.factor_term)]) continue;
      x[static_cast<std::size_t>(v.index)] = x[static_cast<std::size_t>(v.factor_binary)] *
                                             x[static_cast<std::size_t>(v.factor_term)];
      known[static_cast<std::size_t>(v.index)] = 1;
      progress = true;
    }
    // Definitions whose right-hand side is fully known.
    for (const LinearConstraint& lc : milp.constraints) {
      if (lc.kind != ConstraintKind::Definition) continue;
      int lhs = -1;
      double rhs = lc.rhs;
      bool ready = true;
      for (const auto& [var, w] : lc.coeffs) {
        if (w == 1.0 && milp.variables[static_cast<std::size_t>(var)].kind == MilpVarKind::Term &&
            !known[static_cast<std::size_t>(var)] && lhs < 0) {
          lhs = var;
          continue;
        }
        if (!known[static_cast<std::size_t>(var)]) {
          ready = false;
          break;
        }
        rhs -= w * x[static_cast<std::size_t>(var)];
      }
      if (lhs < 0 || !ready) continue;
      x[static_cast<std::size_t>(lhs)] = rhs;  // lhs + sum = rhs  =>  lhs = rhs - sum
      known[static_cast<std::size_t>(lhs)] = 1;
      progress = true;
    }
  }
  for (const MilpVariable& v : milp.variables)
    if (!known[static_cast<std::size_t>(v.index)])
      throw std::logic_error("unresolved variable " + v.name);
  return x;
}

double objective_value(const MilpProblem& milp, const std::vector<double>& x) {
  double obj = 0.0;
  for (const auto& [var, c] : milp.objective) obj += c * x[static_cast<std::size_t>(var)];
  return obj;
}

std::vector<double> assignment_for(const MilpProblem& milp, const Strategy& s) {
  std::vector<double> x(milp.variables.size(), 0.0);
  for (const DecisionGroupMeta& m : milp.decisions) {
    const Policy* p = s.find(m.node);
    REQUIRE(p != nullptr);
    for (int j = 0; j < m.rows; ++j)
      for (int a = 0; a < m.domain; ++a)
        x[static_cast<std::size_t>(m.first_var + j * m.domain + a)] =
            p->table[static_cast<std::size_t>(j * m.domain + a)];
  }
  return x;
}

}  // namespace

TEST_CASE("chosen orderings respect precedence and put the query last") {
  const BridgeSetup s = bridge_setup();
  for (const CredalQuery& q : s.net.queries()) {
    const PrecedenceOrdering ord = choose_precedence_ordering(s.net, q.node);
    const std::vector<NodeId> rel = relevant_ancestors(s.net, q.node);
    std::vector<NodeId> sorted = ord.sequence;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == rel);
    CHECK(ord.sequence.back() == q.node);
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < ord.sequence.size(); ++i) pos[ord.sequence[i]] = i;
    for (NodeId v : ord.sequence)
      for (NodeId p : s.net.node(v).parents) CHECK(pos.at(p) < pos.at(v));
  }
}

TEST_CASE("ordering of a single-ancestor query") {
  const BridgeSetup s = bridge_setup();
  const NodeId cost = *s.normalized.find("cost_of_attack");
  const PrecedenceOrdering ord = choose_precedence_ordering(s.net, cost);
  CHECK(ord.sequence ==
        std::vector<NodeId>({*s.normalized.find("do_ground_attack"), cost}));
}

TEST_CASE("ordering of a chain is the chain") {
  CredalNetwork net;
  const NodeId a = net.add_precise("a", {}, 2, {0.5, 0.5});
  const NodeId b = net.add_precise("b", {a}, 2, {0.5, 0.5, 0.5, 0.5});
  const NodeId q = net.add_precise("q", {b}, 2, {0.3, 0.7, 0.8, 0.2});
  net.add_query(q, 0);
  const PrecedenceOrdering ord = choose_precedence_ordering(net, q);
  CHECK(ord.sequence == std::vector<NodeId>({a, b, q}));
}

TEST_CASE("bridge census: 15 definitional equalities and 2 simplex rows") {
  const BridgeSetup s = bridge_setup();
  const BilinearProgram bp = generate_bilinear(s.net, s.orderings);

  std::map<NodeId, int> per_query;
  for (const BilinearEquality& eq : bp.equalities) ++per_query[eq.query];
  CHECK(per_query[*s.normalized.find("cost_of_attack")] == 1);
  CHECK(per_query[*s.normalized.find("cost_of_bombing")] == 1);
  CHECK(per_query[*s.normalized.find("profit_of_goal")] == 13);
  CHECK(bp.equalities.size() == 15);

  const MilpProblem milp = linearize(bp);
  CHECK(milp.count(ConstraintKind::Definition) == 15);
  CHECK(milp.count(ConstraintKind::Simplex) == 2);
  CHECK(milp.binary_indices().size() == 4);
  // Six distinct binary-times-term products, four envelope rows each.
  int products = 0;
  for (const MilpVariable& v : milp.variables)
    if (v.kind == MilpVarKind::Product) ++products;
  CHECK(products == 6);
  CHECK(milp.count(ConstraintKind::Linearization) == 24);
}

TEST_CASE("generator accepts a parentless precise query") {
  CredalNetwork net;
  const NodeId u = net.add_precise("u", {}, 2, {0.35, 0.65});
  net.add_query(u, 0);
  const BilinearProgram bp = generate_bilinear(net, {choose_precedence_ordering(net, u)});
  REQUIRE(bp.equalities.size() == 1);
  CHECK(bp.equalities[0].constant == doctest::Approx(0.35));
  CHECK(bp.equalities[0].linear.empty());
  CHECK(bp.equalities[0].bilinear.empty());
}

TEST_CASE("generator rejects an ordering that breaks precedence") {
  BridgeSetup s = bridge_setup();
  // Swap the first two entries of the profit ordering: bridge_condition
  // would precede its parent bomb_bridge.
  for (PrecedenceOrdering& ord : s.orderings) {
    if (ord.sequence.size() > 2) std::swap(ord.sequence[0], ord.sequence[1]);
  }
  CHECK_THROWS_AS(generate_bilinear(s.net, s.orderings), ContractViolation);
}

TEST_CASE("fixed binaries reproduce the expected utility through the equalities") {
  const BridgeSetup s = bridge_setup();
  const MilpProblem milp = linearize(generate_bilinear(s.net, s.orderings));
  for (std::uint64_t ord = 0; ord < 4; ++ord) {
    const Strategy strat = pure_strategy_from_ordinal(s.normalized, ord);
    const std::vector<double> x = resolve_terms(milp, assignment_for(milp, strat));
    const double expected = expected_utility(s.normalized, strat);
    CHECK(std::abs(objective_value(milp, x) - expected) <= 1e-9);
  }
}

TEST_CASE("the same holds on random diagrams with the greedy ordering") {
  for (std::uint64_t seed : {61u, 62u, 63u}) {
    const InfluenceDiagram d = fixtures::small_random(seed, 9, 2);
    const auto [nd, info] = normalize_utilities(d);
    (void)info;
    const CredalNetwork net = limid_to_credal(nd);
    std::vector<PrecedenceOrdering> orderings;
    for (const CredalQuery& q : net.queries())
      orderings.push_back(choose_precedence_ordering(net, q.node));
    const MilpProblem milp = linearize(generate_bilinear(net, orderings));
    const std::uint64_t total = static_cast<std::uint64_t>(count_pure_strategies(nd));
    for (std::uint64_t o = 0; o < total; ++o) {
      const Strategy strat = pure_strategy_from_ordinal(nd, o);
      const std::vector<double> x = resolve_terms(milp, assignment_for(milp, strat));
      CHECK(std::abs(objective_value(milp, x) - expected_utility(nd, strat)) <= 1e-9);
    }
  }
}

TEST_CASE("product envelope forces y = b*t at binary b") {
  const BridgeSetup s = bridge_setup();
  const MilpProblem milp = linearize(generate_bilinear(s.net, s.orderings));
  for (const MilpVariable& v : milp.variables) {
    if (v.kind != MilpVarKind::Product) continue;
    for (int b = 0; b <= 1; ++b) {
      for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        const double ymin = std::max(0.0, t - 1.0 + b);
        const double ymax = std::min(static_cast<double>(b), t);
        CHECK(ymin == doctest::Approx(ymax).epsilon(1e-12));
        CHECK(ymin == doctest::Approx(b * t).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("linearization shares one product per (binary, term) pair") {
  const BridgeSetup s = bridge_setup();
  const MilpProblem milp = linearize(generate_bilinear(s.net, s.orderings));
  std::set<std::pair<int, int>> pairs;
  for (const MilpVariable& v : milp.variables) {
    if (v.kind != MilpVarKind::Product) continue;
    CHECK(pairs.insert({v.factor_binary, v.factor_term}).second);
    CHECK(milp.variables[static_cast<std::size_t>(v.factor_binary)].integral);
    CHECK(milp.variables[static_cast<std::size_t>(v.factor_term)].kind == MilpVarKind::Term);
  }
}

TEST_CASE("lp export is deterministic and structured") {
  const BridgeSetup s = bridge_setup();
  const MilpProblem milp = linearize(generate_bilinear(s.net, s.orderings));
  const std::string text = export_lp(milp);
  CHECK(text == export_lp(milp));
  CHECK(text.find("Maximize\n") == 0);
  CHECK(text.find("Subject To\n") != std::string::npos);
  CHECK(text.find("Bounds\n") != std::string::npos);
  CHECK(text.find("Binaries\n") != std::string::npos);
  CHECK(text.rfind("End\n") == text.size() - 4);

  // One Binaries line per policy binary: four for two parentless
  // two-alternative decisions.
  const std::size_t binaries_at = text.find("Binaries\n");
  const std::string tail = text.substr(binaries_at, text.size() - binaries_at - 4);
  int lines = 0;
  for (std::size_t i = 0; i < tail.size(); ++i)
    if (tail[i] == '\n') ++lines;
  CHECK(lines - 1 == 4);
}

TEST_CASE("empty problems still export every section") {
  MilpProblem empty;
  const std::string text = export_lp(empty);
  CHECK(text ==
        "Maximize\n obj:\nSubject To\nBounds\nBinaries\nEnd\n");
}

TEST_CASE("extract_strategy reads pure policies and rejects bad points") {
  const BridgeSetup s = bridge_setup();
  const MilpProblem milp = linearize(generate_bilinear(s.net, s.orderings));
  const Strategy strat = pure_strategy_from_ordinal(s.normalized, 2);
  std::vector<double> x = assignment_for(milp, strat);
  const Strategy back = extract_strategy(milp, x);
  for (const Policy& p : back.policies) {
    const Policy* q = strat.find(p.decision);
    REQUIRE(q != nullptr);
    CHECK(p.table == q->table);
  }

  // Fractional binaries are rejected.
  std::vector<double> bad = x;
  bad[static_cast<std::size_t>(milp.decisions[0].first_var)] = 0.4;
  CHECK_THROWS_AS(extract_strategy(milp, bad), InvalidAssignmentError);

  // A group rounding to two chosen alternatives is rejected.
  std::vector<double> twice = x;
  twice[static_cast<std::size_t>(milp.decisions[0].first_var)] = 1.0;
  twice[static_cast<std::size_t>(milp.decisions[0].first_var + 1)] = 1.0;
  CHECK_THROWS_AS(extract_strategy(milp, twice), InvalidAssignmentError);
}

TEST_CASE("vertex-list nodes produce vertex binaries and simplex rows") {
  CredalNetwork net;
  const NodeId x = net.add_vertex_list("x", {}, 2, {{{0.2, 0.8}, {0.6, 0.4}}});
  const NodeId mid = net.add_precise("mid", {x}, 2, {0.9, 0.1, 0.2, 0.8});
  const NodeId u = net.add_precise("u", {mid}, 2, {0.7, 0.3, 0.1, 0.9});
  net.add_query(u, 0);
  const MilpProblem milp =
      linearize(generate_bilinear(net, {choose_precedence_ordering(net, u)}));
  int vertex_binaries = 0;
  for (const MilpVariable& v : milp.variables)
    if (v.kind == MilpVarKind::VertexBinary) ++vertex_binaries;
  CHECK(vertex_binaries == 2);
  CHECK(milp.count(ConstraintKind::Simplex) == 1);

  // Enumerate both vertices by fixing the binaries.
  for (int choice = 0; choice <= 1; ++choice) {
    std::vector<double> assignment(milp.variables.size(), 0.0);
    assignment[static_cast<std::size_t>(choice)] = 1.0;  // vertex binaries come first
    const std::vector<double> resolved = resolve_terms(milp, assignment);
    StrategySelection sel;
    sel.vertex_choices[x] = {choice};
    CHECK(objective_value(milp, resolved) ==
          doctest::Approx(sum_marginals(net, sel)).epsilon(1e-12));
  }
}
