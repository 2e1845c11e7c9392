#include "limid/credal.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace limid;

namespace {

StrategySelection pure_selection(const InfluenceDiagram& d, const Strategy& s) {
  (void)d;
  return selection_from_strategy(s);
}

}  // namespace

TEST_CASE("translation of the bridge example") {
  const auto [nd, info] = normalize_utilities(fixtures::bridge_ops());
  (void)info;
  const CredalNetwork net = limid_to_credal(nd);
  REQUIRE(net.num_nodes() == 8);
  REQUIRE(net.queries().size() == 3);

  int free_decisions = 0, precise = 0;
  for (const CredalNode& n : net.nodes()) {
    if (std::get_if<FreeDecisionSpec>(&n.spec)) ++free_decisions;
    if (std::get_if<PreciseSpec>(&n.spec)) ++precise;
  }
  CHECK(free_decisions == 2);
  CHECK(precise == 6);  // three chance + three binary query nodes

  // Former utility nodes keep their ids and become binary with the
  // normalized entry as the category-0 probability.
  for (const CredalQuery& q : net.queries()) {
    const CredalNode& n = net.node(q.node);
    CHECK(n.domain == 2);
    CHECK(q.category == 0);
    const auto& table = std::get<PreciseSpec>(n.spec).table;
    for (std::size_t j = 0; j + 1 < table.size(); j += 2)
      CHECK(table[j] + table[j + 1] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("translation writes complement rows") {
  InfluenceDiagram d;
  const auto dec = d.add_decision("D", {}, 2);
  const auto util = d.add_utility("U", {dec});
  d.set_utility(util, {1.0, 0.25});
  const CredalNetwork net = limid_to_credal(d);
  const auto& table = std::get<PreciseSpec>(net.node(util).spec).table;
  CHECK(table == std::vector<double>({1.0, 0.0, 0.25, 0.75}));
}

TEST_CASE("translation rejects unnormalized utilities") {
  CHECK_THROWS_AS(limid_to_credal(fixtures::bridge_ops()), ContractViolation);
}

TEST_CASE("sum of marginals equals the normalized expected utility") {
  const auto [nd, info] = normalize_utilities(fixtures::bridge_ops());
  (void)info;
  const CredalNetwork net = limid_to_credal(nd);
  for (std::uint64_t ord = 0; ord < 4; ++ord) {
    const Strategy s = pure_strategy_from_ordinal(nd, ord);
    const double lhs = sum_marginals(net, pure_selection(nd, s));
    const double rhs = expected_utility(nd, s);
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("sum of marginals on a root query") {
  CredalNetwork net;
  const NodeId u = net.add_precise("u", {}, 2, {0.3, 0.7});
  net.add_query(u, 0);
  CHECK(sum_marginals(net, {}) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("incomplete selections name the uncovered node") {
  const auto [nd, info] = normalize_utilities(fixtures::bridge_ops());
  (void)info;
  const CredalNetwork net = limid_to_credal(nd);
  StrategySelection sel;  // empty
  try {
    sum_marginals(net, sel);
    FAIL("expected IncompleteSelectionError");
  } catch (const IncompleteSelectionError& e) {
    CHECK(std::string(e.what()).find("do_ground_attack") != std::string::npos);
  }
}

TEST_CASE("maximizing over pure selections matches brute force") {
  for (std::uint64_t seed : {21u, 22u}) {
    const InfluenceDiagram d = fixtures::small_random(seed, 8, 2);
    const auto [nd, info] = normalize_utilities(d);
    const CredalNetwork net = limid_to_credal(nd);
    const std::uint64_t total = static_cast<std::uint64_t>(count_pure_strategies(nd));
    double best = -1.0;
    for (std::uint64_t ord = 0; ord < total; ++ord) {
      const Strategy s = pure_strategy_from_ordinal(nd, ord);
      best = std::max(best, sum_marginals(net, pure_selection(nd, s)));
    }
    const auto [ignored, meu] = brute_force_meu(d);
    (void)ignored;
    const double meu_normalized = (meu - info.utility_count * info.f_lo) / (info.f_hi - info.f_lo);
    CHECK(best == doctest::Approx(meu_normalized).epsilon(1e-9));
  }
}

TEST_CASE("marginals stay within [0,1] for every selection") {
  std::mt19937_64 rng(5);
  const auto [nd, info] = normalize_utilities(fixtures::small_random(33, 8, 2));
  (void)info;
  const CredalNetwork net = limid_to_credal(nd);
  for (int k = 0; k < 20; ++k) {
    const Strategy s = fixtures::random_mixed_strategy(nd, rng);
    const double total = sum_marginals(net, pure_selection(nd, s));
    CHECK(total >= -1e-9);
    CHECK(total <= static_cast<double>(net.queries().size()) + 1e-9);
  }
}

TEST_CASE("relevant ancestors of the bridge queries") {
  const auto [nd, info] = normalize_utilities(fixtures::bridge_ops());
  (void)info;
  const CredalNetwork net = limid_to_credal(nd);
  const NodeId profit = *nd.find("profit_of_goal");
  const NodeId cost_attack = *nd.find("cost_of_attack");

  CHECK(relevant_ancestors(net, profit) ==
        std::vector<NodeId>({*nd.find("do_ground_attack"), *nd.find("bomb_bridge"),
                             *nd.find("bridge_condition"), *nd.find("ground_attack"),
                             *nd.find("territory_occupation"), profit}));
  CHECK(relevant_ancestors(net, cost_attack) ==
        std::vector<NodeId>({*nd.find("do_ground_attack"), cost_attack}));
}

TEST_CASE("relevant ancestors of a root") {
  CredalNetwork net;
  const NodeId u = net.add_precise("u", {}, 2, {0.4, 0.6});
  net.add_query(u, 0);
  CHECK(relevant_ancestors(net, u) == std::vector<NodeId>({u}));
}

TEST_CASE("vertex-list selections assemble the chosen rows") {
  CredalNetwork net;
  const NodeId x = net.add_vertex_list("x", {}, 2, {{{0.2, 0.8}, {0.6, 0.4}}});
  const NodeId u = net.add_precise("u", {x}, 2, {0.9, 0.1, 0.1, 0.9});
  net.add_query(u, 0);
  StrategySelection sel;
  sel.vertex_choices[x] = {0};
  CHECK(sum_marginals(net, sel) == doctest::Approx(0.2 * 0.9 + 0.8 * 0.1));
  sel.vertex_choices[x] = {1};
  CHECK(sum_marginals(net, sel) == doctest::Approx(0.6 * 0.9 + 0.4 * 0.1));
}
