#pragma once

#include <random>
#include <vector>

#include "limid/bench.hpp"
#include "limid/model.hpp"

namespace fixtures {

// Two simultaneous actions, three utility nodes, one goal variable.  The
// bombing decision influences the bridge, both chance outcomes drive the
// territory goal.  Small enough for hand calculation: the take-both
// strategy is optimal with expected utility 616.25.
inline limid::InfluenceDiagram bridge_ops() {
  limid::InfluenceDiagram d;
  const auto attack = d.add_decision("do_ground_attack", {}, 2);
  const auto bomb = d.add_decision("bomb_bridge", {}, 2);
  const auto bridge = d.add_chance("bridge_condition", {bomb}, 2);
  const auto ground = d.add_chance("ground_attack", {attack, bridge}, 2);
  const auto territory = d.add_chance("territory_occupation", {ground, bridge}, 2);
  const auto cost_attack = d.add_utility("cost_of_attack", {attack});
  const auto cost_bomb = d.add_utility("cost_of_bombing", {bomb});
  const auto profit = d.add_utility("profit_of_goal", {territory});

  d.set_cpt(bridge, {0.95, 0.05, 0.1, 0.9});
  d.set_cpt(ground, {0.99, 0.01, 0.97, 0.03, 0.4, 0.6, 0.15, 0.85});
  d.set_cpt(territory, {0.9, 0.1, 0.7, 0.3, 0.25, 0.75, 0.05, 0.95});
  d.set_utility(cost_attack, {0.0, -150.0});
  d.set_utility(cost_bomb, {0.0, -50.0});
  d.set_utility(profit, {0.0, 1000.0});
  return d;
}

// One parentless binary decision with a single utility child:
// f(alternative 0) = skip, f(alternative 1) = take.
inline limid::InfluenceDiagram single_decision(double skip, double take) {
  limid::InfluenceDiagram d;
  const auto dec = d.add_decision("D", {}, 2);
  const auto util = d.add_utility("U", {dec});
  d.set_utility(util, {skip, take});
  return d;
}

// A decision that observes another decision (information arc between
// decisions, allowed in limited-memory diagrams).
inline limid::InfluenceDiagram chained_decisions() {
  limid::InfluenceDiagram d;
  const auto first = d.add_decision("first", {}, 2);
  const auto second = d.add_decision("second", {first}, 2);
  const auto noise = d.add_chance("noise", {second}, 2);
  const auto payoff = d.add_utility("payoff", {first, noise});
  d.set_cpt(noise, {0.8, 0.2, 0.3, 0.7});
  d.set_utility(payoff, {1.0, 4.0, 0.0, 10.0});
  return d;
}

// Classic coordination trap for coordinate ascent: both actions must
// flip together to reach the optimum.
inline limid::InfluenceDiagram coordination() {
  limid::InfluenceDiagram d;
  const auto a = d.add_decision("A", {}, 2);
  const auto b = d.add_decision("B", {}, 2);
  const auto util = d.add_utility("U", {a, b});
  d.set_utility(util, {1.0, 0.0, 0.0, 2.0});
  return d;
}

inline double unit_draw(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline limid::Strategy random_mixed_strategy(const limid::InfluenceDiagram& d,
                                             std::mt19937_64& rng) {
  limid::Strategy s;
  for (limid::NodeId dec : d.decision_ids()) {
    limid::Policy p;
    p.decision = dec;
    const int domain = d.node(dec).domain_size;
    const std::uint64_t rows = d.parent_config_count(dec);
    for (std::uint64_t j = 0; j < rows; ++j) {
      double sum = 0.0;
      std::vector<double> row(static_cast<std::size_t>(domain));
      for (double& v : row) {
        v = -std::log(unit_draw(rng));
        sum += v;
      }
      for (double& v : row) p.table.push_back(v / sum);
    }
    s.policies.push_back(std::move(p));
  }
  return s;
}

inline limid::Strategy random_pure_strategy(const limid::InfluenceDiagram& d,
                                            std::mt19937_64& rng) {
  std::vector<std::vector<int>> choices;
  for (limid::NodeId dec : d.decision_ids()) {
    const int domain = d.node(dec).domain_size;
    std::vector<int> rows(d.parent_config_count(dec));
    for (int& v : rows) v = static_cast<int>(rng() % static_cast<std::uint64_t>(domain));
    choices.push_back(std::move(rows));
  }
  return limid::pure_strategy_from_choices(d, choices);
}

// Small random diagram comfortably inside both enumeration caps.
inline limid::InfluenceDiagram small_random(std::uint64_t seed, int total = 9,
                                            int decisions = 2) {
  limid::RandomSpec spec;
  spec.total_nodes = total;
  spec.decision_nodes = decisions;
  spec.utility_nodes = decisions;
  spec.seed = seed;
  return limid::gen_random_diagram(spec);
}

}  // namespace fixtures
