#include "limid/model.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace limid;

TEST_CASE("validation accepts the bridge example") {
  CHECK(validate_diagram(fixtures::bridge_ops()).ok());
}

TEST_CASE("validation catches a utility node with children") {
  InfluenceDiagram d;
  const auto dec = d.add_decision("D", {}, 2);
  const auto util = d.add_utility("U", {dec});
  d.set_utility(util, {0.0, 1.0});
  const auto child = d.add_chance("C", {util}, 2);
  d.set_cpt(child, {0.5, 0.5, 0.5, 0.5});
  const ValidationReport report = validate_diagram(d);
  int hits = 0;
  for (const auto& issue : report.issues)
    if (issue.message.find("has children") != std::string::npos) ++hits;
  CHECK(hits == 1);
}

TEST_CASE("validation catches a bad cpt row sum") {
  InfluenceDiagram d;
  const auto c = d.add_chance("C", {}, 2);
  d.set_cpt(c, {0.5, 0.6});
  const ValidationReport report = validate_diagram(d);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].message.find("sums to 1.1") != std::string::npos);
}

TEST_CASE("validation catches cycles and duplicate names") {
  InfluenceDiagram d;
  const auto a = d.add_chance("X", {}, 2);
  const auto b = d.add_chance("X", {a}, 2);
  d.set_cpt(a, {0.5, 0.5});
  d.set_cpt(b, {0.5, 0.5, 0.5, 0.5});
  const ValidationReport report = validate_diagram(d);
  bool dup = false;
  for (const auto& issue : report.issues)
    if (issue.message.find("duplicate node name") != std::string::npos) dup = true;
  CHECK(dup);
}

TEST_CASE("naive expected utility on the single-decision diagram") {
  const InfluenceDiagram d = fixtures::single_decision(2.0, 5.0);
  const Strategy take = pure_strategy_from_choices(d, {{1}});
  CHECK(expected_utility_naive(d, take) == doctest::Approx(5.0).epsilon(1e-12));

  Strategy mixed;
  mixed.policies.push_back({0, {0.5, 0.5}});
  CHECK(expected_utility_naive(d, mixed) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("naive expected utility enforces the configuration cap") {
  const InfluenceDiagram d = fixtures::bridge_ops();
  CHECK_THROWS_AS(expected_utility_naive(d, first_lexicographic_strategy(d), 8),
                  SizeLimitError);
}

TEST_CASE("variable elimination matches the naive oracle") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10; ++i) {
    const InfluenceDiagram d = fixtures::small_random(100 + static_cast<std::uint64_t>(i));
    REQUIRE(validate_diagram(d).ok());
    for (int k = 0; k < 10; ++k) {
      const Strategy s = fixtures::random_mixed_strategy(d, rng);
      const double naive = expected_utility_naive(d, s);
      const double ve = expected_utility(d, s);
      CHECK(std::abs(naive - ve) <= 1e-9);
    }
  }
}

TEST_CASE("variable elimination handles decision-to-decision arcs") {
  const InfluenceDiagram d = fixtures::chained_decisions();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Strategy s = fixtures::random_mixed_strategy(d, rng);
    CHECK(std::abs(expected_utility_naive(d, s) - expected_utility(d, s)) <= 1e-9);
  }
}

TEST_CASE("bridge example hand value") {
  const InfluenceDiagram d = fixtures::bridge_ops();
  // Hand enumeration of the four pure strategies gives 616.25 for
  // take-both, 358.125 / 248.2 / 117.15 for the others.
  const Strategy both = pure_strategy_from_choices(d, {{1}, {1}});
  CHECK(expected_utility(d, both) == doctest::Approx(616.25).epsilon(1e-12));
  const auto [best, value] = brute_force_meu(d);
  CHECK(value == doctest::Approx(616.25).epsilon(1e-12));
  CHECK(expected_utility(d, best) == doctest::Approx(value).epsilon(1e-12));
}

TEST_CASE("brute force returns the trivial optimum") {
  const InfluenceDiagram d = fixtures::single_decision(2.0, 5.0);
  const auto [best, value] = brute_force_meu(d);
  CHECK(value == doctest::Approx(5.0));
  CHECK(best.policies[0].table[1] == 1.0);
}

TEST_CASE("brute force dominates sampled mixed strategies") {
  std::mt19937_64 rng(1234);
  const InfluenceDiagram d = fixtures::small_random(55);
  const auto [best, value] = brute_force_meu(d);
  for (int k = 0; k < 100; ++k) {
    const Strategy s = fixtures::random_mixed_strategy(d, rng);
    CHECK(expected_utility(d, s) <= value + 1e-9);
  }
}

TEST_CASE("brute force enforces the strategy cap") {
  const InfluenceDiagram d = fixtures::bridge_ops();
  CHECK_THROWS_AS(brute_force_meu(d, 2), SizeLimitError);
}

TEST_CASE("parallel brute force equals the serial reference") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const InfluenceDiagram d = fixtures::small_random(seed, 10, 3);
    const auto serial = brute_force_meu_serial(d);
    const auto parallel = brute_force_meu(d, 1ull << 20, 4);
    CHECK(serial.second == parallel.second);
    CHECK(expected_utility(d, parallel.first) == serial.second);
  }
}

TEST_CASE("brute force ties break toward the smallest encoding") {
  // Two alternatives with identical utility: alternative 0 must win.
  const InfluenceDiagram d = fixtures::single_decision(3.0, 3.0);
  const auto [best, value] = brute_force_meu(d);
  CHECK(value == doctest::Approx(3.0));
  CHECK(best.policies[0].table[0] == 1.0);
}

TEST_CASE("normalization maps the global range onto [0,1]") {
  InfluenceDiagram d;
  const auto dec = d.add_decision("D", {}, 2);
  const auto u1 = d.add_utility("U1", {dec});
  const auto u2 = d.add_utility("U2", {dec});
  d.set_utility(u1, {1000.0, -500.0});
  d.set_utility(u2, {-150.0, 20.0});
  const auto [nd, info] = normalize_utilities(d);
  CHECK(info.f_lo == -500.0);
  CHECK(info.f_hi == 1000.0);
  CHECK(info.utility_count == 2);
  CHECK(nd.utility(u1)->values[0] == doctest::Approx(1.0));
  CHECK(nd.utility(u1)->values[1] == doctest::Approx(0.0));
  CHECK(nd.utility(u2)->values[0] == doctest::Approx((-150.0 + 500.0) / 1500.0));
}

TEST_CASE("normalization keeps an already-normalized table") {
  const InfluenceDiagram d = fixtures::single_decision(0.0, 1.0);
  const auto [nd, info] = normalize_utilities(d);
  CHECK(nd.utility(1)->values[0] == 0.0);
  CHECK(nd.utility(1)->values[1] == 1.0);
  CHECK(info.f_lo == 0.0);
  CHECK(info.f_hi == 1.0);
}

TEST_CASE("normalization rejects an all-equal diagram") {
  InfluenceDiagram d;
  const auto dec = d.add_decision("D", {}, 2);
  const auto u1 = d.add_utility("U1", {dec});
  const auto u2 = d.add_utility("U2", {dec});
  d.set_utility(u1, {3.0, 3.0});
  d.set_utility(u2, {3.0, 3.0});
  CHECK_THROWS_AS(normalize_utilities(d), TrivialDiagramError);
}

TEST_CASE("denormalization formula and round trip") {
  CHECK(denormalize_eu(0.0, {-500.0, 1000.0, 12}) == doctest::Approx(-6000.0));
  CHECK(denormalize_eu(0.37, {0.0, 1.0, 5}) == doctest::Approx(0.37));

  std::mt19937_64 rng(9);
  const InfluenceDiagram d = fixtures::small_random(77);
  const auto [nd, info] = normalize_utilities(d);
  for (int k = 0; k < 10; ++k) {
    const Strategy s = fixtures::random_mixed_strategy(d, rng);
    const double eu = expected_utility(d, s);
    const double eun = expected_utility(nd, s);
    CHECK(std::abs(denormalize_eu(eun, info) - eu) <= 1e-9);
    CHECK(eun >= -1e-9);
    CHECK(eun <= static_cast<double>(info.utility_count) + 1e-9);
  }
}

TEST_CASE("normalization preserves strategy order") {
  std::mt19937_64 rng(11);
  const InfluenceDiagram d = fixtures::small_random(88);
  const auto [nd, info] = normalize_utilities(d);
  (void)info;
  std::vector<Strategy> strategies;
  for (int k = 0; k < 8; ++k) strategies.push_back(fixtures::random_mixed_strategy(d, rng));
  for (std::size_t i = 0; i < strategies.size(); ++i)
    for (std::size_t j = i + 1; j < strategies.size(); ++j) {
      const double a = expected_utility(d, strategies[i]) - expected_utility(d, strategies[j]);
      const double b = expected_utility(nd, strategies[i]) - expected_utility(nd, strategies[j]);
      CHECK(a * b >= -1e-12);
    }
}

TEST_CASE("strategy ordinal decoding is lexicographic and complete") {
  const InfluenceDiagram d = fixtures::bridge_ops();
  CHECK(count_pure_strategies(d) == 4.0L);
  // Ordinal 0 picks alternative 0 everywhere.
  const Strategy first = pure_strategy_from_ordinal(d, 0);
  CHECK(first.policies[0].table[0] == 1.0);
  CHECK(first.policies[1].table[0] == 1.0);
  const Strategy last = pure_strategy_from_ordinal(d, 3);
  CHECK(last.policies[0].table[1] == 1.0);
  CHECK(last.policies[1].table[1] == 1.0);
}
