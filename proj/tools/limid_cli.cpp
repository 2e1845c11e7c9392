// Command-line front end: strategy selection, the SPU baseline, the
// brute-force oracle, LP export, model generators and the benchmark
// sweep, all over the JSON diagram format.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "limid/bench.hpp"
#include "limid/json_io.hpp"
#include "limid/model.hpp"
#include "limid/reform.hpp"
#include "limid/solve.hpp"

namespace {

using limid::Json;

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw limid::InputError("cannot write \"" + path + "\"");
  out << text;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw limid::InputError("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw limid::InputError("cannot parse \"" + path + "\": " + e.what());
  }
}

struct SolverFlags {
  double time_limit = 0.0;
  std::int64_t node_limit = 0;
  double gap = 0.0;
  std::string search = "best-bound";
  bool no_warm_start = false;
  int threads = 1;
  std::string log_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--time-limit", time_limit, "wall-clock limit in seconds");
    cmd->add_option("--node-limit", node_limit, "stop after this many evaluated nodes");
    cmd->add_option("--gap", gap, "stop at this relative gap (percent)");
    cmd->add_option("--search", search, "node selection: best-bound or depth-first")
        ->check(CLI::IsMember({"best-bound", "depth-first"}));
    cmd->add_flag("--no-warm-start", no_warm_start, "skip the SPU warm start");
    cmd->add_option("--threads", threads, "worker threads for the parallel kernels");
    cmd->add_option("--log", log_path, "write the branch-and-bound run log to this file");
  }

  limid::SolveOptions to_options(std::ofstream& log_stream) const {
    limid::SolveOptions o;
    if (time_limit > 0) o.time_limit_s = time_limit;
    if (node_limit > 0) o.node_limit = node_limit;
    o.gap_tolerance_percent = gap;
    o.search = search == "depth-first" ? limid::SearchOrder::DepthFirst
                                       : limid::SearchOrder::BestBound;
    o.warm_start_spu = !no_warm_start;
    o.threads = threads;
    if (!log_path.empty()) {
      log_stream.open(log_path);
      if (!log_stream) throw limid::InputError("cannot write \"" + log_path + "\"");
      o.log = &log_stream;
    }
    return o;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Strategy selection for limited-memory influence diagrams"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "find the maximum-expected-utility strategy");
  std::string solve_path;
  solve->add_option("diagram", solve_path, "diagram JSON file")->required();
  SolverFlags solve_flags;
  solve_flags.attach(solve);

  // spu
  auto* spu_cmd = app.add_subcommand("spu", "single-policy-updating local search");
  std::string spu_path, spu_init = "first";
  int spu_max_sweeps = 1000;
  spu_cmd->add_option("diagram", spu_path, "diagram JSON file")->required();
  spu_cmd->add_option("--init", spu_init, "initial pure strategy: first or last alternative")
      ->check(CLI::IsMember({"first", "last"}));
  spu_cmd->add_option("--max-sweeps", spu_max_sweeps, "sweep limit");

  // brute
  auto* brute = app.add_subcommand("brute", "exhaustive search over pure strategies");
  std::string brute_path;
  std::uint64_t brute_cap = 1ull << 20;
  int brute_threads = 1;
  brute->add_option("diagram", brute_path, "diagram JSON file")->required();
  brute->add_option("--cap", brute_cap, "largest allowed number of pure strategies");
  brute->add_option("--threads", brute_threads, "worker threads for the strategy sweep");

  // eu
  auto* eu_cmd = app.add_subcommand("eu", "evaluate a strategy document");
  std::string eu_path, eu_strategy;
  eu_cmd->add_option("diagram", eu_path, "diagram JSON file")->required();
  eu_cmd->add_option("strategy", eu_strategy, "strategy or result JSON file")->required();

  // export-lp
  auto* export_cmd = app.add_subcommand("export-lp", "write the 0/1 program as LP text");
  std::string export_path, export_out;
  export_cmd->add_option("diagram", export_path, "diagram JSON file")->required();
  export_cmd->add_option("out", export_out, "output file (- for stdout)")->required();

  // gen-random
  auto* gen = app.add_subcommand("gen-random", "generate a random diagram");
  limid::RandomSpec gen_spec;
  std::string gen_out;
  int gen_utilities = -1;
  gen->add_option("--total", gen_spec.total_nodes, "total node count")->required();
  gen->add_option("--decisions", gen_spec.decision_nodes, "decision node count")->required();
  gen->add_option("--utilities", gen_utilities, "utility node count (default: decisions)");
  gen->add_option("--max-parents", gen_spec.max_parents, "parent cap for chance nodes");
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("out", gen_out, "output file (- for stdout)")->required();

  // ebo
  auto* ebo_cmd = app.add_subcommand("ebo", "write the built-in planning model");
  std::string ebo_out, ebo_mapping = "default";
  ebo_cmd->add_option("out", ebo_out, "output file (- for stdout)")->required();
  ebo_cmd->add_option("--mapping", ebo_mapping, "edge-grouping variant name");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "random-diagram benchmark sweep");
  std::vector<std::string> bench_specs;
  int bench_trials = 30;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  bool bench_no_times = false;
  SolverFlags bench_flags;
  bench_cmd->add_option("--spec", bench_specs, "diagram size as TOTAL,DECISIONS (repeatable)")
      ->required();
  bench_cmd->add_option("--trials", bench_trials, "instances per spec");
  bench_cmd->add_option("--seed", bench_seed, "base seed (instance i uses seed+i)");
  bench_cmd->add_option("--out", bench_out, "file prefix for per-spec .tsv/.json reports");
  bench_cmd->add_flag("--no-times", bench_no_times,
                      "omit wall-clock columns so output is byte-reproducible");
  bench_flags.attach(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    const limid::InfluenceDiagram d = limid::load_diagram_file(solve_path);
    std::ofstream log_stream;
    const limid::SolveResult r = limid::solve_meu(d, solve_flags.to_options(log_stream));
    std::cout << limid::result_to_json(d, r).dump(2) << "\n";
    return r.status == limid::SolveStatus::Proven ? 0 : 2;
  }

  if (spu_cmd->parsed()) {
    const limid::InfluenceDiagram d = limid::load_diagram_file(spu_path);
    limid::Strategy init = limid::first_lexicographic_strategy(d);
    if (spu_init == "last") {
      std::vector<std::vector<int>> choices;
      for (limid::NodeId dec : d.decision_ids())
        choices.emplace_back(d.parent_config_count(dec), d.node(dec).domain_size - 1);
      init = limid::pure_strategy_from_choices(d, choices);
    }
    const limid::SpuResult r = limid::spu(d, init, spu_max_sweeps);
    limid::SolveResult as_result;
    as_result.strategy = r.strategy;
    as_result.eu = r.eu;
    as_result.nodes_evaluated = r.evaluations;
    as_result.status = r.converged ? limid::SolveStatus::Proven : limid::SolveStatus::Stopped;
    std::cout << limid::result_to_json(d, as_result, /*include_bound=*/false).dump(2) << "\n";
    return r.converged ? 0 : 2;
  }

  if (brute->parsed()) {
    const limid::InfluenceDiagram d = limid::load_diagram_file(brute_path);
    const auto [strategy, value] = limid::brute_force_meu(d, brute_cap, brute_threads);
    limid::SolveResult as_result;
    as_result.strategy = strategy;
    as_result.eu = value;
    as_result.upper_bound = value;
    as_result.gap_percent = 0.0;
    as_result.nodes_evaluated =
        static_cast<std::int64_t>(limid::count_pure_strategies(d));
    as_result.status = limid::SolveStatus::Proven;
    std::cout << limid::result_to_json(d, as_result).dump(2) << "\n";
    return 0;
  }

  if (eu_cmd->parsed()) {
    const limid::InfluenceDiagram d = limid::load_diagram_file(eu_path);
    const limid::Strategy s = limid::strategy_from_json(d, load_json_file(eu_strategy));
    Json out;
    out["eu"] = limid::expected_utility(d, s);
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (export_cmd->parsed()) {
    const limid::InfluenceDiagram d = limid::load_diagram_file(export_path);
    const auto [normalized, info] = limid::normalize_utilities(d);
    (void)info;
    const limid::CredalNetwork net = limid::limid_to_credal(normalized);
    std::vector<limid::PrecedenceOrdering> orderings;
    for (const limid::CredalQuery& q : net.queries())
      orderings.push_back(limid::choose_precedence_ordering(net, q.node));
    const limid::MilpProblem milp = limid::linearize(limid::generate_bilinear(net, orderings));
    write_output(export_out, limid::export_lp(milp));
    return 0;
  }

  if (gen->parsed()) {
    if (gen_utilities >= 0) gen_spec.utility_nodes = gen_utilities;
    else gen_spec.utility_nodes = gen_spec.decision_nodes;
    const limid::InfluenceDiagram d = limid::gen_random_diagram(gen_spec);
    write_output(gen_out, limid::diagram_to_json(d).dump(2) + "\n");
    return 0;
  }

  if (ebo_cmd->parsed()) {
    const std::vector<limid::EboMapping> variants = limid::ebo_mapping_variants();
    const limid::EboMapping* chosen = nullptr;
    for (const limid::EboMapping& m : variants)
      if (m.name == ebo_mapping) chosen = &m;
    if (!chosen) {
      std::string names;
      for (const limid::EboMapping& m : variants) names += " " + m.name;
      throw limid::InputError("unknown mapping \"" + ebo_mapping + "\"; available:" + names);
    }
    const limid::InfluenceDiagram d = limid::build_ebo(*chosen);
    write_output(ebo_out, limid::diagram_to_json(d).dump(2) + "\n");
    return 0;
  }

  if (bench_cmd->parsed()) {
    std::vector<limid::RandomSpec> specs;
    for (const std::string& s : bench_specs) {
      limid::RandomSpec spec;
      if (std::sscanf(s.c_str(), "%d,%d", &spec.total_nodes, &spec.decision_nodes) != 2)
        throw limid::InputError("bad --spec \"" + s + "\"; expected TOTAL,DECISIONS");
      spec.utility_nodes = spec.decision_nodes;
      spec.seed = bench_seed;
      specs.push_back(spec);
    }
    std::ofstream log_stream;
    const limid::SolveOptions options = bench_flags.to_options(log_stream);
    const limid::BenchReport report = limid::run_benchmark(specs, bench_trials, options);
    std::cout << report.to_tsv(!bench_no_times);
    if (!bench_out.empty()) {
      for (const limid::RandomSpec& spec : specs) {
        limid::BenchReport single;
        for (const limid::BenchRow& r : report.rows)
          if (r.spec.total_nodes == spec.total_nodes &&
              r.spec.decision_nodes == spec.decision_nodes)
            single.rows.push_back(r);
        for (const limid::BenchAggregate& a : report.aggregates)
          if (a.spec.total_nodes == spec.total_nodes &&
              a.spec.decision_nodes == spec.decision_nodes)
            single.aggregates.push_back(a);
        const std::string stem = bench_out + "_n" + std::to_string(spec.total_nodes) + "_d" +
                                 std::to_string(spec.decision_nodes) + "_s" +
                                 std::to_string(spec.seed);
        write_output(stem + ".tsv", single.to_tsv(!bench_no_times));
        write_output(stem + ".json", single.to_json(!bench_no_times));
      }
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const limid::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
