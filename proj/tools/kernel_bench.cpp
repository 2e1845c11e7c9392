// Compares the serial reference kernels against their OpenMP variants:
// the brute-force strategy sweep and the simplex tableau update (timed
// through whole LP solves of the reformulated planning model).  Results
// must agree bit for bit; only the wall clock may differ.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "limid/bench.hpp"
#include "limid/credal.hpp"
#include "limid/model.hpp"
#include "limid/reform.hpp"
#include "limid/simplex.hpp"

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double timed(F&& f) {
  const double t0 = now_s();
  f();
  return now_s() - t0;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 4;
  if (argc > 1) threads = std::atoi(argv[1]);
#ifndef _OPENMP
  std::printf("built without OpenMP; parallel runs fall back to serial\n");
#endif
  std::printf("kernel benchmark, %d worker threads\n\n", threads);

  // Brute-force strategy sweep on the planning model (2048 strategies).
  {
    const limid::InfluenceDiagram ebo = limid::build_ebo();
    std::pair<limid::Strategy, double> serial, parallel;
    const double ts = timed([&] { serial = limid::brute_force_meu_serial(ebo); });
    const double tp = timed([&] { parallel = limid::brute_force_meu(ebo, 1ull << 20, threads); });
    const bool same = serial.second == parallel.second &&
                      limid::expected_utility(ebo, serial.first) ==
                          limid::expected_utility(ebo, parallel.first);
    std::printf("brute-force sweep (planning model)\n");
    std::printf("  serial   %8.3f s   meu %.6f\n", ts, serial.second);
    std::printf("  openmp   %8.3f s   meu %.6f   speedup %.2fx   %s\n\n", tp, parallel.second,
                ts / tp, same ? "identical" : "MISMATCH");
  }

  // Brute-force sweep on a wider random diagram.
  {
    limid::RandomSpec spec;
    spec.total_nodes = 16;
    spec.decision_nodes = 4;
    spec.utility_nodes = 4;
    spec.seed = 7;
    const limid::InfluenceDiagram d = limid::gen_random_diagram(spec);
    std::pair<limid::Strategy, double> serial, parallel;
    const double ts = timed([&] { serial = limid::brute_force_meu_serial(d); });
    const double tp = timed([&] { parallel = limid::brute_force_meu(d, 1ull << 20, threads); });
    std::printf("brute-force sweep (random, 16 nodes, 4 decisions)\n");
    std::printf("  serial   %8.3f s   meu %.6f\n", ts, serial.second);
    std::printf("  openmp   %8.3f s   meu %.6f   speedup %.2fx   %s\n\n", tp, parallel.second,
                ts / tp, serial.second == parallel.second ? "identical" : "MISMATCH");
  }

  // Simplex tableau kernel, measured through the root relaxation of the
  // reformulated planning model.
  {
    const auto [normalized, info] = limid::normalize_utilities(limid::build_ebo());
    (void)info;
    const limid::CredalNetwork net = limid::limid_to_credal(normalized);
    std::vector<limid::PrecedenceOrdering> orderings;
    for (const limid::CredalQuery& q : net.queries())
      orderings.push_back(limid::choose_precedence_ordering(net, q.node));
    const limid::MilpProblem milp = limid::linearize(limid::generate_bilinear(net, orderings));

    limid::LpProblem lp;
    lp.num_vars = static_cast<int>(milp.variables.size());
    for (const limid::MilpVariable& v : milp.variables) {
      lp.lower.push_back(v.lower);
      lp.upper.push_back(v.upper);
    }
    lp.constraints = milp.constraints;
    lp.objective = milp.objective;
    lp.basis_hint = milp.lp_basis_hint;

    limid::LpSolution s1, s2;
    limid::SimplexOptions o1, o2;
    o2.threads = threads;
    const double ts = timed([&] { s1 = limid::solve_lp(lp, o1); });
    const double tp = timed([&] { s2 = limid::solve_lp(lp, o2); });
    std::printf("simplex root relaxation (%zu rows, %zu vars)\n", milp.constraints.size(),
                milp.variables.size());
    std::printf("  serial   %8.3f s   obj %.9f   iters %ld\n", ts, s1.objective, s1.iterations);
    std::printf("  openmp   %8.3f s   obj %.9f   iters %ld   speedup %.2fx   %s\n", tp,
                s2.objective, s2.iterations, ts / tp,
                s1.objective == s2.objective ? "identical" : "MISMATCH");
  }
  return 0;
}
