// Serial vs OpenMP timings for the leave-one-out kernels.
//
//   bench_loo [features] [samples] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "ranksentinel/influence.hpp"
#include "ranksentinel/ranker.hpp"
#include "ranksentinel/synthetic.hpp"

using namespace ranksentinel;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  SyntheticSpec spec;
  spec.n_features = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
  const std::size_t samples = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
  spec.n_cases = samples / 2;
  spec.n_controls = samples - spec.n_cases;

  const auto x = generate(spec);
  const auto ranking = t_rank(x, 200);
  const int threads = omp_get_max_threads();
  std::printf("%zu features x %zu samples, top 200, %d OpenMP threads, best of %d\n",
              x.features(), x.samples(), threads, repeats);

  LooRankingSet loo;
  const double rank_serial = best_of(repeats, [&] { loo = loo_rankings_serial(x, ranking); });
  const double rank_parallel = best_of(repeats, [&] { loo = loo_rankings(x, ranking); });
  std::printf("loo_rankings         serial %9.4fs  parallel %9.4fs  speedup %.2fx\n", rank_serial,
              rank_parallel, rank_serial / rank_parallel);

  const WeightModel model(0.01, loo.m());
  std::vector<double> scores;
  const int inner = 200;
  const double score_serial = best_of(repeats, [&] {
    for (int k = 0; k < inner; ++k) scores = total_rank_changes_serial(model, loo);
  });
  const double score_parallel = best_of(repeats, [&] {
    for (int k = 0; k < inner; ++k) scores = total_rank_changes(model, loo);
  });
  std::printf("total_rank_changes   serial %9.4fs  parallel %9.4fs  speedup %.2fx  (x%d)\n",
              score_serial, score_parallel, score_serial / score_parallel, inner);
  return 0;
}
