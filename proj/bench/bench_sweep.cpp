// Benchmark: the serial block sweep against the OpenMP sweep on two
// representative level evaluations, checking along the way that both modes
// return field-identical results.  Exits nonzero on any disagreement.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fintop/search.hpp"
#include "fintop/space.hpp"

using fintop::evaluate_level;
using fintop::Invariant;
using fintop::LevelResult;
using fintop::make_search_context;
using fintop::SearchContext;
using fintop::SearchOptions;
using fintop::SpacePtr;

namespace {

struct Workload {
  std::string name;
  Invariant inv;
  SpacePtr space;
  int level;
};

// One level evaluation on a fresh context, so no cache warmth leaks
// between the timed modes.
LevelResult timed_level(const Workload& w, bool parallel, double& seconds) {
  SearchContext ctx = make_search_context(w.inv, w.space);
  SearchOptions opt;
  opt.parallel = parallel;
  const auto t0 = std::chrono::steady_clock::now();
  LevelResult r = evaluate_level(ctx, w.level, opt);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool levels_equal(const LevelResult& a, const LevelResult& b) {
  if (a.k != b.k || a.assignments != b.assignments || a.feasible != b.feasible ||
      a.refuted_obstruction != b.refuted_obstruction ||
      a.refuted_exhaustion != b.refuted_exhaustion || a.inconclusive != b.inconclusive)
    return false;
  if (a.witnesses.size() != b.witnesses.size()) return false;
  for (size_t i = 0; i < a.witnesses.size(); ++i) {
    if (!(a.witnesses[i].block == b.witnesses[i].block)) return false;
    if (a.witnesses[i].fence.maps != b.witnesses[i].fence.maps) return false;
    if (a.witnesses[i].fence.dirs != b.witnesses[i].fence.dirs) return false;
  }
  if (a.refutations.size() != b.refutations.size()) return false;
  for (size_t i = 0; i < a.refutations.size(); ++i) {
    if (a.refutations[i].index != b.refutations[i].index) return false;
    if (a.refutations[i].rgs != b.refutations[i].rgs) return false;
    if (a.refutations[i].block != b.refutations[i].block) return false;
    if (a.refutations[i].reason != b.refutations[i].reason) return false;
  }
  return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  const std::vector<Workload> workloads = {
      // Wide level: 255 two-block assignments over the squared 6-point
      // circle, most refuted by the row/column obstruction.
      {"tc circle:3, level 2", Invariant::tc, fintop::circle_model(3), 2},
      // Deep level: 36 eight-block assignments over the squared 5-point
      // join, refuted only by exhausting hom-poset components.
      {"tc join(2,3), level 8", Invariant::tc,
       fintop::nh_join(fintop::discrete(2), fintop::discrete(3)), 8},
  };

  std::printf("block sweep benchmark (%d thread%s available)\n", threads,
              threads == 1 ? "" : "s");
  bool all_equal = true;
  for (const Workload& w : workloads) {
    double serial_s = 0.0, parallel_s = 0.0;
    const LevelResult rs = timed_level(w, false, serial_s);
    const LevelResult rp = timed_level(w, true, parallel_s);
    const bool same = levels_equal(rs, rp);
    all_equal = all_equal && same;
    std::printf("  %-24s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   results %s\n",
                w.name.c_str(), serial_s, parallel_s,
                parallel_s > 0.0 ? serial_s / parallel_s : 0.0,
                same ? "identical" : "DIFFER");
  }
  if (!all_equal) {
    std::printf("FAILURE: execution modes disagree\n");
    return 1;
  }
  return 0;
}
