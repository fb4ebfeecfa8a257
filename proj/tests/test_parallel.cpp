#include <doctest.h>

#include <string>
#include <vector>

#include "fintop/io.hpp"
#include "fintop/search.hpp"
#include "fintop/space.hpp"

using namespace fintop;

namespace {

// Field-by-field equality of two level evaluations, witnesses and
// refutations included.
void check_levels_equal(const LevelResult& a, const LevelResult& b) {
  CHECK(a.k == b.k);
  CHECK(a.assignments == b.assignments);
  CHECK(a.feasible == b.feasible);
  CHECK(a.refuted_obstruction == b.refuted_obstruction);
  CHECK(a.refuted_exhaustion == b.refuted_exhaustion);
  CHECK(a.inconclusive == b.inconclusive);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (size_t i = 0; i < a.witnesses.size(); ++i) {
    CHECK(a.witnesses[i].block == b.witnesses[i].block);
    CHECK(a.witnesses[i].fence.maps == b.witnesses[i].fence.maps);
    CHECK(a.witnesses[i].fence.dirs == b.witnesses[i].fence.dirs);
  }
  REQUIRE(a.refutations.size() == b.refutations.size());
  for (size_t i = 0; i < a.refutations.size(); ++i) {
    CHECK(a.refutations[i].index == b.refutations[i].index);
    CHECK(a.refutations[i].rgs == b.refutations[i].rgs);
    CHECK(a.refutations[i].block == b.refutations[i].block);
    CHECK(a.refutations[i].reason == b.refutations[i].reason);
  }
}

SearchOptions serial_opt() {
  SearchOptions o;
  o.parallel = false;
  return o;
}

SearchOptions parallel_opt(int threads = 0) {
  SearchOptions o;
  o.parallel = true;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("level evaluation is independent of the execution mode") {
  SpacePtr spaces[] = {circle_model(2), nh_join(discrete(2), discrete(3))};
  const int levels[] = {3, 8};
  for (int i = 0; i < 2; ++i) {
    // Fresh contexts per run: the cache must not leak between modes.
    SearchContext serial_ctx = make_search_context(Invariant::tc, spaces[i]);
    SearchContext par_ctx = make_search_context(Invariant::tc, spaces[i]);
    SearchContext two_ctx = make_search_context(Invariant::tc, spaces[i]);
    const LevelResult s = evaluate_level(serial_ctx, levels[i], serial_opt());
    const LevelResult p = evaluate_level(par_ctx, levels[i], parallel_opt());
    const LevelResult t = evaluate_level(two_ctx, levels[i], parallel_opt(2));
    check_levels_equal(s, p);
    check_levels_equal(s, t);
  }
}

TEST_CASE("full searches serialize identically in every execution mode") {
  struct Job {
    Invariant inv;
    SpacePtr space;
    Limits limits;
  };
  const std::vector<Job> jobs = {
      {Invariant::tc, circle_model(2), Limits{}},
      {Invariant::tc, nh_join(discrete(2), discrete(3)), Limits{}},
      {Invariant::cat, wedge({circle_model(2), circle_model(2)}, {2, 2}),
       Limits{}},
      // A capped run: even the inconclusive notes and visit counts in the
      // artifact must not depend on the thread count.
      {Invariant::cat, product(circle_model(3), circle_model(3)),
       Limits{2000, 0.0}},
  };
  for (const Job& job : jobs) {
    SearchOptions s = serial_opt();
    s.limits = job.limits;
    SearchOptions p = parallel_opt();
    p.limits = job.limits;
    SearchOptions t = parallel_opt(3);
    t.limits = job.limits;
    const std::string base =
        canonical_text(report_to_json(run_search(job.inv, job.space, s)));
    const std::string par =
        canonical_text(report_to_json(run_search(job.inv, job.space, p)));
    const std::string three =
        canonical_text(report_to_json(run_search(job.inv, job.space, t)));
    CHECK(base == par);
    CHECK(base == three);
  }
}

TEST_CASE("exploration artifacts are mode-independent") {
  SearchOptions s = serial_opt();
  s.limits = Limits{500, 0.0};
  SearchOptions p = parallel_opt(2);
  p.limits = Limits{500, 0.0};
  const std::string a =
      canonical_text(exploration_to_json(explore_antidiagonal(5, s)));
  const std::string b =
      canonical_text(exploration_to_json(explore_antidiagonal(5, p)));
  CHECK(a == b);
}
