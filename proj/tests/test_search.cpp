#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "fintop/homotopy.hpp"
#include "fintop/io.hpp"
#include "fintop/search.hpp"
#include "fintop/space.hpp"
#include "support/oracle.hpp"

using namespace fintop;

namespace {

// Valid restricted growth string with exactly k values.
bool valid_rgs(const std::vector<int>& a, int k) {
  if (a.empty() || a[0] != 0) return false;
  int top = 0;
  for (size_t i = 1; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] > top + 1) return false;
    top = std::max(top, a[i]);
  }
  return top == k - 1;
}

void check_witnesses_cover(const SearchReport& rep) {
  REQUIRE(int(rep.upper.size()) == rep.value);
  Bits covered(rep.target->size());
  for (const Witness& w : rep.upper) {
    CHECK(rep.target->is_open(w.block));
    CHECK(check_fence(w.fence).empty());
    covered |= w.block;
  }
  CHECK(covered == Bits::full(rep.target->size()));
}

}  // namespace

TEST_CASE("partition counts match the rolling-row recurrence") {
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(9, 2) == 255);
  CHECK(stirling2(4, 3) == 6);
  CHECK(stirling2(9, 3) == 3025);
  CHECK(stirling2(9, 8) == 36);
  CHECK(stirling2(9, 4) == 7770);
  CHECK(stirling2(5, 1) == 1);
  CHECK(stirling2(5, 5) == 1);
  CHECK(stirling2(3, 5) == 0);
  for (int m = 1; m <= 12; ++m)
    for (int k = 1; k <= m; ++k)
      CHECK(stirling2(m, k) == testsupport::stirling_dp(m, k));
}

TEST_CASE("canonical assignment enumeration") {
  for (auto [m, k] : {std::pair{4, 2}, {5, 3}, {6, 2}, {9, 2}}) {
    const std::vector<std::vector<int>> all = rgs_enumerate(m, k);
    CHECK(static_cast<long long>(all.size()) == stirling2(m, k));
    for (const auto& a : all) {
      CHECK(int(a.size()) == m);
      CHECK(valid_rgs(a, k));
    }
    for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1] < all[i]);
    const std::set<std::vector<int>> uniq(all.begin(), all.end());
    CHECK(uniq.size() == all.size());
  }

  // The callback receives consecutive ranks and can stop the stream.
  long long calls = 0;
  enumerate_rgs(4, 2, [&](long long index, const std::vector<int>&) {
    CHECK(index == calls);
    ++calls;
    return calls < 3;
  });
  CHECK(calls == 3);
}

TEST_CASE("coarse bounds from the maximal points") {
  const BoundsReport c = known_bounds(circle_model(3));
  CHECK(c.maximal_count == 3);
  CHECK_FALSE(c.contractible);
  CHECK(c.cat_upper == 3);
  CHECK(c.tc_upper == 9);

  const BoundsReport i = known_bounds(interval_model(2));
  CHECK(i.maximal_count == 1);
  CHECK(i.contractible);
  CHECK(i.cat_upper == 1);
  CHECK(i.tc_upper == 1);

  const BoundsReport s = known_bounds(sphere_model(1));
  CHECK(s.maximal_count == 2);
  CHECK(s.cat_upper == 2);
  CHECK(s.tc_upper == 4);
}

TEST_CASE("separation count of the shortest circle model") {
  SpacePtr x = circle_model(2);
  const SearchReport rep = run_search(Invariant::tc, x);
  CHECK(rep.invariant == Invariant::tc);
  CHECK(rep.square_target);
  CHECK(rep.target->size() == 16);
  CHECK(rep.value == 4);
  CHECK(rep.proven);
  check_witnesses_cover(rep);

  // Fences run from the first projection to the second.
  const Square sq = make_square(x);
  for (const Witness& w : rep.upper) {
    const Subspace sub = make_subspace(rep.target, w.block);
    for (int s = 0; s < sub.space->size(); ++s) {
      CHECK(w.fence.front()[s] == sq.first(sub.to_parent[s]));
      CHECK(w.fence.back()[s] == sq.second(sub.to_parent[s]));
    }
  }

  REQUIRE(rep.lower.has_value());
  CHECK(rep.lower->k == 3);
  CHECK(rep.lower->cells == 4);
  CHECK(rep.lower->canonical_assignments == stirling2(4, 3));
  CHECK(rep.lower->refuted_obstruction == 6);
  CHECK(rep.lower->refuted_exhaustion == 0);
  CHECK(rep.lower->inconclusive == 0);
  REQUIRE(rep.lower->refutations.size() == 6);
  for (size_t i = 0; i < rep.lower->refutations.size(); ++i) {
    const Refutation& r = rep.lower->refutations[i];
    CHECK(r.index == static_cast<long long>(i));
    CHECK(valid_rgs(r.rgs, 3));
    CHECK(r.reason == RefuteReason::obstruction);
    CHECK(r.block >= 0);
    CHECK(r.block < 3);
  }

  // The emitted artifact passes its own verifier.
  const CertifyResult cr = certify_artifact(report_to_json(rep));
  const std::string first_problem = cr.problems.empty() ? "" : cr.problems.front();
  CHECK_MESSAGE(cr.ok, first_problem);
  CHECK(cr.checks > 0);
}

TEST_CASE("separation count of the minimal sphere") {
  const SearchReport rep = run_search(Invariant::tc, sphere_model(1));
  CHECK(rep.value == 4);
  CHECK(rep.proven);
  check_witnesses_cover(rep);
  CHECK(certify_artifact(report_to_json(rep)).ok);
}

TEST_CASE("separation count of a complete bipartite join") {
  const SearchReport rep =
      run_search(Invariant::tc, nh_join(discrete(2), discrete(2)));
  CHECK(rep.value == 4);
  CHECK(rep.proven);
  CHECK(certify_artifact(report_to_json(rep)).ok);
}

TEST_CASE("covering number of circle models") {
  const SearchReport rep = run_search(Invariant::cat, circle_model(3));
  CHECK(rep.invariant == Invariant::cat);
  CHECK_FALSE(rep.square_target);
  CHECK(rep.value == 2);
  CHECK(rep.proven);
  check_witnesses_cover(rep);

  // Inclusion fences start at the inclusion and end constant.
  for (const Witness& w : rep.upper) {
    const Subspace sub = make_subspace(rep.target, w.block);
    CHECK(w.fence.front() == sub.to_parent);
    const std::vector<int>& last = w.fence.back();
    for (int v : last) CHECK(v == last[0]);
  }

  REQUIRE(rep.lower.has_value());
  CHECK(rep.lower->k == 1);
  CHECK(rep.lower->canonical_assignments == 1);
  CHECK(rep.lower->refuted_obstruction == 0);  // no squares in a cat run
  CHECK(certify_artifact(report_to_json(rep)).ok);

  CHECK(run_search(Invariant::cat, circle_model(2)).value == 2);
  CHECK(run_search(Invariant::cat, sphere_model(2)).value == 2);
}

TEST_CASE("covering number of a two-circle wedge") {
  SpacePtr w = wedge({circle_model(2), circle_model(2)}, {2, 2});
  const SearchReport rep = run_search(Invariant::cat, w);
  CHECK(rep.value == 2);
  CHECK(rep.proven);
  check_witnesses_cover(rep);
  CHECK(certify_artifact(report_to_json(rep)).ok);
}

TEST_CASE("contractible inputs take the one-block shortcut") {
  const SearchReport rep = run_search(Invariant::tc, interval_model(3));
  CHECK(rep.value == 1);
  CHECK(rep.proven);
  CHECK_FALSE(rep.lower.has_value());
  REQUIRE(rep.upper.size() == 1);
  CHECK(rep.upper[0].block == Bits::full(rep.target->size()));
  REQUIRE(rep.notes.size() > 0);
  CHECK(rep.notes[0].find("contractible") != std::string::npos);
  CHECK(certify_artifact(report_to_json(rep)).ok);

  CHECK(run_search(Invariant::cat, interval_model(2)).value == 1);
  CHECK(run_search(Invariant::cat, make_space({"p"}, {}, "point")).value == 1);
}

TEST_CASE("search agrees with the exhaustive oracle on small spaces") {
  const std::vector<SpacePtr> family = {
      circle_model(2),
      interval_model(2),
      nh_join(discrete(2), discrete(2)),
  };
  for (const SpacePtr& x : family) {
    for (Invariant inv : {Invariant::cat, Invariant::tc}) {
      const SearchReport rep = run_search(inv, x);
      REQUIRE(rep.proven);
      CHECK_MESSAGE(rep.value == testsupport::brute_force_value(inv, x),
                    x->kind());
    }
  }
}

TEST_CASE("space census used by the oracle") {
  CHECK(testsupport::connected_spaces_up_to_iso(1).size() == 1);
  CHECK(testsupport::connected_spaces_up_to_iso(2).size() == 1);
  CHECK(testsupport::connected_spaces_up_to_iso(3).size() == 3);
  CHECK(testsupport::connected_spaces_up_to_iso(4).size() == 10);
  for (const SpacePtr& s : testsupport::connected_spaces_up_to_iso(4)) {
    CHECK(validate_space(*s).ok());
    CHECK(s->is_connected());
  }
}

TEST_CASE("level evaluation refuses oversized enumerations") {
  // Thirteen maximal cells at five blocks exceed the per-level budget, so
  // the level reports every assignment as unresolved instead of starting.
  SpacePtr zig = interval_model(26);
  SearchContext ctx = make_search_context(Invariant::cat, zig);
  REQUIRE(ctx.cells.size() == 13);
  const LevelResult lr = evaluate_level(ctx, 5, SearchOptions{});
  CHECK(lr.assignments == stirling2(13, 5));
  CHECK(lr.assignments > 2'000'000);
  CHECK_FALSE(lr.feasible);
  CHECK(lr.inconclusive == lr.assignments);
  CHECK(lr.refutations.empty());
}

TEST_CASE("block cache stays monotone across levels") {
  SearchContext ctx = make_search_context(Invariant::tc, circle_model(2));
  SearchOptions opt;
  const LevelResult top = evaluate_level(ctx, 4, opt);
  CHECK(top.feasible);
  const LevelResult below = evaluate_level(ctx, 3, opt);
  CHECK_FALSE(below.feasible);

  using Status = SearchContext::BlockStatus;
  std::vector<const SearchContext::BlockEntry*> entries;
  for (const auto& [key, e] : ctx.cache) entries.push_back(&e);
  for (const auto* a : entries)
    for (const auto* b : entries) {
      if (a == b || !a->points.subset_of(b->points)) continue;
      const bool a_bad = a->status == Status::bad_obstruction ||
                         a->status == Status::bad_exhaustion;
      // A superset of a refuted block can never be certified good.
      if (a_bad) CHECK(b->status != Status::good);
      // And a subset of a certified block can never be refuted.
      if (b->status == Status::good) {
        CHECK(a->status != Status::bad_obstruction);
        CHECK(a->status != Status::bad_exhaustion);
      }
    }

  // Every recorded refuted point set is a cached exhaustion refusal.
  for (const Bits& bad : ctx.bad_points) {
    bool found = false;
    for (const auto* e : entries)
      if (e->points == bad && e->status == Status::bad_exhaustion) found = true;
    CHECK(found);
  }
}

TEST_CASE("square coverings built from factor coverings") {
  SpacePtr x = circle_model(3);
  const SearchReport rep = run_search(Invariant::cat, x);
  REQUIRE(rep.value == 2);

  const Covering cov = product_covering(x, rep.upper);
  CHECK(cov.space->size() == 36);
  REQUIRE(cov.blocks.size() == 4);
  Bits covered(36);
  for (const Witness& w : cov.blocks) {
    CHECK(cov.space->is_open(w.block));
    CHECK(check_fence(w.fence).empty());
    const Subspace sub = make_subspace(cov.space, w.block);
    CHECK(w.fence.front() == sub.to_parent);
    const std::vector<int>& last = w.fence.back();
    for (int v : last) CHECK(v == last[0]);
    covered |= w.block;
  }
  CHECK(covered == Bits::full(36));
}

TEST_CASE("search rejects disconnected or null input") {
  CHECK_THROWS_AS(run_search(Invariant::cat, discrete(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_search(Invariant::tc, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(make_search_context(Invariant::cat, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(product_covering(circle_model(2), {}),
                  std::invalid_argument);
}
