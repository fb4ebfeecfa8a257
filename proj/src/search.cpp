#include "fintop/search.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fintop {

namespace {

// Per-level enumeration budget: levels whose canonical count exceeds this
// are reported wholly inconclusive instead of enumerated.
constexpr long long kAssignmentBudget = 2'000'000;

long long sat_add(long long a, long long b) {
  if (a > LLONG_MAX - b) return LLONG_MAX;
  return a + b;
}

long long sat_mul(long long a, long long f) {
  if (f != 0 && a > LLONG_MAX / f) return LLONG_MAX;
  return a * f;
}

}  // namespace

long long stirling2(int m, int k) {
  if (m < 0 || k < 0) return 0;
  if (k > m) return 0;
  if (m == 0) return 1;  // k == 0 here
  if (k == 0) return 0;
  // S(i, j) = j * S(i-1, j) + S(i-1, j-1), rolling row over j.
  std::vector<long long> row(static_cast<size_t>(k) + 1, 0);
  row[0] = 1;  // S(0, 0)
  for (int i = 1; i <= m; ++i) {
    for (int j = std::min(i, k); j >= 1; --j)
      row[j] = sat_add(sat_mul(row[j], j), row[j - 1]);
    row[0] = 0;  // S(i, 0) = 0 for i >= 1
  }
  return row[k];
}

namespace {

bool rgs_rec(int m, int k, int pos, int used, std::vector<int>& a, long long& idx,
             const std::function<bool(long long, const std::vector<int>&)>& fn) {
  if (pos == m) {
    if (used != k) return true;
    const bool keep_going = fn(idx, a);
    ++idx;
    return keep_going;
  }
  if (used + (m - pos) < k) return true;  // cannot reach k blocks any more
  const int hi = std::min(used, k - 1);   // reuse a block, or open block `used`
  for (int v = 0; v <= hi; ++v) {
    a[pos] = v;
    if (!rgs_rec(m, k, pos + 1, std::max(used, v + 1), a, idx, fn)) return false;
  }
  return true;
}

}  // namespace

void enumerate_rgs(int m, int k,
                   const std::function<bool(long long, const std::vector<int>&)>& fn) {
  if (m < 1) throw std::invalid_argument("enumerate_rgs: need at least one cell");
  if (k < 1 || k > m) return;
  std::vector<int> a(static_cast<size_t>(m), 0);
  long long idx = 0;
  rgs_rec(m, k, 0, 0, a, idx, fn);
}

std::vector<std::vector<int>> rgs_enumerate(int m, int k) {
  std::vector<std::vector<int>> all;
  enumerate_rgs(m, k, [&](long long, const std::vector<int>& a) {
    all.push_back(a);
    return true;
  });
  return all;
}

SearchContext make_search_context(Invariant inv, SpacePtr x) {
  if (!x) throw std::invalid_argument("make_search_context: null space");
  SearchContext ctx;
  ctx.inv = inv;
  ctx.factor = x;
  ctx.factor_contractible = is_contractible(x);
  if (inv == Invariant::tc) {
    ctx.square = make_square(x);
    ctx.target = ctx.square->space;
  } else {
    ctx.target = x;
  }
  ctx.cells = ctx.target->maximal_points().to_indices();
  if (ctx.cells.size() > 64)
    throw std::invalid_argument("search supports at most 64 maximal cells, got " +
                                std::to_string(ctx.cells.size()));
  ctx.cell_down.reserve(ctx.cells.size());
  for (int c : ctx.cells) ctx.cell_down.push_back(ctx.target->down(c));
  return ctx;
}

namespace {

using BlockStatus = SearchContext::BlockStatus;
using BlockEntry = SearchContext::BlockEntry;

Decision decide_block(const SearchContext& ctx, const Bits& points, const Limits& lim) {
  if (ctx.inv == Invariant::tc) return admits_planner(*ctx.square, points, lim);
  return nullhomotopic_inclusion(make_subspace(ctx.target, points), lim);
}

Bits block_points(const SearchContext& ctx, uint64_t cellmask) {
  Bits pts(ctx.target->size());
  for (size_t i = 0; i < ctx.cells.size(); ++i)
    if ((cellmask >> i) & 1u) pts |= ctx.cell_down[i];
  return pts;
}

// Cheap classification: obstruction test, then the componentwise
// contraction fast path (Limits{1, 0} never starts a real search).
BlockEntry phase_a_entry(const SearchContext& ctx, uint64_t cellmask) {
  BlockEntry e;
  e.points = block_points(ctx, cellmask);
  if (ctx.inv == Invariant::tc &&
      row_column_obstruction(*ctx.square, e.points, ctx.factor_contractible)) {
    e.status = BlockStatus::bad_obstruction;
    return e;
  }
  Decision d = decide_block(ctx, e.points, Limits{1, 0.0});
  if (d.verdict == Verdict::yes) {
    e.status = BlockStatus::good;
    e.fence = std::move(*d.fence);
    e.visited = d.visited;
  } else if (d.verdict == Verdict::no) {
    e.status = BlockStatus::bad_exhaustion;
    e.visited = d.visited;
  } else {
    e.status = BlockStatus::unknown;
  }
  return e;
}

std::vector<Witness> witnesses_for(const SearchContext& ctx,
                                   const std::vector<uint64_t>& blockmasks) {
  std::vector<Witness> out;
  out.reserve(blockmasks.size());
  for (uint64_t m : blockmasks) {
    const BlockEntry& e = ctx.cache.at(m);
    out.push_back(Witness{e.points, e.fence});
  }
  return out;
}

}  // namespace

LevelResult evaluate_level(SearchContext& ctx, int k, const SearchOptions& opt) {
  const int M = static_cast<int>(ctx.cells.size());
  if (k < 1 || k > M) throw std::invalid_argument("evaluate_level: k out of range");

  LevelResult res;
  res.k = k;
  res.assignments = stirling2(M, k);
  if (res.assignments > kAssignmentBudget) {
    res.inconclusive = res.assignments;
    return res;
  }

  const bool par = opt.parallel;
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
  (void)par;

  // Distinct blocks appearing at this level, in first-appearance order.
  std::vector<uint64_t> masks;
  {
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> bm(static_cast<size_t>(k));
    enumerate_rgs(M, k, [&](long long, const std::vector<int>& a) {
      std::fill(bm.begin(), bm.end(), 0);
      for (int i = 0; i < M; ++i) bm[static_cast<size_t>(a[i])] |= uint64_t{1} << i;
      for (uint64_t b : bm)
        if (seen.insert(b).second) masks.push_back(b);
      return true;
    });
  }

  // Phase A on blocks not classified at an earlier level.
  std::vector<uint64_t> fresh;
  for (uint64_t m : masks)
    if (ctx.cache.find(m) == ctx.cache.end()) fresh.push_back(m);
  {
    std::vector<BlockEntry> entries(fresh.size());
    std::vector<std::exception_ptr> errors(fresh.size());
    const SearchContext& cctx = ctx;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
    for (long i = 0; i < static_cast<long>(fresh.size()); ++i) {
      try {
        entries[static_cast<size_t>(i)] = phase_a_entry(cctx, fresh[static_cast<size_t>(i)]);
      } catch (...) {
        errors[static_cast<size_t>(i)] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (size_t i = 0; i < fresh.size(); ++i) {
      if (entries[i].status == BlockStatus::bad_exhaustion)
        ctx.bad_points.push_back(entries[i].points);
      ctx.cache.emplace(fresh[i], std::move(entries[i]));
    }
  }

  // If some canonical assignment is already all-good, the level is feasible
  // and the remaining blocks never need a real search.
  const auto scan_feasible = [&]() -> std::optional<std::vector<uint64_t>> {
    std::optional<std::vector<uint64_t>> win;
    std::vector<uint64_t> bm(static_cast<size_t>(k));
    enumerate_rgs(M, k, [&](long long, const std::vector<int>& a) {
      std::fill(bm.begin(), bm.end(), 0);
      for (int i = 0; i < M; ++i) bm[static_cast<size_t>(a[i])] |= uint64_t{1} << i;
      for (uint64_t b : bm)
        if (ctx.cache.at(b).status != BlockStatus::good) return true;
      win = bm;
      return false;
    });
    return win;
  };
  if (auto win = scan_feasible()) {
    res.feasible = true;
    res.witnesses = witnesses_for(ctx, *win);
    return res;
  }

  // Phase B: resolve still-unknown blocks by hom-poset search, smallest
  // first, in fixed chunks so bad-subset derivations do not depend on
  // thread scheduling.
  std::vector<uint64_t> pending;
  for (uint64_t m : masks)
    if (ctx.cache.at(m).status == BlockStatus::unknown) pending.push_back(m);
  std::sort(pending.begin(), pending.end(), [](uint64_t a, uint64_t b) {
    const int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  constexpr size_t kChunk = 16;
  for (size_t base = 0; base < pending.size(); base += kChunk) {
    const size_t end = std::min(base + kChunk, pending.size());
    std::vector<uint64_t> todo;
    for (size_t i = base; i < end; ++i) {
      BlockEntry& e = ctx.cache.at(pending[i]);
      bool derived_bad = false;
      for (const Bits& bad : ctx.bad_points)
        if (bad.subset_of(e.points)) {
          derived_bad = true;
          break;
        }
      if (derived_bad) {
        e.status = BlockStatus::bad_exhaustion;
        e.derived = true;
      } else {
        todo.push_back(pending[i]);
      }
    }
    std::vector<Decision> ds(todo.size());
    std::vector<std::exception_ptr> errors(todo.size());
    const SearchContext& cctx = ctx;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
    for (long i = 0; i < static_cast<long>(todo.size()); ++i) {
      try {
        ds[static_cast<size_t>(i)] =
            decide_block(cctx, cctx.cache.at(todo[static_cast<size_t>(i)]).points, opt.limits);
      } catch (...) {
        errors[static_cast<size_t>(i)] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (size_t i = 0; i < todo.size(); ++i) {
      BlockEntry& e = ctx.cache.at(todo[i]);
      Decision& d = ds[i];
      e.visited = d.visited;
      if (d.verdict == Verdict::yes) {
        e.status = BlockStatus::good;
        e.fence = std::move(*d.fence);
      } else if (d.verdict == Verdict::no) {
        e.status = BlockStatus::bad_exhaustion;
        ctx.bad_points.push_back(e.points);
      } else {
        e.status = BlockStatus::inconclusive;
      }
    }
  }

  // Full classification: first all-good assignment wins; otherwise record
  // every refutation (obstruction preferred) and count the inconclusive.
  std::optional<std::vector<uint64_t>> win;
  std::vector<uint64_t> bm(static_cast<size_t>(k));
  enumerate_rgs(M, k, [&](long long idx, const std::vector<int>& a) {
    std::fill(bm.begin(), bm.end(), 0);
    for (int i = 0; i < M; ++i) bm[static_cast<size_t>(a[i])] |= uint64_t{1} << i;
    bool all_good = true;
    int first_obstruction = -1, first_exhaustion = -1, first_open = -1;
    for (int b = 0; b < k; ++b) {
      switch (ctx.cache.at(bm[static_cast<size_t>(b)]).status) {
        case BlockStatus::good:
          break;
        case BlockStatus::bad_obstruction:
          all_good = false;
          if (first_obstruction < 0) first_obstruction = b;
          break;
        case BlockStatus::bad_exhaustion:
          all_good = false;
          if (first_exhaustion < 0) first_exhaustion = b;
          break;
        default:
          all_good = false;
          if (first_open < 0) first_open = b;
          break;
      }
    }
    if (all_good) {
      win = bm;
      return false;
    }
    if (first_obstruction >= 0) {
      res.refutations.push_back(Refutation{idx, a, first_obstruction, RefuteReason::obstruction});
      ++res.refuted_obstruction;
    } else if (first_exhaustion >= 0) {
      res.refutations.push_back(Refutation{idx, a, first_exhaustion, RefuteReason::exhaustion});
      ++res.refuted_exhaustion;
    } else {
      ++res.inconclusive;
    }
    return true;
  });
  if (win) {
    res.feasible = true;
    res.witnesses = witnesses_for(ctx, *win);
    res.refutations.clear();
    res.refuted_obstruction = res.refuted_exhaustion = res.inconclusive = 0;
  }
  return res;
}

SearchReport run_search(Invariant inv, SpacePtr x, const SearchOptions& opt) {
  if (!x) throw std::invalid_argument("run_search: null space");
  if (!x->is_connected())
    throw std::invalid_argument(
        "cat/tc are defined here for connected spaces only; the input has " +
        std::to_string(x->components(Bits::full(x->size())).size()) + " components");

  SearchReport rep;
  rep.invariant = inv;
  rep.space = x;
  rep.square_target = (inv == Invariant::tc);
  rep.limits = opt.limits;

  SearchContext ctx = make_search_context(inv, x);
  rep.target = ctx.target;

  if (ctx.factor_contractible) {
    Bits full = Bits::full(ctx.target->size());
    Decision d = decide_block(ctx, full, opt.limits);
    if (d.verdict != Verdict::yes)
      throw std::logic_error("contractible input failed its own one-block certificate");
    rep.value = 1;
    rep.proven = true;
    rep.upper.push_back(Witness{full, std::move(*d.fence)});
    rep.notes.push_back("contractible input: single-block covering");
    return rep;
  }

  const int M = static_cast<int>(ctx.cells.size());
  std::optional<LevelResult> best;
  for (int k = M; k >= 1; --k) {
    LevelResult r = evaluate_level(ctx, k, opt);
    if (r.feasible) {
      best = std::move(r);
      continue;
    }
    if (!best)
      throw std::logic_error("all-singleton covering level unexpectedly infeasible");
    auto& lo = rep.lower.emplace();
    lo.k = r.k;
    lo.cells = M;
    lo.canonical_assignments = r.assignments;
    lo.refuted_obstruction = r.refuted_obstruction;
    lo.refuted_exhaustion = r.refuted_exhaustion;
    lo.inconclusive = r.inconclusive;
    lo.refutations = std::move(r.refutations);
    break;
  }
  if (!best) throw std::logic_error("descent finished without a feasible level");

  rep.value = best->k;
  rep.upper = std::move(best->witnesses);
  if (!rep.lower) {
    rep.proven = true;  // descended to a feasible one-block covering
  } else {
    rep.proven = rep.lower->inconclusive == 0 &&
                 static_cast<long long>(rep.lower->refutations.size()) ==
                     rep.lower->canonical_assignments;
    if (!rep.proven)
      rep.notes.push_back("level " + std::to_string(rep.lower->k) +
                          " has inconclusive assignments; the value is an upper bound");
  }
  return rep;
}

BoundsReport known_bounds(SpacePtr x) {
  if (!x) throw std::invalid_argument("known_bounds: null space");
  BoundsReport b;
  b.maximal_count = x->maximal_points().count();
  b.contractible = is_contractible(x);
  b.cat_upper = b.contractible ? 1 : b.maximal_count;
  b.tc_upper = b.contractible ? 1 : b.maximal_count * b.maximal_count;
  return b;
}

Covering product_covering(SpacePtr x, const std::vector<Witness>& factor_cover) {
  if (!x) throw std::invalid_argument("product_covering: null space");
  if (factor_cover.empty())
    throw std::invalid_argument("product_covering: empty factor covering");
  const int n = x->size();
  SpacePtr sq = product(x, x);
  Covering out;
  out.space = sq;

  for (const Witness& wi : factor_cover) {
    // Factor fences must contract their block to a point of x.
    const std::vector<int>& tail = wi.fence.back();
    for (int v : tail)
      if (v != tail.front())
        throw std::invalid_argument("product_covering: factor fence does not end constant");
  }

  for (const Witness& wi : factor_cover) {
    for (const Witness& wj : factor_cover) {
      Bits block(sq->size());
      wi.block.for_each([&](int p) {
        wj.block.for_each([&](int q) { block.set(p * n + q); });
      });
      Subspace sub = make_subspace(sq, block);

      std::vector<int> loc_i(static_cast<size_t>(n), -1), loc_j(static_cast<size_t>(n), -1);
      {
        int t = 0;
        wi.block.for_each([&](int p) { loc_i[static_cast<size_t>(p)] = t++; });
        t = 0;
        wj.block.for_each([&](int q) { loc_j[static_cast<size_t>(q)] = t++; });
      }

      Fence f{sub.space, sq, {}, {}};
      const size_t pts = sub.to_parent.size();
      std::vector<int> step(pts);
      // Slide the first coordinate down its factor fence.
      for (size_t t = 0; t < wi.fence.maps.size(); ++t) {
        for (size_t s = 0; s < pts; ++s) {
          const int p = sub.to_parent[s] / n, q = sub.to_parent[s] % n;
          step[s] = wi.fence.maps[t][static_cast<size_t>(loc_i[static_cast<size_t>(p)])] * n + q;
        }
        push_step(f, step, t == 0 ? Dir::le : wi.fence.dirs[t - 1]);
      }
      const int a = wi.fence.back().front();  // first coordinate now constant
      // Then the second coordinate, inside row a.
      for (size_t t = 1; t < wj.fence.maps.size(); ++t) {
        for (size_t s = 0; s < pts; ++s) {
          const int q = sub.to_parent[s] % n;
          step[s] = a * n + wj.fence.maps[t][static_cast<size_t>(loc_j[static_cast<size_t>(q)])];
        }
        push_step(f, step, wj.fence.dirs[t - 1]);
      }
      out.blocks.push_back(Witness{block, std::move(f)});
    }
  }
  return out;
}

ExplorationReport explore_antidiagonal(int n, const SearchOptions& opt) {
  if (n < 5)
    throw std::invalid_argument("explore_antidiagonal: need n >= 5, got " + std::to_string(n));
  ExplorationReport rep;
  rep.n = n;
  rep.limits = opt.limits;
  rep.factor = circle_model(n);
  Square sq = make_square(rep.factor);
  rep.square_space = sq.space;

  const int shift = n / 2;
  rep.antipode_rule = "like-type index shift: x_i -> x_((i+" + std::to_string(shift) +
                      ") mod " + std::to_string(n) + "), same for y";
  const auto antipode = [&](int z) {
    // Circle labels: x_i at index i, y_i at index n + i.
    if (z < n) return (z + shift) % n;
    return n + ((z - n + shift) % n);
  };

  Bits anti(sq.space->size());
  for (int z = 0; z < rep.factor->size(); ++z) anti.set(sq.pair_index(z, antipode(z)));
  const Bits closure = sq.space->upset_of(anti);
  const Bits q1 = closure.complement();
  const Bits q2 = sq.space->downset_of(closure);
  rep.covers = (q1 | q2) == Bits::full(sq.space->size());

  const bool factor_contractible = is_contractible(rep.factor);
  const auto study = [&](const std::string& name, const Bits& q) {
    ExplorationSet s;
    s.name = name;
    s.points = q;
    s.open = sq.space->is_open(q);
    s.obstruction = row_column_obstruction(sq, q, factor_contractible);
    s.decision = admits_planner(sq, q, opt.limits);
    rep.sets.push_back(std::move(s));
  };
  study("complement-of-antidiagonal-closure", q1);
  study("downset-of-antidiagonal-closure", q2);
  return rep;
}

}  // namespace fintop
