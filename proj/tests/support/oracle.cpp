#include "support/oracle.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace testsupport {

using namespace fintop;

long long stirling_dp(int m, int k) {
  if (m < 0 || k < 0 || k > m) return 0;
  std::vector<std::vector<long long>> S(static_cast<size_t>(m) + 1,
                                        std::vector<long long>(static_cast<size_t>(k) + 1, 0));
  S[0][0] = 1;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= std::min(i, k); ++j)
      S[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          S[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] +
          static_cast<long long>(j) * S[static_cast<size_t>(i - 1)][static_cast<size_t>(j)];
  return S[static_cast<size_t>(m)][static_cast<size_t>(k)];
}

std::vector<SpacePtr> connected_spaces_up_to_iso(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("enumeration supports 1..6 points");
  std::vector<std::pair<int, int>> slots;  // (i, j) with i < j
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  const int P = static_cast<int>(slots.size());

  std::vector<SpacePtr> out;
  std::set<uint64_t> seen;
  std::vector<int> perm(static_cast<size_t>(n));
  for (uint32_t rel = 0; rel < (1u << P); ++rel) {
    bool R[6][6] = {};
    for (int t = 0; t < P; ++t)
      if ((rel >> t) & 1u) R[slots[static_cast<size_t>(t)].first][slots[static_cast<size_t>(t)].second] = true;

    bool closed = true;
    for (int i = 0; i < n && closed; ++i)
      for (int j = 0; j < n && closed; ++j)
        if (R[i][j])
          for (int k = 0; k < n; ++k)
            if (R[j][k] && !R[i][k]) {
              closed = false;
              break;
            }
    if (!closed) continue;

    // connectivity of the comparability graph
    {
      std::vector<int> comp(static_cast<size_t>(n), -1);
      std::vector<int> stack{0};
      comp[0] = 0;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w)
          if ((R[v][w] || R[w][v]) && comp[static_cast<size_t>(w)] < 0) {
            comp[static_cast<size_t>(w)] = 0;
            stack.push_back(w);
          }
      }
      if (std::count(comp.begin(), comp.end(), 0) != n) continue;
    }

    // canonical form: minimum relation matrix over all relabelings
    uint64_t best = UINT64_MAX;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      uint64_t code = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          code = (code << 1) |
                 (R[perm[static_cast<size_t>(i)]][perm[static_cast<size_t>(j)]] ? 1u : 0u);
      best = std::min(best, code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(best).second) continue;

    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> leq;
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (R[i][j]) leq.emplace_back(i, j);
    out.push_back(make_space(labels, leq,
                             "enum" + std::to_string(n) + "#" + std::to_string(out.size())));
  }
  return out;
}

std::vector<Bits> all_open_sets(const FiniteSpace& s) {
  const std::vector<int> topo = s.topo_order();  // lower points first
  std::vector<Bits> out;
  Bits cur(s.size());
  std::function<void(size_t)> rec = [&](size_t t) {
    if (t == topo.size()) {
      if (cur.any()) out.push_back(cur);
      return;
    }
    const int p = topo[t];
    rec(t + 1);
    Bits need = s.down(p);
    need.reset(p);
    if (need.subset_of(cur)) {
      cur.set(p);
      rec(t + 1);
      cur.reset(p);
    }
  };
  rec(0);
  return out;
}

int brute_force_value(Invariant inv, SpacePtr x) {
  if (!x || !x->is_connected()) throw std::invalid_argument("oracle needs a connected space");
  const Limits generous{4'000'000, 0.0};

  std::optional<Square> sq;
  SpacePtr target = x;
  if (inv == Invariant::tc) {
    sq = make_square(x);
    target = sq->space;
  }
  const bool xc = is_contractible(x);

  // Restricting maps to the core of their domain is a bijection on homotopy
  // classes, so compare the two projections on core(Q) instead of Q.  This
  // keeps the breadth-first search tractable on the widest square ideals.
  const auto projections_homotopic = [&](const Bits& q) -> Decision {
    const Subspace sub = make_subspace(sq->space, q);
    const CoreTrace tr = core_trace(*sub.space, Bits::full(sub.space->size()));
    const Subspace csub = make_subspace(sub.space, tr.core);
    const size_t m = csub.space->size();
    OrderMap f{csub.space, x, std::vector<int>(m)};
    OrderMap g{csub.space, x, std::vector<int>(m)};
    for (size_t i = 0; i < m; ++i) {
      const int p = sub.to_parent[csub.to_parent[i]];
      f.a[i] = sq->first(p);
      g.a[i] = sq->second(p);
    }
    return homotopic(f, g, generous);
  };

  enum class Goodness { good, bad, unknown };
  const auto classify = [&](const Bits& q) -> Goodness {
    Decision d;
    if (inv == Invariant::tc) {
      if (row_column_obstruction(*sq, q, xc)) return Goodness::bad;
      d = projections_homotopic(q);
    } else {
      d = nullhomotopic_inclusion(make_subspace(target, q), generous);
    }
    if (d.verdict == Verdict::yes) return Goodness::good;
    if (d.verdict == Verdict::no) return Goodness::bad;
    return Goodness::unknown;
  };

  const Bits full = Bits::full(target->size());
  // A single good block is the best possible covering.
  if (is_contractible(*target, full) && classify(full) == Goodness::good) return 1;

  std::vector<Bits> ideals = all_open_sets(*target);
  // Ascending by size so small bad sets are found before their supersets,
  // which then never need a search of their own (goodness is monotone
  // under passing to open subsets).  Supersets of obstructed sets are
  // obstructed themselves, so only search-refuted sets join the bad list.
  std::stable_sort(ideals.begin(), ideals.end(),
                   [](const Bits& a, const Bits& b) { return a.count() < b.count(); });

  std::vector<Bits> good, bad, unknown;
  for (const Bits& q : ideals) {
    if (inv == Invariant::tc && row_column_obstruction(*sq, q, xc)) continue;
    bool derived_bad = false;
    for (const Bits& b : bad)
      if (b.subset_of(q)) {
        derived_bad = true;
        break;
      }
    if (derived_bad) continue;
    switch (classify(q)) {
      case Goodness::good: good.push_back(q); break;
      case Goodness::bad: bad.push_back(q); break;
      case Goodness::unknown: unknown.push_back(q); break;
    }
  }

  // Exact minimum cover of the target by maximal elements of `usable`:
  // greedy upper bound, then branch and bound on the least-covered point.
  // Returns INT_MAX when `usable` cannot cover the target.
  const auto min_cover = [&](const std::vector<Bits>& usable) -> int {
    std::vector<Bits> maximal;
    for (size_t i = 0; i < usable.size(); ++i) {
      bool below = false;
      for (size_t j = 0; j < usable.size(); ++j)
        if (j != i && usable[i].subset_of(usable[j]) && !(usable[j] == usable[i])) {
          below = true;
          break;
        }
      if (!below) maximal.push_back(usable[i]);
    }
    if (maximal.empty()) return INT_MAX;

    int best = INT_MAX;
    {
      Bits cov(target->size());
      int cnt = 0;
      while (!(cov == full)) {
        int gain = -1, pick = -1;
        for (size_t i = 0; i < maximal.size(); ++i) {
          Bits add = maximal[i];
          add.subtract(cov);
          if (add.count() > gain) {
            gain = add.count();
            pick = static_cast<int>(i);
          }
        }
        if (gain <= 0) return INT_MAX;
        cov |= maximal[static_cast<size_t>(pick)];
        ++cnt;
      }
      best = cnt;
    }

    std::function<void(const Bits&, int)> bb = [&](const Bits& cov, int used) {
      if (used >= best) return;
      if (cov == full) {
        best = used;
        return;
      }
      int point = -1;
      size_t fewest = SIZE_MAX;
      for (int p = 0; p < target->size(); ++p) {
        if (cov.test(p)) continue;
        size_t options = 0;
        for (const Bits& g : maximal)
          if (g.test(p)) ++options;
        if (options < fewest) {
          fewest = options;
          point = p;
        }
      }
      if (point < 0) return;
      for (const Bits& g : maximal)
        if (g.test(point)) bb(cov | g, used + 1);
    };
    bb(Bits(target->size()), 0);
    return best;
  };

  // Sets the search could not settle are bracketed: counting them as bad
  // gives an upper bound for the cover, counting them as good a lower one.
  // When both bounds agree the value is exact either way.
  const int hi = min_cover(good);
  if (unknown.empty()) {
    if (hi == INT_MAX) throw std::runtime_error("oracle: good sets do not cover the target");
    return hi;
  }
  std::vector<Bits> usable = good;
  usable.insert(usable.end(), unknown.begin(), unknown.end());
  const int lo = min_cover(usable);
  if (lo == hi) return hi;
  throw std::runtime_error(
      "oracle: cover value not pinned down (" + std::to_string(unknown.size()) +
      " undecided open sets, bounds " + std::to_string(lo) + ".." +
      (hi == INT_MAX ? std::string("none") : std::to_string(hi)) + ")");
}

}  // namespace testsupport
