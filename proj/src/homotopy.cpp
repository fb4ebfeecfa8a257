#include "fintop/homotopy.hpp"

#include <chrono>
#include <cstring>
#include <stdexcept>

namespace fintop {

// ---- beat points and cores ---------------------------------------------

namespace {

// Unique minimal element of `set` within the induced order, or -1.
int unique_minimal(const FiniteSpace& s, const Bits& set) {
  int found = -1;
  int minimals = 0;
  set.for_each([&](int u) {
    Bits strictly_below = s.down(u);
    strictly_below &= set;
    if (strictly_below.count() == 1) {  // only u itself
      ++minimals;
      found = u;
    }
  });
  return minimals == 1 ? found : -1;
}

int unique_maximal(const FiniteSpace& s, const Bits& set) {
  int found = -1;
  int maximals = 0;
  set.for_each([&](int u) {
    Bits strictly_above = s.up(u);
    strictly_above &= set;
    if (strictly_above.count() == 1) {
      ++maximals;
      found = u;
    }
  });
  return maximals == 1 ? found : -1;
}

}  // namespace

Bits beat_points(const FiniteSpace& s, const Bits& mask) {
  Bits beats(s.size());
  mask.for_each([&](int x) {
    Bits above = s.up(x);
    above &= mask;
    above.reset(x);
    if (above.any() && unique_minimal(s, above) != -1) {
      beats.set(x);
      return;
    }
    Bits below = s.down(x);
    below &= mask;
    below.reset(x);
    if (below.any() && unique_maximal(s, below) != -1) beats.set(x);
  });
  return beats;
}

Bits beat_points(const FiniteSpace& s) { return beat_points(s, Bits::full(s.size())); }

CoreTrace core_trace(const FiniteSpace& s, const Bits& mask) {
  CoreTrace tr;
  tr.core = mask;
  for (;;) {
    if (tr.core.count() <= 1) break;
    Bits beats = beat_points(s, tr.core);
    int x = beats.first();
    if (x == -1) break;
    Bits above = s.up(x);
    above &= tr.core;
    above.reset(x);
    int target;
    Dir dir;
    int m = above.any() ? unique_minimal(s, above) : -1;
    if (m != -1) {
      target = m;
      dir = Dir::le;  // retraction raises x
    } else {
      Bits below = s.down(x);
      below &= tr.core;
      below.reset(x);
      target = unique_maximal(s, below);
      dir = Dir::ge;
    }
    tr.steps.push_back({x, target, dir});
    tr.core.reset(x);
  }
  return tr;
}

SpacePtr core(SpacePtr s) {
  CoreTrace tr = core_trace(*s, Bits::full(s->size()));
  return make_subspace(s, tr.core, "core(" + s->kind() + ")").space;
}

bool is_contractible(const FiniteSpace& s, const Bits& mask) {
  return core_trace(s, mask).core.count() == 1;
}

bool is_contractible(SpacePtr s) { return is_contractible(*s, Bits::full(s->size())); }

Fence contraction_fence(const Subspace& sub) {
  const FiniteSpace& parent = *sub.parent;
  CoreTrace tr = core_trace(parent, sub.mask);
  std::vector<int> back(parent.size(), -1);
  for (size_t i = 0; i < sub.to_parent.size(); ++i) back[sub.to_parent[i]] = int(i);

  Fence f{sub.space, sub.space, {}, {}};
  std::vector<int> cur(sub.to_parent.size());
  for (size_t i = 0; i < cur.size(); ++i) cur[i] = int(i);
  f.maps.push_back(cur);
  for (const auto& st : tr.steps) {
    int r = back[st.removed], t = back[st.target];
    for (int& v : cur)
      if (v == r) v = t;
    push_step(f, cur, st.dir);
  }
  return f;
}

// ---- hom-poset breadth-first search ------------------------------------

namespace {

// BFS state over continuous maps dom -> cod.  Assignments are stored as
// byte vectors in one arena; a linear-probing table keyed by the bytes
// dedups them.  Everything is index-deterministic.
struct HomBfs {
  const FiniteSpace& dom;
  const FiniteSpace& cod;
  Limits lim;

  std::vector<int> order;               // linear extension of dom
  std::vector<std::vector<int>> preds;  // Hasse predecessors per point
  std::vector<uint8_t> arena;
  std::vector<int32_t> parent;
  std::vector<Dir> how;  // direction of the step into this node
  std::vector<int32_t> table;
  size_t table_mask = 0;
  uint64_t work = 0;
  uint64_t work_cap = 0;
  std::chrono::steady_clock::time_point deadline{};
  bool use_deadline = false;
  bool capped = false;

  HomBfs(const FiniteSpace& d, const FiniteSpace& c, const Limits& l) : dom(d), cod(c), lim(l) {
    order = dom.topo_order();
    preds.resize(dom.size());
    for (auto [a, b] : dom.hasse()) preds[b].push_back(a);
    size_t cap = 1024;
    table.assign(cap, -1);
    table_mask = cap - 1;
    work_cap = lim.max_visited ? lim.max_visited * 64 : 0;
    if (lim.max_seconds > 0) {
      use_deadline = true;
      deadline = std::chrono::steady_clock::now() +
                 std::chrono::microseconds(int64_t(lim.max_seconds * 1e6));
    }
  }

  size_t count() const { return parent.size(); }
  const uint8_t* at(size_t i) const { return arena.data() + i * dom.size(); }

  uint64_t hash_of(const uint8_t* a) const {
    uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < dom.size(); ++i) {
      h ^= a[i];
      h *= 1099511628211ull;
    }
    return h;
  }

  void grow_table() {
    std::vector<int32_t> fresh(table.size() * 2, -1);
    size_t mask = fresh.size() - 1;
    for (size_t i = 0; i < count(); ++i) {
      size_t slot = hash_of(at(i)) & mask;
      while (fresh[slot] != -1) slot = (slot + 1) & mask;
      fresh[slot] = int32_t(i);
    }
    table.swap(fresh);
    table_mask = mask;
  }

  // Returns the node index, inserting when new; -1 when the visited cap
  // would be exceeded.
  int32_t intern(const uint8_t* a, int32_t par, Dir d, bool* inserted) {
    size_t slot = hash_of(a) & table_mask;
    while (table[slot] != -1) {
      if (std::memcmp(at(table[slot]), a, dom.size()) == 0) {
        *inserted = false;
        return table[slot];
      }
      slot = (slot + 1) & table_mask;
    }
    if (lim.max_visited && count() >= lim.max_visited) {
      capped = true;
      *inserted = false;
      return -1;
    }
    int32_t id = int32_t(count());
    arena.insert(arena.end(), a, a + dom.size());
    parent.push_back(par);
    how.push_back(d);
    table[slot] = id;
    if (count() * 2 > table.size()) grow_table();
    *inserted = true;
    return id;
  }

  bool out_of_budget() {
    if (capped) return true;
    if (work_cap && work > work_cap) {
      capped = true;
      return true;
    }
    if (use_deadline && (work & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      capped = true;
      return true;
    }
    return false;
  }

  // Enumerates all continuous g <= f (lower = true) or g >= f along the
  // fixed linear extension, calling sink(g) for each complete assignment.
  // sink returns false to stop the enumeration.
  template <class Sink>
  bool enumerate_comparable(const uint8_t* f, bool lower, Sink sink) {
    std::vector<uint8_t> g(dom.size());
    return enum_rec(f, lower, 0, g.data(), sink);
  }

  template <class Sink>
  bool enum_rec(const uint8_t* f, bool lower, size_t pos, uint8_t* g, Sink sink) {
    if (pos == order.size()) return sink(g);
    ++work;
    if (out_of_budget()) return false;
    int q = order[pos];
    Bits cand = lower ? cod.down(f[q]) : cod.up(f[q]);
    for (int p : preds[q]) {
      // g must stay monotone: candidates above every assigned predecessor
      cand &= cod.up(g[p]);
      if (cand.none()) return true;
    }
    bool keep = true;
    cand.for_each([&](int v) {
      if (!keep) return;
      g[q] = uint8_t(v);
      keep = enum_rec(f, lower, pos + 1, g, sink);
    });
    return keep;
  }
};

Fence extract_fence(const HomBfs& bfs, SpacePtr dom, SpacePtr cod, int32_t node) {
  std::vector<int32_t> path;
  for (int32_t i = node; i != -1; i = bfs.parent[i]) path.push_back(i);
  Fence f{dom, cod, {}, {}};
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const uint8_t* a = bfs.at(*it);
    std::vector<int> m(a, a + dom->size());
    f.maps.push_back(std::move(m));
    if (f.maps.size() > 1) f.dirs.push_back(bfs.how[*it]);
  }
  return f;
}

// Runs the BFS from `start` until `accept` holds for some stored map.
// accept is judged on insertion, so the fence is a shortest one.
template <class Accept>
Decision run_bfs(SpacePtr dom, SpacePtr cod, const OrderMap& start, const Limits& lim,
                 Accept accept) {
  if (dom->size() >= 256 || cod->size() >= 256)
    throw std::invalid_argument("homotopy search supports fewer than 256 points per space");
  HomBfs bfs(*dom, *cod, lim);
  std::vector<uint8_t> root(start.a.begin(), start.a.end());
  bool inserted = false;
  int32_t root_id = bfs.intern(root.data(), -1, Dir::le, &inserted);
  Decision dec;
  if (root_id != -1 && accept(root.data())) {
    dec.verdict = Verdict::yes;
    dec.fence = extract_fence(bfs, dom, cod, root_id);
    dec.visited = bfs.count();
    return dec;
  }
  int32_t found = -1;
  for (size_t head = 0; head < bfs.count() && found == -1 && !bfs.capped; ++head) {
    // copy: the arena may reallocate while children are added
    std::vector<uint8_t> cur(bfs.at(head), bfs.at(head) + dom->size());
    for (bool lower : {true, false}) {
      if (found != -1) break;
      bfs.enumerate_comparable(cur.data(), lower, [&](const uint8_t* g) {
        bool fresh = false;
        int32_t id = bfs.intern(g, int32_t(head), lower ? Dir::ge : Dir::le, &fresh);
        if (id == -1) return false;
        if (fresh && accept(g)) {
          found = id;
          return false;
        }
        return true;
      });
    }
  }
  dec.visited = bfs.count();
  if (found != -1) {
    dec.verdict = Verdict::yes;
    dec.fence = extract_fence(bfs, dom, cod, found);
  } else if (bfs.capped) {
    dec.verdict = Verdict::inconclusive;
    dec.note = "search capped after " + std::to_string(bfs.count()) + " maps";
  } else {
    dec.verdict = Verdict::no;
    dec.note = "component exhausted: " + std::to_string(bfs.count()) + " maps";
  }
  return dec;
}

// Fence from the inclusion-like map `base` (a map sub -> cod) to a single
// constant, assuming every comparability component of the block is
// contractible: contract the components one at a time, then walk the
// component values together along comparability zigzags.
std::optional<Fence> componentwise_nullhomotopy(const Subspace& sub, const OrderMap& base) {
  const FiniteSpace& parent = *sub.parent;
  auto comps = parent.components(sub.mask);
  std::vector<int> comp_of(sub.to_parent.size(), -1);
  std::vector<int> comp_point;  // codomain value each component contracts to
  for (size_t c = 0; c < comps.size(); ++c) {
    CoreTrace tr = core_trace(parent, comps[c]);
    if (tr.core.count() != 1) return std::nullopt;
    for (size_t i = 0; i < sub.to_parent.size(); ++i)
      if (comps[c].test(sub.to_parent[i])) comp_of[i] = int(c);
    comp_point.push_back(-1);  // filled after the contraction below
  }

  std::vector<int> back(parent.size(), -1);
  for (size_t i = 0; i < sub.to_parent.size(); ++i) back[sub.to_parent[i]] = int(i);

  Fence f{sub.space, base.cod, {base.a}, {}};
  // contract each component inside the block, pushing values through `base`
  std::vector<int> self(sub.to_parent.size());
  for (size_t i = 0; i < self.size(); ++i) self[i] = int(i);
  for (size_t c = 0; c < comps.size(); ++c) {
    CoreTrace tr = core_trace(parent, comps[c]);
    for (const auto& st : tr.steps) {
      int r = back[st.removed], t = back[st.target];
      for (int& v : self)
        if (v == r) v = t;
      std::vector<int> step(self.size());
      for (size_t i = 0; i < self.size(); ++i) step[i] = base.a[self[i]];
      push_step(f, step, st.dir);
    }
    comp_point[c] = base.a[back[tr.core.first()]];
  }
  // migrate all component values to the first component's point
  const int goal = comp_point[0];
  for (size_t c = 1; c < comps.size(); ++c) {
    Fence walk = constant_zigzag(sub.space, base.cod, comp_point[c], goal);
    if (walk.maps.empty()) return std::nullopt;  // disconnected codomain
    // apply the walk to the points of component c only
    for (size_t s = 1; s < walk.maps.size(); ++s) {
      std::vector<int> step = f.maps.back();
      for (size_t i = 0; i < step.size(); ++i)
        if (comp_of[i] == int(c)) step[i] = walk.maps[s][0];
      push_step(f, step, walk.dirs[s - 1]);
    }
  }
  return f;
}

}  // namespace

Decision homotopic(const OrderMap& f, const OrderMap& g, const Limits& lim) {
  if (f.dom->size() != g.dom->size() || f.cod->size() != g.cod->size())
    throw std::invalid_argument("homotopic: maps must share domain and codomain");
  std::vector<uint8_t> target(g.a.begin(), g.a.end());
  return run_bfs(f.dom, f.cod, f, lim, [&](const uint8_t* a) {
    return std::memcmp(a, target.data(), target.size()) == 0;
  });
}

Decision nullhomotopic_inclusion(const Subspace& sub, const Limits& lim) {
  OrderMap incl{sub.space, sub.parent, std::vector<int>(sub.to_parent.begin(), sub.to_parent.end())};
  if (auto direct = componentwise_nullhomotopy(sub, incl)) {
    Decision dec;
    dec.verdict = Verdict::yes;
    dec.fence = std::move(*direct);
    dec.note = "componentwise contraction";
    return dec;
  }
  return run_bfs(sub.space, sub.parent, incl, lim, [&](const uint8_t* a) {
    for (size_t i = 1; i < sub.to_parent.size(); ++i)
      if (a[i] != a[0]) return false;
    return true;
  });
}

Decision admits_planner(const Square& sq, const Bits& q_mask, const Limits& lim) {
  if (!sq.space->is_open(q_mask)) throw std::invalid_argument("admits_planner: set is not open");
  Subspace sub = make_subspace(sq.space, q_mask);
  OrderMap pr1 = projection_first(sq, sub);
  OrderMap pr2 = projection_second(sq, sub);
  if (auto to_const1 = componentwise_nullhomotopy(sub, pr1)) {
    if (auto to_const2 = componentwise_nullhomotopy(sub, pr2)) {
      int c1 = to_const1->back()[0];
      int c2 = to_const2->back()[0];
      Fence bridge = constant_zigzag(sub.space, sq.factor, c1, c2);
      if (!bridge.maps.empty()) {
        Fence whole = concat(concat(*to_const1, bridge), reversed(*to_const2));
        Decision dec;
        dec.verdict = Verdict::yes;
        dec.fence = std::move(whole);
        dec.note = "componentwise contraction";
        return dec;
      }
    }
  }
  std::vector<uint8_t> target;
  for (int p : sub.to_parent) target.push_back(uint8_t(sq.second(p)));
  return run_bfs(sub.space, sq.factor, pr1, lim, [&](const uint8_t* a) {
    return std::memcmp(a, target.data(), target.size()) == 0;
  });
}

bool row_column_obstruction(const Square& sq, const Bits& q_mask, bool factor_contractible) {
  if (factor_contractible) return false;
  for (int z = 0; z < sq.n; ++z)
    if (sq.row[z].subset_of(q_mask) || sq.col[z].subset_of(q_mask)) return true;
  return false;
}

std::vector<std::string> check_planner_cert(const Square& sq, const PlannerCert& c) {
  std::vector<std::string> errs;
  if (c.block.width() != sq.space->size()) return {"block has wrong ambient size"};
  if (c.block.none()) errs.push_back("block is empty");
  if (!sq.space->is_open(c.block)) errs.push_back("block is not open");
  Subspace sub = make_subspace(sq.space, c.block);
  if (c.fence.dom->size() != sub.space->size()) errs.push_back("fence domain mismatch");
  if (c.fence.cod->size() != sq.factor->size()) errs.push_back("fence codomain mismatch");
  if (!errs.empty()) return errs;
  Fence f = c.fence;
  f.dom = sub.space;  // structural re-check against the rebuilt subspace
  f.cod = sq.factor;
  auto fence_errs = check_fence(f);
  errs.insert(errs.end(), fence_errs.begin(), fence_errs.end());
  OrderMap pr1 = projection_first(sq, sub);
  OrderMap pr2 = projection_second(sq, sub);
  if (f.maps.empty() || f.front() != pr1.a) errs.push_back("fence does not start at pr1");
  if (f.maps.empty() || f.back() != pr2.a) errs.push_back("fence does not end at pr2");
  return errs;
}

}  // namespace fintop
