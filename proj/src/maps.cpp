#include "fintop/maps.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace fintop {

bool is_continuous(const OrderMap& f) {
  if (int(f.a.size()) != f.dom->size()) return false;
  for (int v : f.a)
    if (v < 0 || v >= f.cod->size()) return false;
  // monotone on covers implies monotone everywhere
  for (auto [x, y] : f.dom->hasse())
    if (!f.cod->leq(f.a[x], f.a[y])) return false;
  return true;
}

OrderMap identity_map(SpacePtr s) {
  OrderMap f{s, s, std::vector<int>(s->size())};
  for (int i = 0; i < s->size(); ++i) f.a[i] = i;
  return f;
}

OrderMap constant_map(SpacePtr dom, SpacePtr cod, int value) {
  return OrderMap{dom, cod, std::vector<int>(dom->size(), value)};
}

OrderMap compose(const OrderMap& g, const OrderMap& f) {
  OrderMap h{f.dom, g.cod, std::vector<int>(f.a.size())};
  for (size_t i = 0; i < f.a.size(); ++i) h.a[i] = g.a[f.a[i]];
  return h;
}

OrderMap restrict_map(const OrderMap& f, const Subspace& sub) {
  OrderMap r{sub.space, f.cod, {}};
  r.a.reserve(sub.to_parent.size());
  for (int p : sub.to_parent) r.a.push_back(f.a[p]);
  return r;
}

OrderMap projection_first(const Square& sq, const Subspace& sub) {
  OrderMap f{sub.space, sq.factor, {}};
  for (int p : sub.to_parent) f.a.push_back(sq.first(p));
  return f;
}

OrderMap projection_second(const Square& sq, const Subspace& sub) {
  OrderMap f{sub.space, sq.factor, {}};
  for (int p : sub.to_parent) f.a.push_back(sq.second(p));
  return f;
}

void push_step(Fence& f, const std::vector<int>& next, Dir d) {
  if (!f.maps.empty() && f.maps.back() == next) return;
  f.maps.push_back(next);
  if (f.maps.size() > 1) f.dirs.push_back(d);
}

std::vector<std::string> check_fence(const Fence& f) {
  std::vector<std::string> errs;
  if (!f.dom || !f.cod) return {"fence missing domain or codomain"};
  if (f.maps.empty()) return {"fence has no maps"};
  if (f.dirs.size() + 1 != f.maps.size())
    errs.push_back("fence has " + std::to_string(f.maps.size()) + " maps but " +
                   std::to_string(f.dirs.size()) + " direction tags");
  const int nd = f.dom->size(), nc = f.cod->size();
  for (size_t s = 0; s < f.maps.size(); ++s) {
    const auto& m = f.maps[s];
    if (int(m.size()) != nd) {
      errs.push_back("step " + std::to_string(s) + " has wrong arity");
      continue;
    }
    bool range_ok = true;
    for (int v : m)
      if (v < 0 || v >= nc) range_ok = false;
    if (!range_ok) {
      errs.push_back("step " + std::to_string(s) + " maps outside the codomain");
      continue;
    }
    for (auto [x, y] : f.dom->hasse())
      if (!f.cod->leq(m[x], m[y])) {
        errs.push_back("step " + std::to_string(s) + " not order-preserving at (" +
                       f.dom->label(x) + "," + f.dom->label(y) + ")");
        break;
      }
  }
  for (size_t s = 0; s + 1 < f.maps.size() && s < f.dirs.size(); ++s) {
    const auto& a = f.maps[s];
    const auto& b = f.maps[s + 1];
    if (int(a.size()) != nd || int(b.size()) != nd) continue;
    for (int x = 0; x < nd && x < int(a.size()); ++x) {
      bool ok = f.dirs[s] == Dir::le ? f.cod->leq(a[x], b[x]) : f.cod->leq(b[x], a[x]);
      if (!ok) {
        errs.push_back("steps " + std::to_string(s) + "->" + std::to_string(s + 1) +
                       " violate their direction tag at " + f.dom->label(x));
        break;
      }
    }
  }
  return errs;
}

Fence single_map_fence(const OrderMap& f) {
  Fence fence{f.dom, f.cod, {f.a}, {}};
  return fence;
}

Fence reversed(const Fence& f) {
  Fence r{f.dom, f.cod, {}, {}};
  r.maps.assign(f.maps.rbegin(), f.maps.rend());
  for (auto it = f.dirs.rbegin(); it != f.dirs.rend(); ++it) r.dirs.push_back(flip(*it));
  return r;
}

Fence concat(const Fence& f, const Fence& g) {
  if (f.dom != g.dom && !(f.dom->size() == g.dom->size()))
    throw std::invalid_argument("concat: domain mismatch");
  if (f.back() != g.front()) throw std::invalid_argument("concat: endpoints do not meet");
  Fence r = f;
  for (size_t s = 1; s < g.maps.size(); ++s) push_step(r, g.maps[s], g.dirs[s - 1]);
  return r;
}

Fence map_fence(const Fence& f, const OrderMap& g) {
  Fence r{f.dom, g.cod, {}, {}};
  for (size_t s = 0; s < f.maps.size(); ++s) {
    std::vector<int> m(f.maps[s].size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = g.a[f.maps[s][i]];
    push_step(r, m, s ? f.dirs[s - 1] : Dir::le);
  }
  return r;
}

Fence constant_zigzag(SpacePtr dom, SpacePtr cod, int from, int to) {
  // BFS in the comparability graph of the codomain; neighbors scanned in
  // ascending index so the path is reproducible.
  const int n = cod->size();
  std::vector<int> prev(n, -1);
  std::deque<int> queue{from};
  prev[from] = from;
  while (!queue.empty() && prev[to] == -1) {
    int x = queue.front();
    queue.pop_front();
    Bits adj = cod->down(x) | cod->up(x);
    adj.for_each([&](int y) {
      if (prev[y] == -1) {
        prev[y] = x;
        queue.push_back(y);
      }
    });
  }
  Fence f{dom, cod, {}, {}};
  if (prev[to] == -1) return f;  // disconnected codomain
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  push_step(f, std::vector<int>(dom->size(), path[0]), Dir::le);
  for (size_t i = 1; i < path.size(); ++i)
    push_step(f, std::vector<int>(dom->size(), path[i]),
              cod->leq(path[i - 1], path[i]) ? Dir::le : Dir::ge);
  return f;
}

Fence normalize_alternating(const Fence& f, Dir first) {
  Fence r{f.dom, f.cod, {f.maps.front()}, {}};
  Dir want = first;
  for (size_t s = 0; s + 1 < f.maps.size(); ++s) {
    if (f.maps[s] == f.maps[s + 1]) continue;
    if (f.dirs[s] != want) {
      // stationary step consumes the unwanted direction slot
      r.maps.push_back(r.maps.back());
      r.dirs.push_back(want);
      want = flip(want);
    }
    r.maps.push_back(f.maps[s + 1]);
    r.dirs.push_back(want);
    want = flip(want);
  }
  return r;
}

IntervalMap fence_to_interval_map(const Fence& f, const Subspace& q) {
  Fence norm = normalize_alternating(f, Dir::le);
  IntervalMap im;
  im.q = q;
  const int m = int(norm.maps.size()) - 1;
  im.interval = interval_model(m);
  im.domain = product(q.space, im.interval);
  im.map.dom = im.domain;
  im.map.cod = f.cod;
  const int nq = q.space->size();
  im.map.a.assign(size_t(nq) * (m + 1), 0);
  for (int x = 0; x < nq; ++x)
    for (int t = 0; t <= m; ++t) im.map.a[size_t(x) * (m + 1) + t] = norm.maps[t][x];
  return im;
}

Fence interval_map_to_fence(const IntervalMap& im) {
  const int nq = im.q.space->size();
  const int steps = im.interval->size();
  Fence f{im.q.space, im.map.cod, {}, {}};
  for (int t = 0; t < steps; ++t) {
    std::vector<int> m(nq);
    for (int x = 0; x < nq; ++x) m[x] = im.map.a[size_t(x) * steps + t];
    f.maps.push_back(m);  // keep every slice, including stationary ones
    if (t) f.dirs.push_back(t % 2 == 1 ? Dir::le : Dir::ge);
  }
  return f;
}

}  // namespace fintop
