#include "fintop/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace fintop {

using bigint = boost::multiprecision::cpp_int;

int SimplicialComplex::dim() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, int(s.size()) - 1);
  return d;
}

int SimplicialComplex::count_of_dim(int d) const {
  int c = 0;
  for (const auto& s : simplices)
    if (int(s.size()) == d + 1) ++c;
  return c;
}

SimplicialComplex order_complex(SpacePtr s) {
  SimplicialComplex k;
  k.base = s;
  const int n = s->size();
  // chains by ascending index of their top element
  std::vector<int> chain;
  auto extend = [&](auto&& self, int top) -> void {
    k.simplices.push_back(chain);
    for (int next = 0; next < n; ++next)
      if (next != top && s->leq(top, next)) {
        chain.push_back(next);
        self(self, next);
        chain.pop_back();
      }
  };
  for (int x = 0; x < n; ++x) {
    chain = {x};
    extend(extend, x);
  }
  for (auto& sim : k.simplices) std::sort(sim.begin(), sim.end());
  std::sort(k.simplices.begin(), k.simplices.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return k;
}

long long euler_characteristic(const SimplicialComplex& k) {
  long long chi = 0;
  for (const auto& s : k.simplices) chi += (s.size() % 2 == 1) ? 1 : -1;
  return chi;
}

namespace {

// Exact rank via fraction-free (Bareiss) elimination.
long long rank_exact(std::vector<std::vector<bigint>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  bigint prev = 1;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j)
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return (long long)r;
}

}  // namespace

BettiNumbers betti_numbers(const SimplicialComplex& k) {
  std::map<std::vector<int>, int> vert_id, edge_id;
  std::vector<std::vector<int>> verts, edges, tris;
  for (const auto& s : k.simplices) {
    if (s.size() == 1) {
      vert_id[s] = int(verts.size());
      verts.push_back(s);
    } else if (s.size() == 2) {
      edge_id[s] = int(edges.size());
      edges.push_back(s);
    } else if (s.size() == 3) {
      tris.push_back(s);
    }
  }
  const long long v = (long long)verts.size();
  const long long e = (long long)edges.size();

  // b0: components of the 1-skeleton by union-find
  std::vector<int> uf(verts.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& ed : edges) {
    int a = find(vert_id[{ed[0]}]), b = find(vert_id[{ed[1]}]);
    if (a != b) uf[a] = b;
  }
  long long comps = 0;
  for (size_t i = 0; i < uf.size(); ++i)
    if (find(int(i)) == int(i)) ++comps;

  // d1 : C1 -> C0, d2 : C2 -> C1, both over the rationals
  std::vector<std::vector<bigint>> d1(verts.size(), std::vector<bigint>(edges.size(), 0));
  for (size_t j = 0; j < edges.size(); ++j) {
    d1[vert_id[{edges[j][0]}]][j] = -1;
    d1[vert_id[{edges[j][1]}]][j] = 1;
  }
  std::vector<std::vector<bigint>> d2(edges.size(), std::vector<bigint>(tris.size(), 0));
  for (size_t j = 0; j < tris.size(); ++j) {
    const auto& t = tris[j];
    d2[edge_id[{t[1], t[2]}]][j] = 1;
    d2[edge_id[{t[0], t[2]}]][j] = -1;
    d2[edge_id[{t[0], t[1]}]][j] = 1;
  }
  long long rank_d1 = rank_exact(std::move(d1));
  long long rank_d2 = rank_exact(std::move(d2));

  BettiNumbers b;
  b.b0 = comps;
  b.b1 = (e - rank_d1) - rank_d2;
  (void)v;
  return b;
}

std::vector<McCordEntry> mccord_vertex_map(const SimplicialComplex& k) {
  std::vector<McCordEntry> out;
  out.reserve(k.simplices.size());
  for (const auto& s : k.simplices) {
    // the minimum of the chain in the specialization order
    int mn = s[0];
    for (int x : s)
      if (k.base->leq(x, mn)) mn = x;
    out.push_back({s, mn});
  }
  return out;
}

}  // namespace fintop
