#include "fintop/space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fintop {

std::string ValidationReport::joined() const {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

std::optional<int> FiniteSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteSpace::max_height() const {
  int h = 0;
  for (int x = 0; x < n_; ++x) h = std::max(h, height_[x]);
  return h;
}

Bits FiniteSpace::maximal_points() const {
  Bits m(n_);
  for (int x = 0; x < n_; ++x)
    if (up_[x].count() == 1) m.set(x);
  return m;
}

Bits FiniteSpace::minimal_points() const {
  Bits m(n_);
  for (int x = 0; x < n_; ++x)
    if (down_[x].count() == 1) m.set(x);
  return m;
}

Bits FiniteSpace::downset_of(const Bits& s) const {
  Bits r(n_);
  s.for_each([&](int x) { r |= down_[x]; });
  return r;
}

Bits FiniteSpace::upset_of(const Bits& s) const {
  Bits r(n_);
  s.for_each([&](int x) { r |= up_[x]; });
  return r;
}

std::vector<Bits> FiniteSpace::components(const Bits& s) const {
  std::vector<Bits> out;
  Bits seen(n_);
  s.for_each([&](int start) {
    if (seen.test(start)) return;
    // flood fill over comparability edges within s
    Bits comp(n_);
    comp.set(start);
    for (;;) {
      Bits next = comp;
      comp.for_each([&](int x) {
        next |= down_[x];
        next |= up_[x];
      });
      next &= s;
      if (next == comp) break;
      comp = next;
    }
    seen |= comp;
    out.push_back(comp);
  });
  return out;
}

bool FiniteSpace::is_connected(const Bits& s) const {
  if (s.none()) return false;
  return components(s).size() == 1;
}

ValidationReport validate_relation(const std::vector<std::string>& labels,
                                   const std::vector<std::pair<int, int>>& leq_pairs) {
  ValidationReport rep;
  const int n = int(labels.size());
  if (n == 0) rep.problems.push_back("space has no points");
  std::unordered_map<std::string, int> seen;
  for (int i = 0; i < n; ++i) {
    if (labels[i].empty()) rep.problems.push_back("empty label at position " + std::to_string(i));
    auto [it, fresh] = seen.emplace(labels[i], i);
    if (!fresh)
      rep.problems.push_back("duplicate label \"" + labels[i] + "\" at positions " +
                             std::to_string(it->second) + " and " + std::to_string(i));
  }
  bool range_ok = true;
  for (auto [a, b] : leq_pairs)
    if (a < 0 || a >= n || b < 0 || b >= n) {
      rep.problems.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                             ") out of range");
      range_ok = false;
    }
  if (!range_ok || n == 0) return rep;

  // Transitive closure over the given edges, then antisymmetry: a cycle
  // shows up as leq(a,b) and leq(b,a) with a != b.
  std::vector<Bits> below(n, Bits(n));
  for (int i = 0; i < n; ++i) below[i].set(i);
  for (auto [a, b] : leq_pairs) below[b].set(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (int b = 0; b < n; ++b) {
      Bits acc = below[b];
      below[b].for_each([&](int a) { acc |= below[a]; });
      if (!(acc == below[b])) {
        below[b] = acc;
        changed = true;
      }
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (below[b].test(a) && below[a].test(b))
        rep.problems.push_back("antisymmetry violated: \"" + labels[a] + "\" <= \"" + labels[b] +
                               "\" and \"" + labels[b] + "\" <= \"" + labels[a] + "\"");
  return rep;
}

ValidationReport validate_space(const FiniteSpace& s) {
  ValidationReport rep;
  const int n = s.size();
  std::set<std::string> labels(s.labels().begin(), s.labels().end());
  if (int(labels.size()) != n) rep.problems.push_back("duplicate labels");
  for (int x = 0; x < n; ++x)
    if (!s.leq(x, x)) rep.problems.push_back("reflexivity fails at " + s.label(x));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x != y && s.leq(x, y) && s.leq(y, x))
        rep.problems.push_back("antisymmetry fails at (" + s.label(x) + "," + s.label(y) + ")");
      if (!s.leq(x, y)) continue;
      for (int z = 0; z < n; ++z)
        if (s.leq(y, z) && !s.leq(x, z))
          rep.problems.push_back("transitivity fails at (" + s.label(x) + "," + s.label(y) + "," +
                                 s.label(z) + ")");
    }
  // Closed relation must equal the closure of the Hasse edges, and each
  // Hasse edge must be a cover.
  std::vector<Bits> below(n, Bits(n));
  for (int i = 0; i < n; ++i) below[i].set(i);
  for (auto [a, b] : s.hasse()) below[b].set(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (int b = 0; b < n; ++b) {
      Bits acc = below[b];
      below[b].for_each([&](int a) { acc |= below[a]; });
      if (!(acc == below[b])) {
        below[b] = acc;
        changed = true;
      }
    }
  }
  for (int b = 0; b < n; ++b)
    if (!(below[b] == s.down(b)))
      rep.problems.push_back("hasse/closure mismatch at " + s.label(b));
  for (auto [a, b] : s.hasse()) {
    bool cover = s.leq(a, b) && a != b;
    for (int c = 0; cover && c < n; ++c)
      if (c != a && c != b && s.leq(a, c) && s.leq(c, b)) cover = false;
    if (!cover)
      rep.problems.push_back("hasse edge (" + s.label(a) + "," + s.label(b) + ") is not a cover");
  }
  return rep;
}

SpacePtr make_space(std::vector<std::string> labels,
                    const std::vector<std::pair<int, int>>& leq_pairs, std::string kind) {
  ValidationReport rep = validate_relation(labels, leq_pairs);
  if (!rep.ok()) throw std::invalid_argument("invalid space: " + rep.joined());

  auto s = std::make_shared<FiniteSpace>();
  const int n = int(labels.size());
  s->n_ = n;
  s->labels_ = std::move(labels);
  for (int i = 0; i < n; ++i) s->index_[s->labels_[i]] = i;
  s->kind_ = std::move(kind);

  s->down_.assign(n, Bits(n));
  for (int i = 0; i < n; ++i) s->down_[i].set(i);
  for (auto [a, b] : leq_pairs) s->down_[b].set(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (int b = 0; b < n; ++b) {
      Bits acc = s->down_[b];
      s->down_[b].for_each([&](int a) { acc |= s->down_[a]; });
      if (!(acc == s->down_[b])) {
        s->down_[b] = acc;
        changed = true;
      }
    }
  }
  s->up_.assign(n, Bits(n));
  for (int b = 0; b < n; ++b)
    s->down_[b].for_each([&](int a) { s->up_[a].set(b); });

  // Transitive reduction: (a,b) is a cover when nothing sits strictly between.
  for (int b = 0; b < n; ++b)
    s->down_[b].for_each([&](int a) {
      if (a == b) return;
      bool cover = true;
      s->down_[b].for_each([&](int c) {
        if (c != a && c != b && s->down_[c].test(a)) cover = false;
      });
      if (cover) s->hasse_.push_back({a, b});
    });
  std::sort(s->hasse_.begin(), s->hasse_.end());

  s->height_.assign(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : s->hasse_)
      if (s->height_[b] < s->height_[a] + 1) {
        s->height_[b] = s->height_[a] + 1;
        changed = true;
      }
  }
  s->topo_.resize(n);
  std::iota(s->topo_.begin(), s->topo_.end(), 0);
  std::stable_sort(s->topo_.begin(), s->topo_.end(),
                   [&](int a, int b) { return s->height_[a] < s->height_[b]; });
  return s;
}

// ---- constructors ------------------------------------------------------

SpacePtr discrete(int n) {
  if (n < 1) throw std::invalid_argument("discrete: need n >= 1");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return make_space(std::move(labels), {}, "discrete:" + std::to_string(n));
}

SpacePtr interval_model(int m) {
  if (m < 0) throw std::invalid_argument("interval: need m >= 0");
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i <= m; ++i) labels.push_back("x" + std::to_string(i));
  // odd positions are the tops of the zigzag
  for (int i = 0; i < m; ++i) {
    if (i % 2 == 0)
      e.push_back({i, i + 1});
    else
      e.push_back({i + 1, i});
  }
  return make_space(std::move(labels), e, "interval:" + std::to_string(m));
}

SpacePtr circle_model(int n) {
  if (n < 2) throw std::invalid_argument("circle: need n >= 2");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  for (int i = 0; i < n; ++i) labels.push_back("y" + std::to_string(i));
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) {
    e.push_back({i, n + i});                  // x_i < y_i
    e.push_back({(i + n - 1) % n, n + i});    // x_{i-1} < y_i
  }
  return make_space(std::move(labels), e, "circle:" + std::to_string(n));
}

SpacePtr sphere_model(int n) {
  if (n < 0) throw std::invalid_argument("sphere: need n >= 0");
  // Iterated non-Hausdorff suspension of the two-point discrete space:
  // level k holds the pole pair {x_k, y_k}, every lower level below it.
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> e;
  for (int k = 0; k <= n; ++k) {
    labels.push_back("x" + std::to_string(k));
    labels.push_back("y" + std::to_string(k));
  }
  for (int k = 1; k <= n; ++k)
    for (int j = 0; j < 2 * k; ++j) {
      e.push_back({j, 2 * k});
      e.push_back({j, 2 * k + 1});
    }
  return make_space(std::move(labels), e, "sphere:" + std::to_string(n));
}

SpacePtr product(SpacePtr a, SpacePtr b) {
  const int na = a->size(), nb = b->size();
  std::vector<std::string> labels;
  labels.reserve(size_t(na) * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      labels.push_back("(" + a->label(i) + "," + b->label(j) + ")");
  std::vector<std::pair<int, int>> e;
  // Hasse edges of the product: step one coordinate along a cover.
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      for (auto [x, y] : a->hasse())
        if (x == i) e.push_back({i * nb + j, y * nb + j});
      for (auto [x, y] : b->hasse())
        if (x == j) e.push_back({i * nb + j, i * nb + y});
    }
  return make_space(std::move(labels), e, "product(" + a->kind() + "," + b->kind() + ")");
}

SpacePtr opposite(SpacePtr a) {
  std::vector<std::pair<int, int>> e;
  for (auto [x, y] : a->hasse()) e.push_back({y, x});
  std::string kind = a->kind();
  if (kind.rfind("op(", 0) == 0 && kind.back() == ')')
    kind = kind.substr(3, kind.size() - 4);  // involution keeps kinds readable
  else
    kind = "op(" + kind + ")";
  return make_space(a->labels(), e, kind);
}

namespace {

// Disjoint-union labels: keep originals, add a distinguishing suffix on clash.
std::vector<std::string> merge_labels(const std::vector<std::string>& lo,
                                      const std::vector<std::string>& hi,
                                      bool* renamed_all_hi = nullptr) {
  std::set<std::string> used(lo.begin(), lo.end());
  std::vector<std::string> out = lo;
  bool clash = false;
  for (const auto& l : hi)
    if (used.count(l)) clash = true;
  // When the upper part is a canonical discrete x0..x_{k-1} and clashes, use
  // y0..y_{k-1}: joins of discretes then read like x_i below y_j.
  bool canonical_discrete = true;
  for (size_t i = 0; i < hi.size(); ++i)
    if (hi[i] != "x" + std::to_string(i)) canonical_discrete = false;
  if (renamed_all_hi) *renamed_all_hi = false;
  if (clash && canonical_discrete) {
    bool y_free = true;
    for (size_t i = 0; i < hi.size(); ++i)
      if (used.count("y" + std::to_string(i))) y_free = false;
    if (y_free) {
      for (size_t i = 0; i < hi.size(); ++i) out.push_back("y" + std::to_string(i));
      if (renamed_all_hi) *renamed_all_hi = true;
      return out;
    }
  }
  for (const auto& l : hi) {
    std::string cand = l;
    while (used.count(cand)) cand += "'";
    used.insert(cand);
    out.push_back(cand);
  }
  return out;
}

}  // namespace

SpacePtr nh_join(SpacePtr below, SpacePtr above) {
  const int nb = below->size();
  std::vector<std::string> labels = merge_labels(below->labels(), above->labels());
  std::vector<std::pair<int, int>> e;
  for (auto [a, b] : below->hasse()) e.push_back({a, b});
  for (auto [a, b] : above->hasse()) e.push_back({nb + a, nb + b});
  // every point of the lower part under every minimal point of the upper part
  Bits amin = above->minimal_points();
  for (int x = 0; x < nb; ++x)
    amin.for_each([&](int y) { e.push_back({x, nb + y}); });
  return make_space(std::move(labels), e, "join(" + below->kind() + "," + above->kind() + ")");
}

SpacePtr nh_suspension(SpacePtr a) {
  auto s = nh_join(a, discrete(2));
  // rebuild with the suspension kind; points and edges are already right
  std::vector<std::pair<int, int>> e = s->hasse();
  return make_space(s->labels(), e, "susp(" + a->kind() + ")");
}

SpacePtr wedge(const std::vector<SpacePtr>& pieces, const std::vector<int>& basepoints) {
  if (pieces.empty() || pieces.size() != basepoints.size())
    throw std::invalid_argument("wedge: need one basepoint per piece");
  bool all_max = true, all_min = true;
  for (size_t i = 0; i < pieces.size(); ++i) {
    int b = basepoints[i];
    if (b < 0 || b >= pieces[i]->size()) throw std::invalid_argument("wedge: basepoint out of range");
    if (!pieces[i]->maximal_points().test(b)) all_max = false;
    if (!pieces[i]->minimal_points().test(b)) all_min = false;
  }
  if (!all_max && !all_min)
    throw std::invalid_argument("wedge: basepoints must be all maximal or all minimal");

  // Identified basepoint first, then the remaining points of each piece with
  // a copy suffix.
  std::vector<std::string> labels{pieces[0]->label(basepoints[0])};
  std::vector<std::vector<int>> remap(pieces.size());
  std::string kind = "wedge(";
  for (size_t p = 0; p < pieces.size(); ++p) {
    remap[p].assign(pieces[p]->size(), -1);
    remap[p][basepoints[p]] = 0;
    for (int x = 0; x < pieces[p]->size(); ++x) {
      if (x == basepoints[p]) continue;
      remap[p][x] = int(labels.size());
      labels.push_back(pieces[p]->label(x) + "_" + std::to_string(p + 1));
    }
    kind += (p ? "," : "") + pieces[p]->kind() + "@" + pieces[p]->label(basepoints[p]);
  }
  kind += ")";
  std::vector<std::pair<int, int>> e;
  for (size_t p = 0; p < pieces.size(); ++p)
    for (auto [a, b] : pieces[p]->hasse()) e.push_back({remap[p][a], remap[p][b]});
  return make_space(std::move(labels), e, kind);
}

Subspace make_subspace(SpacePtr parent, const Bits& mask, const std::string& kind_note) {
  Subspace sub;
  sub.parent = parent;
  sub.mask = mask;
  sub.to_parent = mask.to_indices();
  std::vector<int> back(parent->size(), -1);
  for (size_t i = 0; i < sub.to_parent.size(); ++i) back[sub.to_parent[i]] = int(i);
  std::vector<std::string> labels;
  for (int p : sub.to_parent) labels.push_back(parent->label(p));
  std::vector<std::pair<int, int>> e;
  for (size_t i = 0; i < sub.to_parent.size(); ++i) {
    Bits lower = parent->down(sub.to_parent[i]);
    lower &= mask;
    lower.for_each([&](int p) {
      if (p != sub.to_parent[i]) e.push_back({back[p], int(i)});
    });
  }
  sub.space = make_space(std::move(labels), e,
                         kind_note.empty() ? "subspace(" + parent->kind() + ")" : kind_note);
  return sub;
}

Square make_square(SpacePtr factor) {
  Square sq;
  sq.factor = factor;
  sq.n = factor->size();
  sq.space = product(factor, factor);
  const int N = sq.space->size();
  sq.row.assign(sq.n, Bits(N));
  sq.col.assign(sq.n, Bits(N));
  for (int z = 0; z < sq.n; ++z)
    for (int j = 0; j < sq.n; ++j) {
      sq.row[z].set(sq.pair_index(z, j));
      sq.col[z].set(sq.pair_index(j, z));
    }
  return sq;
}

}  // namespace fintop
