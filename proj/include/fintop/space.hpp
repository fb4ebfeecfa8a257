#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fintop/bits.hpp"

namespace fintop {

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

// Diagnostics from checking a relation or a built space.  Collects every
// violation instead of stopping at the first one.
struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string joined() const;
};

// A finite T0 space, stored as its specialization order.  Open sets are
// exactly the down-closed subsets.  Immutable after construction; all
// queries are const and safe to call concurrently.
//
// Storage is dual: the full closed relation as bit rows (down_/up_) for
// O(1) order queries, and the Hasse cover edges for serialization.
class FiniteSpace {
 public:
  int size() const { return n_; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(const std::string& label) const;

  // x <= y in the specialization order (reflexive).
  bool leq(int x, int y) const { return down_[y].test(x); }

  // Minimal open neighborhood of x: {y : y <= x}, includes x.
  const Bits& down(int x) const { return down_[x]; }
  // Closure of {x}: {y : y >= x}, includes x.
  const Bits& up(int x) const { return up_[x]; }

  const std::vector<std::pair<int, int>>& hasse() const { return hasse_; }
  const std::string& kind() const { return kind_; }

  int height(int x) const { return height_[x]; }
  int max_height() const;
  // Point indices sorted by (height, index): a linear extension.
  const std::vector<int>& topo_order() const { return topo_; }

  Bits maximal_points() const;
  Bits minimal_points() const;

  Bits downset_of(const Bits& s) const;
  Bits upset_of(const Bits& s) const;
  bool is_open(const Bits& s) const { return downset_of(s) == s; }

  // Connectivity in the comparability graph, restricted to `s`.
  bool is_connected(const Bits& s) const;
  bool is_connected() const { return is_connected(Bits::full(n_)); }
  // Comparability components of `s`, each a mask, in order of least member.
  std::vector<Bits> components(const Bits& s) const;

  friend SpacePtr make_space(std::vector<std::string> labels,
                             const std::vector<std::pair<int, int>>& leq_pairs,
                             std::string kind);

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<Bits> down_, up_;
  std::vector<std::pair<int, int>> hasse_;
  std::vector<int> height_;
  std::vector<int> topo_;
  std::string kind_;
};

// Checks an edge list over the given labels: duplicate labels, dangling
// indices, antisymmetry (cycles).  Reflexive and transitive edges are
// tolerated; the builder closes the relation itself.
ValidationReport validate_relation(const std::vector<std::string>& labels,
                                   const std::vector<std::pair<int, int>>& leq_pairs);

// Re-checks a built space: label uniqueness, matrix axioms, and agreement
// between the closed relation and the closure of the stored Hasse edges.
ValidationReport validate_space(const FiniteSpace& s);

// Builds a space from labels and (below, above) index pairs.  The pairs may
// contain reflexive or transitive edges; they are closed and re-minimized.
// Throws std::invalid_argument with the validation report on bad input.
SpacePtr make_space(std::vector<std::string> labels,
                    const std::vector<std::pair<int, int>>& leq_pairs,
                    std::string kind);

// ---- constructors ------------------------------------------------------

SpacePtr discrete(int n);                       // antichain x0..x_{n-1}, n >= 1
SpacePtr interval_model(int m);                 // zigzag x0 <= x1 >= x2 <= ..., m+1 points
SpacePtr circle_model(int n);                   // 2n points, y_i covers x_i and x_{i-1 mod n}, n >= 2
SpacePtr sphere_model(int n);                   // 2n+2 points, iterated two-point suspension
SpacePtr product(SpacePtr a, SpacePtr b);       // lexicographic point order, left factor major
SpacePtr opposite(SpacePtr a);
SpacePtr nh_join(SpacePtr below, SpacePtr above);  // every lower point under every upper point
SpacePtr nh_suspension(SpacePtr a);
// Identifies the given basepoints; they must be all maximal or all minimal.
SpacePtr wedge(const std::vector<SpacePtr>& pieces, const std::vector<int>& basepoints);

// ---- subspaces ---------------------------------------------------------

struct Subspace {
  SpacePtr space;               // induced order on the selected points
  SpacePtr parent;
  std::vector<int> to_parent;   // subspace index -> parent index, ascending
  Bits mask;                    // in parent indexing
};

Subspace make_subspace(SpacePtr parent, const Bits& mask, const std::string& kind_note = "");

// ---- product square context -------------------------------------------

// X x X with the index arithmetic needed for planner work: point p of the
// square decomposes as (p / n, p % n) in factor indices.
struct Square {
  SpacePtr space;
  SpacePtr factor;
  int n = 0;
  int pair_index(int i, int j) const { return i * n + j; }
  int first(int p) const { return p / n; }
  int second(int p) const { return p % n; }
  std::vector<Bits> row;  // row[z] = {z} x X as a mask of the square
  std::vector<Bits> col;  // col[z] = X x {z}
};

Square make_square(SpacePtr factor);

}  // namespace fintop
