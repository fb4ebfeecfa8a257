#pragma once

#include <string>
#include <vector>

#include "fintop/space.hpp"

namespace fintop {

// Total order-preserving (= continuous) map between finite spaces.
struct OrderMap {
  SpacePtr dom, cod;
  std::vector<int> a;  // a[x] = image of point x, by domain index

  int operator()(int x) const { return a[x]; }
  bool operator==(const OrderMap& o) const { return a == o.a; }
};

bool is_continuous(const OrderMap& f);
OrderMap identity_map(SpacePtr s);
OrderMap constant_map(SpacePtr dom, SpacePtr cod, int value);
OrderMap compose(const OrderMap& g, const OrderMap& f);  // g after f

// Restriction of f to a subspace of its domain.
OrderMap restrict_map(const OrderMap& f, const Subspace& sub);

// Projections of a square restricted to an open block Q (given by `sub`).
OrderMap projection_first(const Square& sq, const Subspace& sub);
OrderMap projection_second(const Square& sq, const Subspace& sub);

// Direction tag between consecutive fence steps: le means f_i <= f_{i+1}
// pointwise, ge means f_i >= f_{i+1}.
enum class Dir : uint8_t { le, ge };
inline Dir flip(Dir d) { return d == Dir::le ? Dir::ge : Dir::le; }

// A fence: a nonempty sequence of continuous maps with a comparability
// direction between each consecutive pair.  This is exactly a homotopy
// through a finite zigzag interval.
struct Fence {
  SpacePtr dom, cod;
  std::vector<std::vector<int>> maps;
  std::vector<Dir> dirs;  // dirs.size() + 1 == maps.size()

  size_t length() const { return maps.size(); }
  const std::vector<int>& front() const { return maps.front(); }
  const std::vector<int>& back() const { return maps.back(); }
};

// Appends a step, dropping it when the map repeats the current last one.
void push_step(Fence& f, const std::vector<int>& next, Dir d);

// Independent verifier.  Checks shape, continuity of every step, and the
// tagged comparability between consecutive steps.  Returns all violations.
std::vector<std::string> check_fence(const Fence& f);

Fence single_map_fence(const OrderMap& f);
Fence reversed(const Fence& f);
// Concatenation; fences must share domain/codomain and g must start where
// f ends.
Fence concat(const Fence& f, const Fence& g);
// Post-compose every step with g.
Fence map_fence(const Fence& f, const OrderMap& g);

// Fence of constant maps along a comparability zigzag from `from` to `to`
// in the codomain (both codomain indices).  Uses the lexicographically
// first shortest zigzag.  Fails (empty maps) when no path exists.
Fence constant_zigzag(SpacePtr dom, SpacePtr cod, int from, int to);

// Rewrites a fence so its direction tags alternate le, ge, le, ... starting
// with `first`, inserting stationary steps where needed.  The result is
// step-compatible with the interval model J_m.
Fence normalize_alternating(const Fence& f, Dir first = Dir::le);

// A fence on Q with values in X, read as a single map Q x J_m -> X.
struct IntervalMap {
  Subspace q;         // block inside some ambient space
  SpacePtr interval;  // J_m
  SpacePtr domain;    // product(Q, J_m)
  OrderMap map;
};

// Packs a planner/nullhomotopy fence into one continuous map on Q x J_m.
// The fence is normalized first so its directions match the interval.
IntervalMap fence_to_interval_map(const Fence& f, const Subspace& q);
// Reads the fence back out of the interval map (the slices at fixed time).
Fence interval_map_to_fence(const IntervalMap& im);

}  // namespace fintop
