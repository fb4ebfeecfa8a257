#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fintop/maps.hpp"
#include "fintop/space.hpp"

namespace fintop {

// Resource caps for a single homotopy decision.  `max_visited` bounds the
// number of distinct maps the search may store; 0 disables a cap.
// `max_seconds` adds a wall-clock cap; leaving it at 0 keeps decisions
// deterministic across machines.
struct Limits {
  uint64_t max_visited = 1'000'000;
  double max_seconds = 0.0;
};

enum class Verdict : uint8_t { yes, no, inconclusive };

struct Decision {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Fence> fence;  // present exactly when verdict == yes
  uint64_t visited = 0;        // maps stored by the search (0 for fast paths)
  std::string note;
};

// ---- beat points and cores ---------------------------------------------

// x is a beat point of the subspace `mask` when x^ - {x} has a unique
// minimal element or x_ - {x} has a unique maximal element (within mask).
Bits beat_points(const FiniteSpace& s, const Bits& mask);
Bits beat_points(const FiniteSpace& s);

struct CoreTrace {
  struct Step {
    int removed;  // parent index of the removed beat point
    int target;   // parent index of its comparison point
    Dir dir;      // le: target above removed, ge: target below
  };
  std::vector<Step> steps;
  Bits core;  // mask of the surviving points, in parent indexing
};

// Iterated removal of beat points, always the lowest-index one first, so
// the result is reproducible.
CoreTrace core_trace(const FiniteSpace& s, const Bits& mask);
SpacePtr core(SpacePtr s);
bool is_contractible(const FiniteSpace& s, const Bits& mask);
bool is_contractible(SpacePtr s);

// Deformation of the subspace onto its core as a fence of self-maps of the
// subspace (identity first, retraction onto the core point set last).
// Expressed in subspace indices.
Fence contraction_fence(const Subspace& sub);

// ---- homotopy decisions ------------------------------------------------

// Breadth-first search of the connected component of `f` in the poset of
// continuous maps dom -> cod, where two maps are adjacent when they are
// pointwise comparable.  Reaching `g` yields the fence along the BFS path,
// exhausting the component proves the maps are not homotopic.
Decision homotopic(const OrderMap& f, const OrderMap& g, const Limits& lim = {});

// Is the inclusion of the open block `sub` into its parent homotopic to a
// constant.  Fast path: when every comparability component of the block is
// contractible, the fence is built directly (contract each component, then
// walk all values to one point); otherwise BFS toward any constant map.
Decision nullhomotopic_inclusion(const Subspace& sub, const Limits& lim = {});

// Is there a motion planner on the open set Q of the square, i.e. a fence
// from pr1|Q to pr2|Q.  Same fast path as above, then BFS.
Decision admits_planner(const Square& sq, const Bits& q_mask, const Limits& lim = {});

// Necessary condition for a planner (factor must not be contractible):
// Q may contain no full row {z} x X and no full column X x {z}.
bool row_column_obstruction(const Square& sq, const Bits& q_mask, bool factor_contractible);

// A verified planner certificate: an open block of the square together
// with a fence from pr1|Q to pr2|Q with values in the factor.
struct PlannerCert {
  Bits block;   // open subset of the square
  Fence fence;  // domain subspace(block), codomain the factor
};

// Re-checks a planner certificate from scratch (open block, fence valid,
// endpoints are the projections).  Returns all violations.
std::vector<std::string> check_planner_cert(const Square& sq, const PlannerCert& c);

}  // namespace fintop
