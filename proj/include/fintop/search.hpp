#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fintop/homotopy.hpp"

namespace fintop {

// ---- canonical assignment enumeration ----------------------------------

// Stirling number of the second kind S(m, k): partitions of m labeled cells
// into k unlabeled nonempty blocks.  Saturates at LLONG_MAX.
long long stirling2(int m, int k);

// Restricted growth strings of length m with exactly k blocks, emitted in
// lexicographic order together with their rank: a[0] = 0 and
// a[i] <= 1 + max(a[0..i-1]).  One string per unordered partition.  The
// callback returns false to stop the enumeration.
void enumerate_rgs(int m, int k,
                   const std::function<bool(long long, const std::vector<int>&)>& fn);
std::vector<std::vector<int>> rgs_enumerate(int m, int k);

// ---- search types -------------------------------------------------------

enum class Invariant : uint8_t { cat, tc };

struct SearchOptions {
  Limits limits;
  bool parallel = true;  // use the OpenMP sweep when compiled in
  int threads = 0;       // 0 = runtime default
};

enum class RefuteReason : uint8_t { obstruction, exhaustion };

struct Refutation {
  long long index = 0;  // rank in the canonical enumeration
  std::vector<int> rgs;
  int block = 0;  // offending block id within the assignment
  RefuteReason reason = RefuteReason::obstruction;
};

// One certified block: an open set plus its goodness fence (nullhomotopy of
// the inclusion for cat, planner from pr1 to pr2 for tc).
struct Witness {
  Bits block;
  Fence fence;
};

struct Covering {
  SpacePtr space;
  std::vector<Witness> blocks;
};

struct LevelResult {
  int k = 0;
  long long assignments = 0;
  bool feasible = false;
  std::vector<Witness> witnesses;  // first feasible canonical assignment
  long long refuted_obstruction = 0;
  long long refuted_exhaustion = 0;
  long long inconclusive = 0;
  std::vector<Refutation> refutations;  // every refuted assignment
};

// Block-status cache shared across the levels of one descent.  Blocks are
// unions of downsets of maximal cells, keyed by the cell subset.
struct SearchContext {
  enum class BlockStatus : uint8_t {
    unknown,
    good,
    bad_obstruction,
    bad_exhaustion,
    inconclusive
  };
  struct BlockEntry {
    BlockStatus status = BlockStatus::unknown;
    Bits points;
    Fence fence;  // present when good
    uint64_t visited = 0;
    bool derived = false;  // bad via a known-bad subset, no search of its own
  };

  Invariant inv = Invariant::cat;
  SpacePtr factor;  // the input space X
  bool factor_contractible = false;
  std::optional<Square> square;  // tc only
  SpacePtr target;               // X, or the square
  std::vector<int> cells;        // maximal points of the target, ascending
  std::vector<Bits> cell_down;   // their downsets

  std::unordered_map<uint64_t, BlockEntry> cache;
  std::vector<Bits> bad_points;  // point sets refuted by exhaustion
};

SearchContext make_search_context(Invariant inv, SpacePtr x);

// Evaluates one level k.  Phase A classifies every distinct block cheaply
// (row/column obstruction, componentwise contraction); if that alone does
// not prove the level feasible, phase B resolves the remaining blocks by
// hom-poset search in a fixed chunk schedule, deriving bad blocks from
// known-bad subsets, so the result is independent of the thread count.
LevelResult evaluate_level(SearchContext& ctx, int k, const SearchOptions& opt);

struct SearchReport {
  Invariant invariant = Invariant::cat;
  SpacePtr space;              // the input X
  bool square_target = false;  // tc covers product(X, X)
  SpacePtr target;
  int value = 0;
  bool proven = false;
  Limits limits;
  std::vector<Witness> upper;
  struct Lower {
    int k = 0;
    int cells = 0;
    long long canonical_assignments = 0;
    long long refuted_obstruction = 0;
    long long refuted_exhaustion = 0;
    long long inconclusive = 0;
    std::vector<Refutation> refutations;
  };
  std::optional<Lower> lower;  // absent exactly when value == 1
  std::vector<std::string> notes;
};

// Computes cat(x) or tc(x) by descending from the all-singleton covering of
// the maximal cells until a level refuses: the value is the last feasible
// level, proven when the level below was exhausted with no inconclusive
// assignment.  Throws std::invalid_argument on disconnected input.
SearchReport run_search(Invariant inv, SpacePtr x, const SearchOptions& opt = {});

struct BoundsReport {
  int maximal_count = 0;
  bool contractible = false;
  int cat_upper = 0;  // cat <= number of maximal points
  int tc_upper = 0;   // tc <= (number of maximal points)^2
};
BoundsReport known_bounds(SpacePtr x);

// Covering of product(x, x) built from a covering of x: blocks are the
// pairwise products of the factor blocks; each fence moves the first
// coordinate along its factor fence, then the second.  Witnesses that the
// square is covered by (factor cover size)^2 nullhomotopic blocks.
Covering product_covering(SpacePtr x, const std::vector<Witness>& factor_cover);

// ---- antidiagonal explorer ---------------------------------------------

struct ExplorationSet {
  std::string name;
  Bits points;
  bool open = false;
  bool obstruction = false;
  Decision decision;
};

struct ExplorationReport {
  int n = 0;
  std::string antipode_rule;
  SpacePtr factor;
  SpacePtr square_space;
  bool covers = false;
  Limits limits;
  std::vector<ExplorationSet> sets;  // exactly two
};

// Builds the two candidate open sets around the index-shifted antidiagonal
// of the 2n-point circle model (n >= 5) and decides whether each admits a
// planner.  The antipode of a point is the like-type point floor(n/2)
// positions around the circle; the rule is recorded in the report.
ExplorationReport explore_antidiagonal(int n, const SearchOptions& opt = {});

}  // namespace fintop
