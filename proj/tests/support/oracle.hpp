#pragma once

#include <vector>

#include "fintop/search.hpp"

namespace testsupport {

// Stirling numbers of the second kind by the textbook recurrence, kept
// independent of the library implementation.
long long stirling_dp(int m, int k);

// Every connected T0 space with exactly n points, one representative per
// isomorphism class.  Enumerates transitively closed relations over a
// topological labeling and dedupes by the minimum relation matrix over all
// relabelings.
std::vector<fintop::SpacePtr> connected_spaces_up_to_iso(int n);

// All nonempty open sets (down-closed subsets) of a space.
std::vector<fintop::Bits> all_open_sets(const fintop::FiniteSpace& s);

// The invariant by brute force: the exact minimum size of a covering of
// the target (the space itself, or its square) by good open sets, ranging
// over ALL open sets rather than unions of maximal-cell downsets.  Open
// sets whose goodness search hits its cap are bracketed (counted once as
// bad, once as good); throws std::runtime_error if the two resulting cover
// values disagree, so a cap can never silently skew the value.
int brute_force_value(fintop::Invariant inv, fintop::SpacePtr x);

}  // namespace testsupport
