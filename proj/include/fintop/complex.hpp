#pragma once

#include <vector>

#include "fintop/space.hpp"

namespace fintop {

// A finite abstract simplicial complex.  Simplices are strictly ascending
// vertex index lists; the list contains every face (downward closed).
struct SimplicialComplex {
  SpacePtr base;  // source space when built as an order complex, may be null
  std::vector<std::vector<int>> simplices;

  int dim() const;
  int count_of_dim(int d) const;
};

// Order complex: vertices are the points, simplices the nonempty chains.
SimplicialComplex order_complex(SpacePtr s);

// Alternating sum over all simplices.  Exact in every dimension.
long long euler_characteristic(const SimplicialComplex& k);

struct BettiNumbers {
  long long b0 = 0;
  long long b1 = 0;
};

// b0 from components of the 1-skeleton, b1 = dim ker d1 - rank d2 with the
// boundary ranks computed exactly over the rationals.  Valid for complexes
// of any dimension; higher Betti numbers are out of scope.
BettiNumbers betti_numbers(const SimplicialComplex& k);

// The weak equivalence direction of the comparison with the order complex:
// each simplex (a chain) is sent to its minimum point.
struct McCordEntry {
  std::vector<int> simplex;
  int min_point;
};
std::vector<McCordEntry> mccord_vertex_map(const SimplicialComplex& k);

}  // namespace fintop
