#pragma once

#include <random>

#include "walpert/mra.hpp"

namespace walpert {

// Seeded generators for the randomized verification suites.  Everything is
// built from dyadic-rational data so the exact-arithmetic paths stay cheap:
// atoms sit on the 1/16 lattice (well separated, so moment-matrix rank
// classifications have honest spectral gaps), masses and density
// coefficients are small rationals.
struct MeasureOptions {
  int max_atoms = 5;
  int max_pieces = 3;
  int min_atoms = 0;
  int min_pieces = 0;
  bool ensure_charged = false;  // force a full-support piece
  Arithmetic mode = Arithmetic::Exact;
};

Measure random_measure(std::mt19937_64& rng, const Interval& span,
                       const MeasureOptions& opt = {});

// Both children of every interval down to `depth` are charged (a positive
// density on the whole span plus optional extras).
Measure random_charged_measure(std::mt19937_64& rng, const Interval& span);

// Purely atomic measure with `count` distinct lattice atoms.
Measure random_atomic_measure(std::mt19937_64& rng, const Interval& span,
                              int count);

// Piecewise polynomial of the given degree on the dyadic cells at `depth`,
// with polynomial-consistent atom values (a representable element of the
// depth-`depth` multiresolution space when degree <= k-1).
PiecewiseFunction random_piecewise(std::mt19937_64& rng, const Interval& root,
                                   int depth, int degree);

double random_rat(std::mt19937_64& rng, double lo, double hi);

}  // namespace walpert
