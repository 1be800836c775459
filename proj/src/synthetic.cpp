#include "walpert/synthetic.hpp"

#include <algorithm>

namespace walpert {

namespace {

// dyadic rational in [lo, hi] with resolution 1/64
Rat rat_in(std::mt19937_64& rng, double lo, double hi) {
  auto lo64 = long(std::ceil(lo * 64.0));
  auto hi64 = long(std::floor(hi * 64.0));
  std::uniform_int_distribution<long> dist(lo64, hi64);
  return Rat(dist(rng), 64);
}

}  // namespace

double random_rat(std::mt19937_64& rng, double lo, double hi) {
  return to_double(rat_in(rng, lo, hi));
}

Measure random_measure(std::mt19937_64& rng, const Interval& span,
                       const MeasureOptions& opt) {
  std::vector<Measure::Atom> atoms;
  std::vector<Measure::Piece> pieces;
  std::uniform_int_distribution<int> natoms(opt.min_atoms, opt.max_atoms);
  std::uniform_int_distribution<int> npieces(opt.min_pieces, opt.max_pieces);
  std::uniform_int_distribution<int> slot(0, 15);

  int na = natoms(rng);
  std::vector<int> used;
  Rat len = span.length();
  for (int i = 0; i < na; ++i) {
    int s = slot(rng);
    if (std::find(used.begin(), used.end(), s) != used.end()) continue;
    used.push_back(s);
    Rat x = span.a + len * Rat(s, 16);
    atoms.push_back({x, rat_in(rng, 0.25, 4.0)});
  }

  int np = npieces(rng);
  if (opt.ensure_charged) {
    // positive linear density over the full span
    Rat c0 = rat_in(rng, 0.5, 2.0);
    Rat c1 = rat_in(rng, -0.25, 0.25);
    pieces.push_back({span, {c0 - c1 * span.a, c1}});
    np = std::max(0, np - 1);
  }
  // piece boundaries on the quarter grid: dyadic cells at depth >= 2 are
  // then covered fully or not at all, so the deep Hankel matrices never see
  // sliver fragments (which would push k=4 conditioning past what the
  // verification tolerances can absorb)
  std::uniform_int_distribution<int> cell(0, 3);
  for (int i = 0; i < np; ++i) {
    int lo = cell(rng);
    std::uniform_int_distribution<int> width(1, 4 - lo);
    int w = width(rng);
    Interval piece_span(span.a + len * Rat(lo, 4),
                        span.a + len * Rat(lo + w, 4));
    // nonnegative quadratic: a0 >= |a1| + |a2| on a unit-scaled variable
    Rat a1 = rat_in(rng, -0.5, 0.5);
    Rat a2 = rat_in(rng, -0.25, 0.25);
    Rat a0 = rat_in(rng, 1.0, 3.0) + abs(a1) + abs(a2);
    // expressed in the raw coordinate via u = (x - a)/len
    Poly<Rat> unit{a0, a1, a2};
    Poly<Rat> dens = poly_affine_arg(unit, Rat(-span.a / len), Rat(1 / len));
    pieces.push_back({piece_span, dens});
  }
  return Measure(std::move(atoms), std::move(pieces), opt.mode);
}

Measure random_charged_measure(std::mt19937_64& rng, const Interval& span) {
  MeasureOptions opt;
  opt.ensure_charged = true;
  opt.max_atoms = 3;
  opt.max_pieces = 2;
  return random_measure(rng, span, opt);
}

Measure random_atomic_measure(std::mt19937_64& rng, const Interval& span,
                              int count) {
  std::vector<Measure::Atom> atoms;
  std::vector<int> slots(16);
  for (int i = 0; i < 16; ++i) slots[std::size_t(i)] = i;
  std::shuffle(slots.begin(), slots.end(), rng);
  Rat len = span.length();
  for (int i = 0; i < count && i < 16; ++i) {
    Rat x = span.a + len * Rat(slots[std::size_t(i)], 16);
    atoms.push_back({x, rat_in(rng, 0.25, 4.0)});
  }
  return Measure(std::move(atoms), {});
}

PiecewiseFunction random_piecewise(std::mt19937_64& rng, const Interval& root,
                                   int depth, int degree) {
  PiecewiseFunction f(root, depth);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (std::uint64_t j = 0; j < f.cell_count(); ++j) {
    Poly<double> p(std::size_t(degree) + 1);
    for (auto& c : p) c = coef(rng);
    f.cell(j) = p;
  }
  return f;
}

}  // namespace walpert
