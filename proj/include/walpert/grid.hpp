#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "walpert/interval.hpp"

namespace walpert {

// Node (m, j) of the dyadic grid over a root interval: the root-affine image
// of [j/2^m, (j+1)/2^m).  Endpoints stay exact dyadic rationals relative to
// the root, so depth-40 grids do not drift.
struct DyadicInterval {
  Interval root;
  int depth = 0;
  std::uint64_t index = 0;

  Interval realize() const;
  DyadicInterval child(int side) const;  // 0 = left, 1 = right
  DyadicInterval parent() const;
  bool is_root() const { return depth == 0; }
  // true iff *this contains q as a grid descendant (or equals it)
  bool contains(const DyadicInterval& q) const;
  bool operator==(const DyadicInterval& o) const {
    return depth == o.depth && index == o.index && root == o.root;
  }
  bool operator<(const DyadicInterval& o) const {
    return depth != o.depth ? depth < o.depth : index < o.index;
  }
};

inline constexpr int kMaxGridDepth = 40;

DyadicInterval interval_at(const Interval& root, int m, std::uint64_t j);
std::array<DyadicInterval, 2> children(const DyadicInterval& q);
// All intervals of depth <= depth in (m, j) lexicographic order.
std::vector<DyadicInterval> descendants(const Interval& root, int depth);

// Axis-parallel dyadic cube, n <= 3; all axes share the same depth.
struct DyadicCube {
  int n = 1;
  std::array<DyadicInterval, 3> axis;

  int depth() const { return axis[0].depth; }
  std::vector<DyadicCube> children() const;  // 2^n coordinate-wise combos
  std::array<Interval, 3> realize() const;
};

DyadicCube cube_at(const std::array<Interval, 3>& roots, int n, int m,
                   const std::array<std::uint64_t, 3>& j);

}  // namespace walpert
