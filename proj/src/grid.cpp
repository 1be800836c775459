#include "walpert/grid.hpp"

#include <stdexcept>

namespace walpert {

Interval DyadicInterval::realize() const {
  Rat len = root.length();
  Rat scale = rat_pow2(-depth);
  Rat lo = root.a + len * scale * Rat(static_cast<unsigned long>(index));
  Rat hi = root.a + len * scale * Rat(static_cast<unsigned long>(index) + 1);
  return Interval(lo, hi);
}

DyadicInterval DyadicInterval::child(int side) const {
  if (depth + 1 > kMaxGridDepth) throw std::out_of_range("grid depth limit");
  return DyadicInterval{root, depth + 1, 2 * index + std::uint64_t(side)};
}

DyadicInterval DyadicInterval::parent() const {
  if (depth == 0) throw std::out_of_range("root has no parent");
  return DyadicInterval{root, depth - 1, index / 2};
}

bool DyadicInterval::contains(const DyadicInterval& q) const {
  if (q.depth < depth) return false;
  return (q.index >> (q.depth - depth)) == index;
}

DyadicInterval interval_at(const Interval& root, int m, std::uint64_t j) {
  if (m < 0 || m > kMaxGridDepth) throw std::out_of_range("depth out of range");
  if (j >> m) throw std::out_of_range("index out of range for depth");
  return DyadicInterval{root, m, j};
}

std::array<DyadicInterval, 2> children(const DyadicInterval& q) {
  return {q.child(0), q.child(1)};
}

std::vector<DyadicInterval> descendants(const Interval& root, int depth) {
  if (depth > kMaxGridDepth) throw std::out_of_range("depth out of range");
  std::vector<DyadicInterval> out;
  for (int m = 0; m <= depth; ++m)
    for (std::uint64_t j = 0; j < (std::uint64_t(1) << m); ++j)
      out.push_back(DyadicInterval{root, m, j});
  return out;
}

std::vector<DyadicCube> DyadicCube::children() const {
  std::vector<DyadicCube> out;
  int combos = 1 << n;
  for (int c = 0; c < combos; ++c) {
    DyadicCube q = *this;
    for (int ax = 0; ax < n; ++ax) q.axis[ax] = axis[ax].child((c >> ax) & 1);
    out.push_back(q);
  }
  return out;
}

std::array<Interval, 3> DyadicCube::realize() const {
  std::array<Interval, 3> out;
  for (int ax = 0; ax < n; ++ax) out[ax] = axis[ax].realize();
  return out;
}

DyadicCube cube_at(const std::array<Interval, 3>& roots, int n, int m,
                   const std::array<std::uint64_t, 3>& j) {
  if (n < 1 || n > 3) throw std::out_of_range("cube dimension must be 1..3");
  DyadicCube q;
  q.n = n;
  for (int ax = 0; ax < n; ++ax) q.axis[ax] = interval_at(roots[ax], m, j[ax]);
  return q;
}

}  // namespace walpert
