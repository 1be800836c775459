#include <doctest.h>

#include "walpert/grid.hpp"

using namespace walpert;

namespace {
const Interval kUnit(Rat(0), Rat(1));
}

TEST_CASE("interval_at: endpoints exact") {
  CHECK(interval_at(kUnit, 1, 1).realize() == Interval(Rat(1, 2), Rat(1)));
  CHECK(interval_at(kUnit, 0, 0).realize() == kUnit);
  // affine image of a wider root
  Interval wide(Rat(-1), Rat(1));
  CHECK(interval_at(wide, 2, 3).realize() == Interval(Rat(1, 2), Rat(1)));
  CHECK_THROWS(interval_at(kUnit, 2, 4));
}

TEST_CASE("children partition the parent") {
  DyadicInterval q = interval_at(kUnit, 2, 1);  // [1/4, 1/2)
  auto kids = children(q);
  CHECK(kids[0].realize() == Interval(Rat(1, 4), Rat(3, 8)));
  CHECK(kids[1].realize() == Interval(Rat(3, 8), Rat(1, 2)));
  CHECK(kids[0].parent() == q);
  CHECK(kids[1].parent() == q);
}

TEST_CASE("descendants in lex order") {
  auto all = descendants(kUnit, 0);
  CHECK(all.size() == 1);
  CHECK(descendants(kUnit, 1).size() == 3);
  CHECK(descendants(kUnit, 3).size() == 15);
}

TEST_CASE("deep grids stay endpoint-exact") {
  // depth 38: adjacent intervals share an endpoint exactly
  auto a = interval_at(kUnit, 38, (std::uint64_t(1) << 37) - 1).realize();
  auto b = interval_at(kUnit, 38, std::uint64_t(1) << 37).realize();
  CHECK(a.b == b.a);
  // partition property at depth m: lengths sum to the root exactly
  Rat total(0);
  for (std::uint64_t j = 0; j < 8; ++j)
    total += interval_at(kUnit, 3, j).realize().length();
  CHECK(total == Rat(1));
}

TEST_CASE("containment") {
  DyadicInterval root = interval_at(kUnit, 0, 0);
  DyadicInterval deep = interval_at(kUnit, 5, 19);
  CHECK(root.contains(deep));
  CHECK(deep.parent().contains(deep));
  CHECK_FALSE(interval_at(kUnit, 5, 18).contains(deep));
}

TEST_CASE("cubes") {
  std::array<Interval, 3> roots{kUnit, kUnit, kUnit};
  DyadicCube q = cube_at(roots, 2, 0, {0, 0, 0});
  auto kids = q.children();
  CHECK(kids.size() == 4);
  // quadrants are disjoint and cover the square: check corners
  CHECK(kids[0].realize()[0] == Interval(Rat(0), Rat(1, 2)));
  CHECK(kids[3].realize()[1] == Interval(Rat(1, 2), Rat(1)));
}
