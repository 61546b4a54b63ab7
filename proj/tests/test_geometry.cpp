#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcm/grid.hpp"
#include "rcm/rng.hpp"

using namespace rcm;

namespace {

// Independent enumeration oracle: materialize Z^d sorted by (sup norm, lex).
std::vector<ZPoint> enumerate_shells(int d, std::int64_t kmax) {
  std::vector<ZPoint> all;
  ZPoint z{};
  for (int p = 0; p < d; ++p) z[static_cast<size_t>(p)] = -kmax;
  while (true) {
    all.push_back(z);
    int p = d - 1;
    while (p >= 0 && z[static_cast<size_t>(p)] == kmax) {
      z[static_cast<size_t>(p)] = -kmax;
      --p;
    }
    if (p < 0) break;
    ++z[static_cast<size_t>(p)];
  }
  std::stable_sort(all.begin(), all.end(), [d](const ZPoint& a, const ZPoint& b) {
    std::int64_t na = 0, nb = 0;
    for (int p = 0; p < d; ++p) {
      na = std::max(na, std::abs(a[static_cast<size_t>(p)]));
      nb = std::max(nb, std::abs(b[static_cast<size_t>(p)]));
    }
    if (na != nb) return na < nb;
    for (int p = 0; p < d; ++p)
      if (a[static_cast<size_t>(p)] != b[static_cast<size_t>(p)])
        return a[static_cast<size_t>(p)] < b[static_cast<size_t>(p)];
    return false;
  });
  return all;
}

}  // namespace

TEST_CASE("cube_index: origin cube is 0 for any t") {
  for (const double t : {0.1, 0.8, 3.0}) {
    const CubeGrid g2(2, t);
    CHECK(g2.cube_index(Vec::zero(2)) == 0);
    const CubeGrid g3(3, t);
    CHECK(g3.cube_index(Vec::zero(3)) == 0);
  }
}

TEST_CASE("cube_index: half-open convention at the boundary") {
  const CubeGrid g(2, 0.8);
  CHECK(g.cube_index(Vec{0.79, 0.0}) == 0);
  // (0.8, 0) belongs to the cube of z = (1,0)
  const std::int64_t idx = g.cube_index(Vec{0.8, 0.0});
  const ZPoint expect{1, 0};
  CHECK(idx == g.index_of(expect));
  // shell enumeration oracle: position of (1,0) among sup-norm-1, lex order
  const auto all = enumerate_shells(2, 2);
  std::int64_t rank = 0;
  for (const auto& z : all) {
    if (z[0] == 1 && z[1] == 0) break;
    ++rank;
  }
  CHECK(idx == rank);
  CHECK(idx == 7);  // shell 0 has 1 element, (1,0) is 7th in lex order of shell 1
}

TEST_CASE("enumeration matches the shell oracle and round-trips") {
  for (const int d : {1, 2, 3}) {
    const CubeGrid g(d, 1.0);
    const auto all = enumerate_shells(d, d == 3 ? 6 : 12);
    const std::int64_t limit = std::min<std::int64_t>(static_cast<std::int64_t>(all.size()),
                                                      d == 1 ? 25 : 10000);
    for (std::int64_t i = 0; i < limit; ++i) {
      CHECK(g.index_of(all[static_cast<size_t>(i)]) == i);
      CHECK(g.z_of(i) == all[static_cast<size_t>(i)]);
      CHECK(g.index_of(g.z_of(i)) == i);
    }
  }
}

TEST_CASE("partition: every random point lies in its returned cube") {
  const CubeGrid g(2, 0.8);
  CounterStream stream(derive_stream_key(11, kTagPoints, 0, 0));
  for (int it = 0; it < 100000; ++it) {
    Vec x{(2.0 * stream.next_unit() - 1.0) * 30.0, (2.0 * stream.next_unit() - 1.0) * 30.0};
    const std::int64_t idx = g.cube_index(x);
    const Vec lo = g.cube_low(idx);
    for (int p = 0; p < 2; ++p) {
      CHECK(x[p] >= lo[p]);
      CHECK(x[p] < lo[p] + g.side());
    }
  }
}

TEST_CASE("diam: spec values and invariances") {
  CHECK(diam(std::vector<Vec>{Vec{0.0, 0.0}}) == 0.0);
  CHECK(diam(std::vector<Vec>{Vec{0.0, 0.0}, Vec{3.0, 4.0}}) == doctest::Approx(5.0));
  CHECK(diam(std::vector<Vec>{Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}}) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(diam(std::vector<Vec>{}), std::invalid_argument);

  CounterStream stream(derive_stream_key(13, kTagPoints, 0, 0));
  for (int it = 0; it < 200; ++it) {
    std::vector<Vec> pts;
    for (int i = 0; i < 5; ++i)
      pts.push_back(Vec{stream.next_unit() * 4.0, stream.next_unit() * 4.0});
    const double base = diam(pts);
    std::vector<Vec> shuffled = {pts[3], pts[1], pts[4], pts[0], pts[2]};
    CHECK(diam(shuffled) == base);
    const Vec shift{stream.next_unit() * 10.0 - 5.0, stream.next_unit() * 10.0 - 5.0};
    std::vector<Vec> moved;
    for (const auto& p : pts) moved.push_back(p + shift);
    CHECK(diam(moved) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("window_for_radius: r <= D in d=1 gives the three cubes meeting [-2D,2D]") {
  const double D = 0.7;
  const CubeGrid g(1, D);
  for (const double r : {0.2 * D, 0.9 * D, D}) {
    const Window w = window_for_radius(r, g, D);
    CHECK(w.cubes.size() == 3);
    for (const std::int64_t idx : {g.index_of(ZPoint{-1}), g.index_of(ZPoint{0}),
                                   g.index_of(ZPoint{1})})
      CHECK(w.contains(idx));
  }
}

TEST_CASE("window_for_radius: figure parameters match a brute-force scan") {
  const double D = 0.8, r = 10.0;
  const CubeGrid g(2, D);
  const Window w = window_for_radius(r, g, D);
  // brute force over a generous lattice box
  std::int64_t count = 0;
  const std::int64_t kmax = 12;
  for (std::int64_t a = -kmax; a <= kmax; ++a)
    for (std::int64_t b = -kmax; b <= kmax; ++b) {
      const std::int64_t idx = g.index_of(ZPoint{a, b});
      if (g.cube_min_norm(idx) <= r + D) {
        ++count;
        CHECK(w.contains(idx));
      }
    }
  CHECK(static_cast<std::int64_t>(w.cubes.size()) == count);
  CHECK(w.contains(0));
  CHECK_THROWS_AS(window_for_radius(r, CubeGrid(2, 0.5), D), std::invalid_argument);
}

TEST_CASE("cube-sphere distance agrees with sampled point distances") {
  const CubeGrid g(2, 0.8);
  CounterStream stream(derive_stream_key(17, kTagPoints, 0, 0));
  for (std::int64_t idx : {std::int64_t(0), g.index_of(ZPoint{2, -1}), g.index_of(ZPoint{-4, 3})}) {
    for (const double s : {0.5, 2.0, 5.0}) {
      const double reported = g.dist_cube_to_sphere(idx, s);
      const Vec lo = g.cube_low(idx);
      double best = 1e300;
      for (int it = 0; it < 20000; ++it) {
        Vec x{lo[0] + g.side() * stream.next_unit(), lo[1] + g.side() * stream.next_unit()};
        best = std::min(best, std::abs(norm(x) - s));
      }
      CHECK(reported <= best + 1e-9);
      CHECK(best <= reported + 0.05);  // dense sampling approaches the infimum
    }
  }
}
