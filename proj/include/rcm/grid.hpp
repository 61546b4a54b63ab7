#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rcm/vec.hpp"

namespace rcm {

using ZPoint = std::array<std::int64_t, kMaxDim>;

// Partition of R^d into half-open cubes Q_i = [-t,t)^d + 2t*z_i, with the
// shell enumeration of Z^d: sort by the sup norm, ties broken
// lexicographically. z_0 is the origin, so cube 0 is centered at 0.
// index_of / z_of are stateless unrank/rank computations, safe for
// unrestricted concurrent use.
struct CubeGrid {
  int d = 2;
  double t = 1.0;

  CubeGrid() = default;
  CubeGrid(int dim, double half_edge);

  double side() const { return 2.0 * t; }
  double cell_volume() const;

  // Lattice coordinates of the cube containing x (lower face inclusive).
  ZPoint z_of_point(const Vec& x) const;

  // Shell-enumeration rank of a lattice point.
  std::int64_t index_of(const ZPoint& z) const;

  // Inverse of index_of.
  ZPoint z_of(std::int64_t index) const;

  // The unique i with x in Q_i.
  std::int64_t cube_index(const Vec& x) const { return index_of(z_of_point(x)); }

  Vec cube_low(std::int64_t index) const;
  Vec cube_center(std::int64_t index) const;

  // Distances use the closed cube; the half-open boundary is a null set and
  // all tests below are declared inclusive.
  double dist_point_to_cube(const Vec& x, std::int64_t index) const;
  double cube_min_norm(std::int64_t index) const;
  double cube_max_norm(std::int64_t index) const;
  double dist_cube_to_sphere(std::int64_t index, double s) const;

  // Cubes within sup-distance one shell of the given cube (includes itself),
  // as indices, ascending.
  std::vector<std::int64_t> neighbor_cubes(std::int64_t index) const;

  friend bool operator==(const CubeGrid&, const CubeGrid&) = default;
};

// A finite union of whole cubes, kept as a sorted index list.
struct Window {
  CubeGrid grid;
  std::vector<std::int64_t> cubes;  // sorted ascending, unique

  bool contains(std::int64_t index) const {
    return std::binary_search(cubes.begin(), cubes.end(), index);
  }
  bool contains_window(const Window& sub) const;
  bool empty() const { return cubes.empty(); }
};

// W^(r): all cubes of the edge-length-2D grid meeting the closed ball
// B(0, r+D). Requires grid.t == D.
Window window_for_radius(double r, const CubeGrid& grid, double D);

}  // namespace rcm
