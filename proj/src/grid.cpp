#include "rcm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace rcm {

namespace {

// (2k+1)^d etc. with a saturation guard; window indices stay far below this.
std::int64_t ipow_checked(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t(1) << 62) / std::max<std::int64_t>(base, 1))
      throw std::overflow_error("CubeGrid: enumeration index overflow");
    r *= base;
  }
  return r;
}

std::int64_t box_count(std::int64_t k, int d) {
  if (k < 0) return 0;
  return ipow_checked(2 * k + 1, d);
}

// Number of w in [-k,k]^d lexicographically smaller than z (z arbitrary).
std::int64_t lex_rank_in_box(const ZPoint& z, std::int64_t k, int d) {
  if (k < 0) return 0;
  const std::int64_t side = 2 * k + 1;
  std::int64_t acc = 0;
  for (int p = 0; p < d; ++p) {
    const std::int64_t below = std::clamp<std::int64_t>(z[static_cast<size_t>(p)] + k, 0, side);
    acc += below * ipow_checked(side, d - 1 - p);
    if (z[static_cast<size_t>(p)] < -k || z[static_cast<size_t>(p)] > k) return acc;
  }
  return acc;
}

std::int64_t sup_norm(const ZPoint& z, int d) {
  std::int64_t m = 0;
  for (int p = 0; p < d; ++p) m = std::max(m, std::abs(z[static_cast<size_t>(p)]));
  return m;
}

}  // namespace

CubeGrid::CubeGrid(int dim, double half_edge) : d(dim), t(half_edge) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("CubeGrid: dimension out of range");
  if (!(half_edge > 0.0)) throw std::invalid_argument("CubeGrid: half edge length must be > 0");
}

double CubeGrid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < d; ++i) v *= side();
  return v;
}

ZPoint CubeGrid::z_of_point(const Vec& x) const {
  if (x.dim() != d) throw std::invalid_argument("CubeGrid: dimension mismatch");
  ZPoint z{};
  for (int p = 0; p < d; ++p) {
    const double v = std::floor((x[p] + t) / side());
    if (!std::isfinite(v)) throw std::invalid_argument("CubeGrid: non-finite point");
    z[static_cast<size_t>(p)] = static_cast<std::int64_t>(v);
  }
  return z;
}

std::int64_t CubeGrid::index_of(const ZPoint& z) const {
  const std::int64_t k = sup_norm(z, d);
  if (k == 0) return 0;
  const std::int64_t shell_rank = lex_rank_in_box(z, k, d) - lex_rank_in_box(z, k - 1, d);
  return box_count(k - 1, d) + shell_rank;
}

ZPoint CubeGrid::z_of(std::int64_t index) const {
  if (index < 0) throw std::invalid_argument("CubeGrid: negative index");
  ZPoint z{};
  if (index == 0) return z;
  std::int64_t k = 1;
  while (box_count(k, d) <= index) ++k;
  std::int64_t rem = index - box_count(k - 1, d);
  bool boundary_hit = false;
  for (int p = 0; p < d; ++p) {
    const int suffix = d - 1 - p;
    bool placed = false;
    for (std::int64_t c = -k; c <= k; ++c) {
      const bool hit = boundary_hit || std::abs(c) == k;
      // completions keeping w inside the box, with sup norm == k overall
      const std::int64_t cnt = hit ? box_count(k, suffix) : box_count(k, suffix) - box_count(k - 1, suffix);
      if (rem < cnt) {
        z[static_cast<size_t>(p)] = c;
        boundary_hit = hit;
        placed = true;
        break;
      }
      rem -= cnt;
    }
    if (!placed) throw std::logic_error("CubeGrid::z_of: unrank failed");
  }
  return z;
}

Vec CubeGrid::cube_low(std::int64_t index) const {
  const ZPoint z = z_of(index);
  Vec lo(d);
  for (int p = 0; p < d; ++p) lo[p] = -t + side() * static_cast<double>(z[static_cast<size_t>(p)]);
  return lo;
}

Vec CubeGrid::cube_center(std::int64_t index) const {
  const ZPoint z = z_of(index);
  Vec c(d);
  for (int p = 0; p < d; ++p) c[p] = side() * static_cast<double>(z[static_cast<size_t>(p)]);
  return c;
}

double CubeGrid::dist_point_to_cube(const Vec& x, std::int64_t index) const {
  const Vec lo = cube_low(index);
  double s = 0.0;
  for (int p = 0; p < d; ++p) {
    const double hi = lo[p] + side();
    double dx = 0.0;
    if (x[p] < lo[p]) dx = lo[p] - x[p];
    else if (x[p] > hi) dx = x[p] - hi;
    s += dx * dx;
  }
  return std::sqrt(s);
}

double CubeGrid::cube_min_norm(std::int64_t index) const {
  return dist_point_to_cube(Vec::zero(d), index);
}

double CubeGrid::cube_max_norm(std::int64_t index) const {
  const Vec lo = cube_low(index);
  double s = 0.0;
  for (int p = 0; p < d; ++p) {
    const double hi = lo[p] + side();
    const double m = std::max(std::abs(lo[p]), std::abs(hi));
    s += m * m;
  }
  return std::sqrt(s);
}

double CubeGrid::dist_cube_to_sphere(std::int64_t index, double s) const {
  const double lo = cube_min_norm(index);
  const double hi = cube_max_norm(index);
  if (s < lo) return lo - s;
  if (s > hi) return s - hi;
  return 0.0;
}

std::vector<std::int64_t> CubeGrid::neighbor_cubes(std::int64_t index) const {
  const ZPoint z = z_of(index);
  std::vector<std::int64_t> out;
  const int total = static_cast<int>(ipow_checked(3, d));
  out.reserve(static_cast<size_t>(total));
  for (int code = 0; code < total; ++code) {
    ZPoint w = z;
    int c = code;
    for (int p = 0; p < d; ++p) {
      w[static_cast<size_t>(p)] += (c % 3) - 1;
      c /= 3;
    }
    out.push_back(index_of(w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Window::contains_window(const Window& sub) const {
  if (!(grid == sub.grid)) return false;
  return std::includes(cubes.begin(), cubes.end(), sub.cubes.begin(), sub.cubes.end());
}

Window window_for_radius(double r, const CubeGrid& grid, double D) {
  if (!(r > 0.0)) throw std::invalid_argument("window_for_radius: r must be > 0");
  if (grid.t != D) throw std::invalid_argument("window_for_radius: grid half edge must equal D");
  const double reach = r + D;
  // Scan the bounding sup-norm box and keep cubes actually meeting the ball.
  const std::int64_t kmax = static_cast<std::int64_t>(std::floor(reach / grid.side())) + 1;
  Window w;
  w.grid = grid;
  ZPoint z{};
  // odometer over [-kmax, kmax]^d
  for (int p = 0; p < grid.d; ++p) z[static_cast<size_t>(p)] = -kmax;
  while (true) {
    const std::int64_t idx = grid.index_of(z);
    if (grid.cube_min_norm(idx) <= reach) w.cubes.push_back(idx);
    int p = grid.d - 1;
    while (p >= 0 && z[static_cast<size_t>(p)] == kmax) {
      z[static_cast<size_t>(p)] = -kmax;
      --p;
    }
    if (p < 0) break;
    ++z[static_cast<size_t>(p)];
  }
  std::sort(w.cubes.begin(), w.cubes.end());
  return w;
}

}  // namespace rcm
