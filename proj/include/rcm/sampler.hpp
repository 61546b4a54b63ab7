#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rcm/grid.hpp"
#include "rcm/marks.hpp"
#include "rcm/rng.hpp"
#include "rcm/vec.hpp"

namespace rcm {

// One vertex of the process: position, mark, cube coordinates (m,l), and the
// 128-bit key of its personal PRF streams. The key is derived from
// (seed, cube, replica, draw index) and therefore travels with the point
// under window restriction.
struct MarkedPoint {
  Vec pos;
  Mark mark;
  std::int64_t cube = 0;  // m
  std::uint32_t l = 0;    // lexicographic rank within the cube
  Key128 stream_key;
  bool is_origin = false;
};

// A sampled restriction of the marked Poisson process to a window, plus the
// optional deterministic point at the origin (the Palm point of Delta^0).
// Points are sorted by (cube, position-lex); l ranks are assigned with the
// origin included when present.
struct Realization {
  std::uint64_t seed = 0;
  double beta = 0.0;
  Window window;
  MarkLaw mark_law;
  bool with_origin = false;
  std::vector<MarkedPoint> points;
  std::int64_t origin_index = -1;          // index into points, -1 if absent
  std::uint64_t duplicate_redraws = 0;     // exact float collisions resolved
};

// Cube-local sampling: cube i's points depend only on (seed, i, beta, law),
// never on the window extent. replica 0 is the base process; higher replicas
// are the independent copies used for influence estimation.
Realization sample_realization(std::uint64_t seed, double beta, const Window& window,
                               const MarkLaw& law, bool with_origin);

// Replace cube `cube`'s points (and the origin's mark when cube 0 holds the
// origin) with an independent copy drawn under `replica`. Ranks within the
// cube are reassigned; everything else is untouched.
void resample_cube(Realization& rz, std::int64_t cube, std::uint32_t replica);

// Drop the origin point and recompute cube-0 ranks; the complex built from
// the result is the paper's Delta (as opposed to Delta^0).
Realization without_origin(const Realization& rz);

// Restriction to a sub-window (cube-aligned); ranks are untouched because
// they are cube-local.
Realization restrict_realization(const Realization& rz, const Window& sub);

// (m,l) pairs in point order; coordinates are unique per realization.
std::vector<std::pair<std::int64_t, std::uint32_t>> coordinates(const Realization& rz);

// Test/CLI support: wrap explicit positions as a realization (unit marks or
// given marks), assigning coordinates and stream keys the same way sampling
// would for points injected at draw indices 0,1,... per cube.
Realization realization_from_points(std::uint64_t seed, const Window& window,
                                    const std::vector<Vec>& positions,
                                    const std::vector<Mark>& marks = {},
                                    bool with_origin = false);

// CSV export: m,l,x0..x{d-1},mark
void write_realization_csv(const Realization& rz, std::ostream& os);

}  // namespace rcm
