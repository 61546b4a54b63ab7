#include "rcm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rcm {

namespace {

struct CubeDraw {
  std::vector<MarkedPoint> pts;
  std::uint64_t redraws = 0;
};

// Draw cube `cube`'s points under `replica`. Deterministic in
// (seed, cube, replica); independent of every other cube.
CubeDraw draw_cube(std::uint64_t seed, double beta, const CubeGrid& grid, std::int64_t cube,
                   const MarkLaw& law, std::uint32_t replica) {
  CubeDraw out;
  CounterStream stream(
      derive_stream_key(seed, kTagPoints, static_cast<std::uint64_t>(cube), replica));
  const Key128 keysrc =
      derive_stream_key(seed, kTagStreamKey, static_cast<std::uint64_t>(cube), replica);
  const double lambda = beta * grid.cell_volume();
  const int n = poisson_inverse(lambda, stream.next_unit());
  const Vec lo = grid.cube_low(cube);
  out.pts.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    MarkedPoint p;
    p.cube = cube;
    p.pos = Vec::zero(grid.d);
    for (int a = 0; a < grid.d; ++a) p.pos[a] = lo[a] + grid.side() * stream.next_unit();
    p.mark = law.sample(stream);
    p.stream_key = point_stream_key(keysrc, static_cast<std::uint64_t>(k));
    out.pts.push_back(p);
  }
  // Exact duplicate positions are a null event mathematically but possible in
  // floating point; redraw the later draw until all positions are distinct.
  bool clean = false;
  while (!clean) {
    clean = true;
    for (size_t i = 0; i < out.pts.size() && clean; ++i)
      for (size_t j = i + 1; j < out.pts.size() && clean; ++j)
        if (out.pts[i].pos == out.pts[j].pos) {
          for (int a = 0; a < grid.d; ++a)
            out.pts[j].pos[a] = lo[a] + grid.side() * stream.next_unit();
          ++out.redraws;
          clean = false;
        }
  }
  return out;
}

// Sort each cube's points lexicographically and assign l, with the origin
// participating in cube 0 when present.
void assign_ranks(std::vector<MarkedPoint>& pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const MarkedPoint& a, const MarkedPoint& b) {
    if (a.cube != b.cube) return a.cube < b.cube;
    return lex_less(a.pos, b.pos);
  });
  size_t i = 0;
  while (i < pts.size()) {
    size_t j = i;
    std::uint32_t l = 0;
    while (j < pts.size() && pts[j].cube == pts[i].cube) pts[j++].l = l++;
    i = j;
  }
}

MarkedPoint make_origin(std::uint64_t seed, const CubeGrid& grid, const MarkLaw& law,
                        std::uint32_t replica) {
  CounterStream stream(derive_stream_key(seed, kTagOrigin, 0, replica));
  MarkedPoint o;
  o.pos = Vec::zero(grid.d);
  o.cube = 0;
  o.mark = law.sample(stream);
  o.stream_key = point_stream_key(derive_stream_key(seed, kTagOrigin, 1, replica), 0);
  o.is_origin = true;
  return o;
}

void locate_origin(Realization& rz) {
  rz.origin_index = -1;
  for (size_t i = 0; i < rz.points.size(); ++i)
    if (rz.points[i].is_origin) rz.origin_index = static_cast<std::int64_t>(i);
}

}  // namespace

Realization sample_realization(std::uint64_t seed, double beta, const Window& window,
                               const MarkLaw& law, bool with_origin) {
  if (beta < 0.0) throw std::invalid_argument("sample_realization: beta must be >= 0");
  if (window.empty()) throw std::invalid_argument("sample_realization: empty window");
  if (with_origin && !window.contains(0))
    throw std::invalid_argument("sample_realization: origin requested but cube 0 not in window");
  Realization rz;
  rz.seed = seed;
  rz.beta = beta;
  rz.window = window;
  rz.mark_law = law;
  rz.with_origin = with_origin;
  for (const std::int64_t cube : window.cubes) {
    CubeDraw draw = draw_cube(seed, beta, window.grid, cube, law, 0);
    rz.duplicate_redraws += draw.redraws;
    rz.points.insert(rz.points.end(), draw.pts.begin(), draw.pts.end());
  }
  if (with_origin) {
    MarkedPoint o = make_origin(seed, window.grid, law, 0);
    // A sampled point exactly at the origin would collide; redraw it.
    for (auto& p : rz.points)
      if (p.cube == 0 && p.pos == o.pos) {
        CounterStream stream(derive_stream_key(seed, kTagPoints, 0, 0xFFFFFFFFu));
        const Vec lo = window.grid.cube_low(0);
        for (int a = 0; a < window.grid.d; ++a)
          p.pos[a] = lo[a] + window.grid.side() * stream.next_unit();
        ++rz.duplicate_redraws;
      }
    rz.points.push_back(o);
  }
  assign_ranks(rz.points);
  locate_origin(rz);
  return rz;
}

void resample_cube(Realization& rz, std::int64_t cube, std::uint32_t replica) {
  if (!rz.window.contains(cube))
    throw std::invalid_argument("resample_cube: cube not in the window");
  std::vector<MarkedPoint> kept;
  kept.reserve(rz.points.size());
  for (const auto& p : rz.points)
    if (p.cube != cube) kept.push_back(p);
  CubeDraw draw = draw_cube(rz.seed, rz.beta, rz.window.grid, cube, rz.mark_law, replica);
  rz.duplicate_redraws += draw.redraws;
  kept.insert(kept.end(), draw.pts.begin(), draw.pts.end());
  if (rz.with_origin && cube == 0) {
    // Psi_0 includes the added origin point: the independent copy redraws its
    // mark and streams as well (the position is the deterministic 0).
    kept.push_back(make_origin(rz.seed, rz.window.grid, rz.mark_law, replica));
  }
  rz.points = std::move(kept);
  assign_ranks(rz.points);
  locate_origin(rz);
}

Realization without_origin(const Realization& rz) {
  Realization out = rz;
  out.with_origin = false;
  out.points.clear();
  for (const auto& p : rz.points)
    if (!p.is_origin) out.points.push_back(p);
  assign_ranks(out.points);
  locate_origin(out);
  return out;
}

Realization restrict_realization(const Realization& rz, const Window& sub) {
  if (!rz.window.contains_window(sub))
    throw std::invalid_argument("restrict_realization: sub-window not contained");
  Realization out = rz;
  out.window = sub;
  out.points.clear();
  for (const auto& p : rz.points)
    if (sub.contains(p.cube)) out.points.push_back(p);
  out.with_origin = rz.with_origin && sub.contains(0);
  locate_origin(out);
  return out;
}

std::vector<std::pair<std::int64_t, std::uint32_t>> coordinates(const Realization& rz) {
  std::vector<std::pair<std::int64_t, std::uint32_t>> out;
  out.reserve(rz.points.size());
  for (const auto& p : rz.points) out.emplace_back(p.cube, p.l);
  return out;
}

Realization realization_from_points(std::uint64_t seed, const Window& window,
                                    const std::vector<Vec>& positions,
                                    const std::vector<Mark>& marks, bool with_origin) {
  Realization rz;
  rz.seed = seed;
  rz.window = window;
  rz.mark_law = MarkLaw::unit();
  rz.with_origin = with_origin;
  std::vector<std::uint64_t> per_cube_count;
  std::vector<std::int64_t> cubes;
  for (size_t i = 0; i < positions.size(); ++i) {
    MarkedPoint p;
    p.pos = positions[i];
    p.cube = window.grid.cube_index(positions[i]);
    if (!window.contains(p.cube))
      throw std::invalid_argument("realization_from_points: point outside the window");
    p.mark = i < marks.size() ? marks[i] : Mark{};
    std::uint64_t draw = 0;
    for (size_t k = 0; k < i; ++k)
      if (window.grid.cube_index(positions[k]) == p.cube) ++draw;
    p.stream_key = point_stream_key(
        derive_stream_key(seed, kTagStreamKey, static_cast<std::uint64_t>(p.cube), 0), draw);
    rz.points.push_back(p);
  }
  if (with_origin) {
    if (!window.contains(0))
      throw std::invalid_argument("realization_from_points: origin needs cube 0");
    rz.points.push_back(make_origin(seed, window.grid, rz.mark_law, 0));
  }
  assign_ranks(rz.points);
  locate_origin(rz);
  return rz;
}

void write_realization_csv(const Realization& rz, std::ostream& os) {
  const int d = rz.window.grid.d;
  os << "m,l";
  for (int a = 0; a < d; ++a) os << ",x" << a;
  os << ",mark\n";
  char buf[64];
  for (const auto& p : rz.points) {
    os << p.cube << ',' << p.l;
    for (int a = 0; a < d; ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.pos[a]);
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", p.mark.value);
    os << ',' << buf << '\n';
  }
}

}  // namespace rcm
