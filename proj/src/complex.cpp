#include "rcm/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace rcm {

Simplex Simplex::of(std::span<const std::uint32_t> ids) {
  if (ids.size() > kMaxDim) throw std::invalid_argument("Simplex: too many vertices");
  Simplex s;
  s.n = static_cast<std::uint8_t>(ids.size());
  std::copy(ids.begin(), ids.end(), s.v.begin());
  std::sort(s.v.begin(), s.v.begin() + s.n);
  return s;
}

bool Simplex::contains(std::uint32_t id) const {
  return std::binary_search(v.begin(), v.begin() + n, id);
}

Simplex Simplex::facet_without(int drop) const {
  Simplex f;
  f.n = static_cast<std::uint8_t>(n - 1);
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (i != drop) f.v[static_cast<size_t>(k++)] = v[static_cast<size_t>(i)];
  return f;
}

std::int64_t Complex::count_faces(int j) const {
  if (j < 0 || j > alpha) throw std::invalid_argument("count_faces: dimension out of range");
  if (j == 0) return static_cast<std::int64_t>(verts.size());
  return static_cast<std::int64_t>(simplices[static_cast<size_t>(j)].size());
}

std::span<const Simplex> Complex::faces(int j) const {
  return simplices[static_cast<size_t>(j)];
}

double Complex::simplex_diam(const Simplex& s) const {
  double best = 0.0;
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j)
      best = std::max(best, dist_sq(verts[s[i]].pos, verts[s[j]].pos));
  return std::sqrt(best);
}

bool Complex::simplex_meets_outside(const Simplex& s, double radius) const {
  for (int i = 0; i < s.n; ++i)
    if (norm(verts[s[i]].pos) > radius) return true;
  return false;
}

double simplex_u(std::span<const MarkedPoint* const> pts) {
  // Owner: lexicographically greatest position. Message: the other vertices'
  // (m,l) coordinates in position-lex order.
  size_t owner = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (lex_less(pts[owner]->pos, pts[i]->pos)) owner = i;
  std::array<const MarkedPoint*, kMaxDim> rest{};
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    if (i != owner) rest[k++] = pts[i];
  std::sort(rest.begin(), rest.begin() + k,
            [](const MarkedPoint* a, const MarkedPoint* b) { return lex_less(a->pos, b->pos); });
  std::array<std::pair<std::uint64_t, std::uint64_t>, kMaxDim> coords{};
  for (size_t i = 0; i < k; ++i)
    coords[i] = {static_cast<std::uint64_t>(rest[i]->cube), rest[i]->l};
  return prf_unit(pts[owner ]->stream_key, static_cast<std::uint32_t>(pts.size() - 1),
                  {coords.data(), k});
}

bool accept_tuple(const ConnectionFamily& family, std::span<const MarkedPoint* const> pts) {
  const int j = static_cast<int>(pts.size()) - 1;
  std::array<Vec, kMaxDim> xs{};
  std::array<Mark, kMaxDim> marks{};
  for (size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i]->pos;
    marks[i] = pts[i]->mark;
  }
  const double p = family.phi(j, {xs.data(), pts.size()}, {marks.data(), pts.size()});
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return simplex_u(pts) <= p;
}

namespace {

// Vertex order inside a cube group follows l, so sorting the realization by
// (cube, l) gives the canonical vertex table directly.
std::vector<MarkedPoint> canonical_vertices(const Realization& rz) {
  std::vector<MarkedPoint> verts = rz.points;
  std::sort(verts.begin(), verts.end(), [](const MarkedPoint& a, const MarkedPoint& b) {
    if (a.cube != b.cube) return a.cube < b.cube;
    return a.l < b.l;
  });
  return verts;
}

}  // namespace

Complex build_complex(const Realization& rz, const ConnectionFamily& family) {
  if (std::abs(rz.window.grid.t - family.D) > 1e-12)
    throw std::invalid_argument("build_complex: window grid half edge must equal the family's D");
  Complex cx;
  cx.grid = rz.window.grid;
  cx.window = rz.window;
  cx.alpha = family.alpha;
  cx.D = family.D;
  cx.family = family;
  cx.seed = rz.seed;
  cx.beta = rz.beta;
  cx.with_origin = rz.with_origin;
  cx.edge_cutoff_applied = family.edge_cutoff_modifies();
  cx.verts = canonical_vertices(rz);
  cx.simplices.assign(static_cast<size_t>(family.alpha) + 1, {});

  const std::uint32_t nv = static_cast<std::uint32_t>(cx.verts.size());
  for (std::uint32_t i = 0; i < nv; ++i)
    if (cx.verts[i].is_origin) cx.origin_vertex = i;

  // cube -> contiguous vertex range
  std::unordered_map<std::int64_t, std::pair<std::uint32_t, std::uint32_t>> cube_range;
  {
    std::uint32_t i = 0;
    while (i < nv) {
      std::uint32_t j = i;
      while (j < nv && cx.verts[j].cube == cx.verts[i].cube) ++j;
      cube_range.emplace(cx.verts[i].cube, std::make_pair(i, j));
      i = j;
    }
  }

  // Level 1: candidate pairs within one cube shell (t = D makes this exact
  // for the modified edge function phi_1 * 1{dist <= D}).
  std::vector<std::vector<std::uint32_t>> adj(nv);
  const double D = family.D;
  for (const auto& [cube, range] : cube_range) {
    for (const std::int64_t nb : cx.grid.neighbor_cubes(cube)) {
      if (nb < cube) continue;  // unordered cube pairs once
      const auto it = cube_range.find(nb);
      if (it == cube_range.end()) continue;
      const auto [b0, b1] = it->second;
      const auto [a0, a1] = range;
      for (std::uint32_t i = a0; i < a1; ++i) {
        for (std::uint32_t j = (nb == cube ? i + 1 : b0); j < b1; ++j) {
          if (dist(cx.verts[i].pos, cx.verts[j].pos) > D) continue;
          const MarkedPoint* pair[2] = {&cx.verts[i], &cx.verts[j]};
          if (accept_tuple(family, {pair, 2})) {
            adj[i].push_back(j);
            adj[j].push_back(i);
            std::uint32_t ids[2] = {i, j};
            cx.simplices[1].push_back(Simplex::of({ids, 2}));
          }
        }
      }
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::sort(cx.simplices[1].begin(), cx.simplices[1].end());

  // Higher levels: grow a (j-1)-simplex by a common neighbor above its max
  // vertex; all facets must already be present.
  for (int j = 2; j <= family.alpha; ++j) {
    const auto& prev = cx.simplices[static_cast<size_t>(j) - 1];
    std::unordered_set<Simplex, SimplexHash> prev_set(prev.begin(), prev.end());
    std::vector<std::uint32_t> common;
    for (const Simplex& s : prev) {
      // intersect adjacency lists, keeping ids above the simplex max
      common.assign(adj[s[0]].begin(), adj[s[0]].end());
      for (int i = 1; i < s.n && !common.empty(); ++i) {
        std::vector<std::uint32_t> merged;
        std::set_intersection(common.begin(), common.end(), adj[s[i]].begin(), adj[s[i]].end(),
                              std::back_inserter(merged));
        common.swap(merged);
      }
      const std::uint32_t top = s[s.n - 1];
      for (const std::uint32_t w : common) {
        if (w <= top) continue;
        Simplex cand;
        cand.n = static_cast<std::uint8_t>(s.n + 1);
        std::copy(s.v.begin(), s.v.begin() + s.n, cand.v.begin());
        cand.v[static_cast<size_t>(s.n)] = w;  // already sorted: w > all of s
        bool facets_ok = true;
        for (int drop = 0; drop < cand.n - 1 && facets_ok; ++drop)
          facets_ok = prev_set.count(cand.facet_without(drop)) > 0;
        if (!facets_ok) continue;
        std::array<const MarkedPoint*, kMaxDim> pts{};
        for (int i = 0; i < cand.n; ++i) pts[static_cast<size_t>(i)] = &cx.verts[cand[i]];
        if (accept_tuple(family, {pts.data(), static_cast<size_t>(cand.n)}))
          cx.simplices[static_cast<size_t>(j)].push_back(cand);
      }
    }
    std::sort(cx.simplices[static_cast<size_t>(j)].begin(),
              cx.simplices[static_cast<size_t>(j)].end());
  }
  return cx;
}

Complex restrict_complex(const Complex& cx, const Window& sub) {
  if (!cx.window.contains_window(sub))
    throw std::invalid_argument("restrict_complex: sub-window must be a cube-aligned subset");
  Complex out;
  out.grid = cx.grid;
  out.window = sub;
  out.alpha = cx.alpha;
  out.D = cx.D;
  out.family = cx.family;
  out.seed = cx.seed;
  out.beta = cx.beta;
  out.edge_cutoff_applied = cx.edge_cutoff_applied;
  std::vector<std::uint32_t> remap(cx.verts.size(), UINT32_MAX);
  for (std::uint32_t i = 0; i < cx.verts.size(); ++i) {
    if (sub.contains(cx.verts[i].cube)) {
      remap[i] = static_cast<std::uint32_t>(out.verts.size());
      out.verts.push_back(cx.verts[i]);
      if (cx.verts[i].is_origin) out.origin_vertex = remap[i];
    }
  }
  out.with_origin = out.origin_vertex >= 0;
  out.simplices.assign(static_cast<size_t>(cx.alpha) + 1, {});
  for (int j = 1; j <= cx.alpha; ++j) {
    for (const Simplex& s : cx.simplices[static_cast<size_t>(j)]) {
      bool keep = true;
      Simplex t;
      t.n = s.n;
      for (int i = 0; i < s.n && keep; ++i) {
        if (remap[s[i]] == UINT32_MAX) keep = false;
        else t.v[static_cast<size_t>(i)] = remap[s[i]];
      }
      if (keep) out.simplices[static_cast<size_t>(j)].push_back(t);
    }
    std::sort(out.simplices[static_cast<size_t>(j)].begin(),
              out.simplices[static_cast<size_t>(j)].end());
  }
  return out;
}

nlohmann::ordered_json complex_to_json(const Complex& cx) {
  nlohmann::ordered_json j;
  j["d"] = cx.grid.d;
  j["t"] = cx.grid.t;
  j["alpha"] = cx.alpha;
  j["D"] = cx.D;
  j["family"] = cx.family.kind_name();
  j["seed"] = cx.seed;
  j["beta"] = cx.beta;
  j["with_origin"] = cx.with_origin;
  j["origin_vertex"] = cx.origin_vertex;
  j["edge_cutoff_applied"] = cx.edge_cutoff_applied;
  j["window"] = cx.window.cubes;
  auto verts = nlohmann::ordered_json::array();
  for (const auto& p : cx.verts) {
    nlohmann::ordered_json v;
    v["m"] = p.cube;
    v["l"] = p.l;
    auto pos = nlohmann::ordered_json::array();
    for (int a = 0; a < cx.grid.d; ++a) pos.push_back(p.pos[a]);
    v["pos"] = pos;
    v["mark"] = p.mark.value;
    v["origin"] = p.is_origin;
    verts.push_back(v);
  }
  j["vertices"] = verts;
  auto sims = nlohmann::ordered_json::object();
  for (int dim = 1; dim <= cx.alpha; ++dim) {
    auto level = nlohmann::ordered_json::array();
    for (const Simplex& s : cx.simplices[static_cast<size_t>(dim)]) {
      auto tuple = nlohmann::ordered_json::array();
      for (int i = 0; i < s.n; ++i) tuple.push_back(s[i]);
      level.push_back(tuple);
    }
    sims[std::to_string(dim)] = level;
  }
  j["simplices"] = sims;
  auto counts = nlohmann::ordered_json::array();
  for (int dim = 0; dim <= cx.alpha; ++dim) counts.push_back(cx.count_faces(dim));
  j["face_counts"] = counts;
  return j;
}

}  // namespace rcm
