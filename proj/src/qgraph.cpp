#include "rcm/qgraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace rcm {

namespace {

void finalize(QGraph& g) {
  g.adjacency.assign(g.vertices.size(), {});
  UnionFind uf(g.vertices.size());
  for (const auto& [a, b] : g.edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
    uf.unite(a, b);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  g.component.resize(g.vertices.size());
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) g.component[i] = uf.find(i);
}

std::vector<Simplex> q_simplices(const Complex& cx, int q) {
  if (q == 0) {
    std::vector<Simplex> out;
    out.reserve(cx.verts.size());
    for (std::uint32_t i = 0; i < cx.verts.size(); ++i) {
      std::uint32_t id = i;
      out.push_back(Simplex::of({&id, 1}));
    }
    return out;
  }
  return {cx.faces(q).begin(), cx.faces(q).end()};
}

}  // namespace

QGraph up_graph(const Complex& cx, int q) {
  if (q < 0 || q >= cx.alpha) throw std::invalid_argument("up_graph: need 0 <= q < alpha");
  QGraph g;
  g.q = q;
  g.mode = QGraphMode::Up;
  g.vertices = q_simplices(cx, q);
  std::unordered_map<Simplex, std::uint32_t, SimplexHash> index;
  index.reserve(g.vertices.size() * 2);
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) index.emplace(g.vertices[i], i);
  // Each (q+1)-simplex pi induces the clique on its q+2 facets; distinct pi
  // give distinct edges (the union of an edge's endpoints is pi itself).
  for (const Simplex& pi : cx.faces(q + 1)) {
    std::array<std::uint32_t, kMaxDim> ids{};
    for (int i = 0; i < pi.n; ++i) ids[static_cast<size_t>(i)] = index.at(pi.facet_without(i));
    for (int i = 0; i < pi.n; ++i)
      for (int j = i + 1; j < pi.n; ++j)
        g.edges.emplace_back(std::min(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]),
                             std::max(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]));
  }
  finalize(g);
  return g;
}

QGraph down_graph(const Complex& cx, int q) {
  if (q < 0 || q >= cx.alpha) throw std::invalid_argument("down_graph: need 0 <= q < alpha");
  QGraph g;
  g.q = q;
  g.mode = QGraphMode::Down;
  g.vertices = {cx.faces(q + 1).begin(), cx.faces(q + 1).end()};
  // Bucket the (q+1)-simplices by their q-faces; adjacent pairs share exactly
  // one q-face, so each unordered pair appears in exactly one bucket.
  std::unordered_map<Simplex, std::vector<std::uint32_t>, SimplexHash> buckets;
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
    const Simplex& pi = g.vertices[i];
    for (int drop = 0; drop < pi.n; ++drop) buckets[pi.facet_without(drop)].push_back(i);
  }
  for (const auto& [facet, members] : buckets)
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = i + 1; j < members.size(); ++j)
        g.edges.emplace_back(std::min(members[i], members[j]), std::max(members[i], members[j]));
  finalize(g);
  return g;
}

ComponentSummary components(const QGraph& g) {
  ComponentSummary out;
  out.labels = g.component;
  std::unordered_map<std::uint32_t, std::int64_t> sizes;
  for (const std::uint32_t root : g.component) ++sizes[root];
  std::map<std::int64_t, std::int64_t> hist;
  std::uint32_t largest_root = 0;
  std::int64_t largest_size = 0;
  for (const auto& [root, size] : sizes) {
    ++hist[size];
    if (size > largest_size || (size == largest_size && root < largest_root)) {
      largest_size = size;
      largest_root = root;
    }
  }
  out.histogram.assign(hist.begin(), hist.end());
  for (std::uint32_t i = 0; i < g.component.size(); ++i)
    if (g.component[i] == largest_root) out.largest.push_back(i);
  return out;
}

namespace {

PercolationVerdict event_impl(const Complex& cx, int q, double r, double D) {
  PercolationVerdict verdict;
  verdict.r = r;
  verdict.q = q;
  if (cx.origin_vertex < 0)
    return verdict;  // no origin present: no source simplices
  const QGraph g = up_graph(cx, q);
  const std::uint32_t origin = static_cast<std::uint32_t>(cx.origin_vertex);

  std::vector<std::uint32_t> sources;
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
    const Simplex& s = g.vertices[i];
    if (!s.contains(origin)) continue;
    if (cx.simplex_diam(s) <= D) sources.push_back(i);
  }
  if (sources.empty()) return verdict;

  // Minimal-hop BFS from all sources to any simplex meeting B(0,r)^c.
  std::vector<std::int32_t> prev(g.vertices.size(), -2);  // -2 unseen, -1 source
  std::deque<std::uint32_t> queue;
  for (const std::uint32_t s : sources) {
    prev[s] = -1;
    queue.push_back(s);
  }
  std::int64_t hit = -1;
  while (!queue.empty() && hit < 0) {
    const std::uint32_t cur = queue.front();
    queue.pop_front();
    if (cx.simplex_meets_outside(g.vertices[cur], r)) {
      hit = cur;
      break;
    }
    for (const std::uint32_t nb : g.adjacency[cur]) {
      if (prev[nb] == -2) {
        prev[nb] = static_cast<std::int32_t>(cur);
        queue.push_back(nb);
      }
    }
  }
  if (hit < 0) return verdict;
  verdict.occurred = true;
  for (std::int64_t cur = hit; cur >= 0;
       cur = prev[static_cast<size_t>(cur)] == -1 ? -1 : prev[static_cast<size_t>(cur)])
    verdict.witness.push_back(g.vertices[static_cast<size_t>(cur)]);
  std::reverse(verdict.witness.begin(), verdict.witness.end());
  return verdict;
}

}  // namespace

PercolationVerdict event_B_r(const Complex& cx, int q, double r, double D) {
  const Window needed = window_for_radius(r, cx.grid, D);
  if (!cx.window.contains_window(needed))
    throw std::invalid_argument("event_B_r: window too small for r");
  return event_impl(cx, q, r, D);
}

PercolationVerdict event_B_r_unchecked(const Complex& cx, int q, double r, double D) {
  return event_impl(cx, q, r, D);
}

bool duality_check(const Complex& cx, int q) {
  if (q < 0 || q >= cx.alpha) throw std::invalid_argument("duality_check: need 0 <= q < alpha");
  const QGraph up = up_graph(cx, q);
  const QGraph down = down_graph(cx, q);

  std::unordered_map<Simplex, std::uint32_t, SimplexHash> up_index;
  for (std::uint32_t i = 0; i < up.vertices.size(); ++i) up_index.emplace(up.vertices[i], i);

  // Map each down-component to the up-component holding its facets; all
  // facets of all simplices of one down-component must land together.
  std::unordered_map<std::uint32_t, std::uint32_t> down_to_up;
  for (std::uint32_t i = 0; i < down.vertices.size(); ++i) {
    const Simplex& pi = down.vertices[i];
    const std::uint32_t droot = down.component[i];
    for (int drop = 0; drop < pi.n; ++drop) {
      const std::uint32_t uid = up_index.at(pi.facet_without(drop));
      const std::uint32_t uroot = up.component[uid];
      const auto [it, inserted] = down_to_up.emplace(droot, uroot);
      if (!inserted && it->second != uroot) return false;  // facets split across up-components
    }
  }

  // Injectivity of the map.
  std::unordered_set<std::uint32_t> image;
  for (const auto& [droot, uroot] : down_to_up)
    if (!image.insert(uroot).second) return false;

  // Surjectivity onto non-singleton up-components.
  std::unordered_map<std::uint32_t, std::int64_t> up_sizes;
  for (const std::uint32_t root : up.component) ++up_sizes[root];
  for (const auto& [root, size] : up_sizes)
    if (size > 1 && image.count(root) == 0) return false;
  // And nothing may map onto a singleton.
  for (const auto& [droot, uroot] : down_to_up)
    if (up_sizes.at(uroot) <= 1) return false;
  return true;
}

}  // namespace rcm
