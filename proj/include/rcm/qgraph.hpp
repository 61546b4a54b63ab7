#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcm/complex.hpp"

namespace rcm {

// Weighted quick-union with path halving.
class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n), size_(n, 1) {
    for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) {
    while (x != parent_[x]) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }
  size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

enum class QGraphMode : std::uint8_t { Up = 0, Down = 1 };

// Up mode: vertices are the q-simplices, [sigma,rho] iff sigma u rho is a
// (q+1)-simplex of the complex. Down mode: vertices are the (q+1)-simplices,
// [pi,tau] iff |pi n tau| = q+1.
struct QGraph {
  int q = 0;
  QGraphMode mode = QGraphMode::Up;
  std::vector<Simplex> vertices;                    // sorted canonical order
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::vector<std::uint32_t>> adjacency;
  std::vector<std::uint32_t> component;             // root label per vertex
};

QGraph up_graph(const Complex& cx, int q);
QGraph down_graph(const Complex& cx, int q);

struct ComponentSummary {
  std::vector<std::uint32_t> labels;                       // per vertex, root id
  std::vector<std::pair<std::int64_t, std::int64_t>> histogram;  // (size, count), size asc
  std::vector<std::uint32_t> largest;                      // vertex ids of a largest component
};

ComponentSummary components(const QGraph& g);

// The finite B_r event: some q-simplex containing the origin with diameter at
// most D is G_q-connected to a q-simplex meeting B(0,r)^c. The witness is a
// minimal-hop chain.
struct PercolationVerdict {
  bool occurred = false;
  std::vector<Simplex> witness;
  double r = 0.0;
  int q = 0;
};

PercolationVerdict event_B_r(const Complex& cx_with_origin, int q, double r, double D);

// Variant without the W^(r) coverage check, for evaluation on explored
// sub-windows.
PercolationVerdict event_B_r_unchecked(const Complex& cx_with_origin, int q, double r, double D);

// Finite form of the up/down duality: the map sending each down-component to
// the up-component containing its simplices' facets is a bijection onto the
// non-singleton up-components.
bool duality_check(const Complex& cx, int q);

}  // namespace rcm
