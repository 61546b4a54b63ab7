#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcm/family.hpp"
#include "rcm/sampler.hpp"

#include "json.hpp"

namespace rcm {

// A simplex as a sorted tuple of vertex indices (into the complex's vertex
// table). Vertex order is the table order, which is the (m,l) order.
struct Simplex {
  std::array<std::uint32_t, kMaxDim> v{};
  std::uint8_t n = 0;

  int dim() const { return n - 1; }
  std::uint32_t operator[](int i) const { return v[static_cast<size_t>(i)]; }
  std::span<const std::uint32_t> verts() const { return {v.data(), n}; }

  static Simplex of(std::span<const std::uint32_t> ids);
  bool contains(std::uint32_t id) const;
  Simplex facet_without(int drop) const;  // remove the i-th vertex

  friend bool operator==(const Simplex& a, const Simplex& b) {
    if (a.n != b.n) return false;
    for (int i = 0; i < a.n; ++i) {
      if (a.v[static_cast<size_t>(i)] != b.v[static_cast<size_t>(i)]) return false;
    }
    return true;
  }
  friend bool operator<(const Simplex& a, const Simplex& b) {
    const int m = std::min(a.n, b.n);
    for (int i = 0; i < m; ++i) {
      if (a.v[static_cast<size_t>(i)] != b.v[static_cast<size_t>(i)])
        return a.v[static_cast<size_t>(i)] < b.v[static_cast<size_t>(i)];
    }
    return a.n < b.n;
  }
};

struct SimplexHash {
  size_t operator()(const Simplex& s) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ s.n;
    for (int i = 0; i < s.n; ++i) {
      h ^= s.v[static_cast<size_t>(i)] + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

// The built random simplicial complex on a realization. simplices[j] holds
// the j-simplices for j = 1..alpha, each level sorted; 0-simplices are the
// vertex table itself.
struct Complex {
  CubeGrid grid;
  Window window;
  int alpha = 1;
  double D = 0.0;
  ConnectionFamily family;
  std::uint64_t seed = 0;
  double beta = 0.0;
  bool with_origin = false;
  std::int64_t origin_vertex = -1;
  bool edge_cutoff_applied = false;  // the phi_1 * 1{dist<=D} modification was real

  std::vector<MarkedPoint> verts;
  std::vector<std::vector<Simplex>> simplices;  // index j -> dimension j (index 0 unused)

  std::int64_t count_faces(int j) const;
  std::span<const Simplex> faces(int j) const;
  double simplex_diam(const Simplex& s) const;
  bool simplex_meets_outside(const Simplex& s, double radius) const;  // some |v| > radius
};

// The u(rho) stream of a candidate simplex: keyed by the lexicographically
// greatest vertex (by position), message = (|rho|-1, coordinates of the other
// vertices in position-lex order).
double simplex_u(std::span<const MarkedPoint* const> pts);

// Acceptance of one candidate tuple: u(rho) <= phi_{|rho|-1}(rho), with the
// PRF consulted only when phi is strictly between 0 and 1.
bool accept_tuple(const ConnectionFamily& family, std::span<const MarkedPoint* const> pts);

// Build Delta (or Delta^0 when the realization carries the origin) by the
// staged decision rule, with candidate pairs restricted to distance <= D via
// the cube neighborhoods. Requires window.grid.t == family.D.
Complex build_complex(const Realization& rz, const ConnectionFamily& family);

// Keep the simplices whose vertices all lie in `sub` (a cube-aligned
// sub-window of the complex's window).
Complex restrict_complex(const Complex& cx, const Window& sub);

nlohmann::ordered_json complex_to_json(const Complex& cx);

}  // namespace rcm
