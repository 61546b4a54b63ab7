#pragma once

#include <limits>
#include <stdexcept>

#include "rcm/rng.hpp"

namespace rcm {

// Marks are restricted to what the implemented families need: nothing (Unit),
// a ball grain radius (Radius), or a generic scalar (Scalar).
enum class MarkKind : std::uint8_t { Unit = 0, Radius = 1, Scalar = 2 };

struct Mark {
  MarkKind kind = MarkKind::Unit;
  double value = 0.0;
  friend bool operator==(const Mark&, const Mark&) = default;
};

// Sampler for the mark distribution Theta. UniformRadius(lo,hi) keeps radii
// in [lo,hi]; hi plays the role of the (B2) bound R, and (B1) holds with
// r_0 = (lo+hi)/2 (mass 1/2 above it).
struct MarkLaw {
  enum class Kind : std::uint8_t { Unit = 0, FixedRadius = 1, UniformRadius = 2 };
  Kind kind = Kind::Unit;
  double lo = 0.0;
  double hi = 0.0;

  static MarkLaw unit() { return MarkLaw{}; }
  static MarkLaw fixed_radius(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("MarkLaw: radius must be >= 0");
    return MarkLaw{Kind::FixedRadius, r, r};
  }
  static MarkLaw uniform_radius(double lo, double hi) {
    if (!(0.0 <= lo && lo <= hi) || !(hi > 0.0))
      throw std::invalid_argument("MarkLaw: need 0 <= lo <= hi, hi > 0");
    return MarkLaw{Kind::UniformRadius, lo, hi};
  }

  Mark sample(CounterStream& stream) const {
    switch (kind) {
      case Kind::Unit:
        return Mark{};
      case Kind::FixedRadius:
        return Mark{MarkKind::Radius, lo};
      case Kind::UniformRadius:
        return Mark{MarkKind::Radius, lo + (hi - lo) * stream.next_unit()};
    }
    throw std::logic_error("MarkLaw: bad kind");
  }

  // (B1): some r_0 > 0 with positive mass of grains containing B(0, r_0).
  double b1_radius() const {
    switch (kind) {
      case Kind::Unit: return 0.0;
      case Kind::FixedRadius: return lo;
      case Kind::UniformRadius: return 0.5 * (lo + hi);
    }
    return 0.0;
  }
  // (B2): almost-sure bound R on grain radii.
  double b2_bound() const { return hi; }
};

// The (V1) mark set A, represented as an interval on the mark value. For Unit
// marks the whole space is used.
struct MarkInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(const Mark& m) const {
    if (m.kind == MarkKind::Unit) return true;
    return lo <= m.value && m.value <= hi;
  }
  friend bool operator==(const MarkInterval&, const MarkInterval&) = default;
};

}  // namespace rcm
