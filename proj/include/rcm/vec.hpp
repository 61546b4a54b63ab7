#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace rcm {

// Points live in R^d with d known at runtime but small. Positions are stored
// inline (no heap) so the Monte Carlo inner loops stay allocation-free.
inline constexpr int kMaxDim = 8;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int d) : d_(d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    v_.fill(0.0);
  }
  Vec(std::initializer_list<double> xs) : d_(static_cast<int>(xs.size())) {
    if (d_ < 1 || d_ > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    v_.fill(0.0);
    std::copy(xs.begin(), xs.end(), v_.begin());
  }

  static Vec zero(int d) { return Vec(d); }

  int dim() const { return d_; }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  double& operator[](int i) { return v_[static_cast<size_t>(i)]; }

  const double* data() const { return v_.data(); }

  friend Vec operator+(Vec a, const Vec& b) {
    for (int i = 0; i < a.d_; ++i) a.v_[static_cast<size_t>(i)] += b[i];
    return a;
  }
  friend Vec operator-(Vec a, const Vec& b) {
    for (int i = 0; i < a.d_; ++i) a.v_[static_cast<size_t>(i)] -= b[i];
    return a;
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.d_ != b.d_) return false;
    for (int i = 0; i < a.d_; ++i) {
      if (a[i] != b[i]) return false;
    }
    return true;
  }

 private:
  std::array<double, kMaxDim> v_{};
  int d_ = 0;
};

// Lexicographic order on R^d; this is the "<" of the coordinate assignment.
inline bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

inline double dist_sq(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double dx = a[i] - b[i];
    s += dx * dx;
  }
  return s;
}

inline double dist(const Vec& a, const Vec& b) { return std::sqrt(dist_sq(a, b)); }

inline double norm(const Vec& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

// Max pairwise Euclidean distance; 0 for a singleton. Empty input is a
// contract violation.
inline double diam(std::span<const Vec> pts) {
  if (pts.empty()) throw std::invalid_argument("diam: empty point set");
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist_sq(pts[i], pts[j]));
  return std::sqrt(best);
}

}  // namespace rcm
