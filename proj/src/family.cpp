#include "rcm/family.hpp"

#include <cmath>
#include <stdexcept>

namespace rcm {

namespace {

constexpr double kMebSlack = 1e-12;

// Circumball of an affinely independent support set (|S| <= d+1): the unique
// smallest ball with all of S on its boundary. Solved in the affine basis
// p_i - p_0 via a small SPD system with partial pivoting.
Ball circumball(std::span<const Vec> support, int d) {
  const size_t n = support.size();
  if (n == 0) return Ball{Vec::zero(d), 0.0};
  if (n == 1) return Ball{support[0], 0.0};
  const size_t m = n - 1;
  // Gram system: sum_j lambda_j (e_i . e_j) = 0.5 * |e_i|^2, e_i = p_i - p_0
  double A[kMaxDim][kMaxDim + 1] = {};
  std::array<Vec, kMaxDim> e;
  for (size_t i = 0; i < m; ++i) e[i] = support[i + 1] - support[0];
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (int k = 0; k < d; ++k) dot += e[i][k] * e[j][k];
      A[i][j] = dot;
    }
    double sq = 0.0;
    for (int k = 0; k < d; ++k) sq += e[i][k] * e[i][k];
    A[i][m] = 0.5 * sq;
  }
  // Gaussian elimination, partial pivot.
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t row = col + 1; row < m; ++row)
      if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
    if (std::abs(A[piv][col]) < 1e-14) {
      // Affinely dependent support; shrink by dropping the weakest direction.
      std::vector<Vec> reduced(support.begin(), support.end() - 1);
      return circumball(reduced, d);
    }
    for (size_t k = 0; k <= m; ++k) std::swap(A[col][k], A[piv][k]);
    for (size_t row = col + 1; row < m; ++row) {
      const double f = A[row][col] / A[col][col];
      for (size_t k = col; k <= m; ++k) A[row][k] -= f * A[col][k];
    }
  }
  double lambda[kMaxDim] = {};
  for (size_t row = m; row-- > 0;) {
    double v = A[row][m];
    for (size_t k = row + 1; k < m; ++k) v -= A[row][k] * lambda[k];
    lambda[row] = v / A[row][row];
  }
  Vec center = support[0];
  for (size_t i = 0; i < m; ++i)
    for (int k = 0; k < d; ++k) center[k] += lambda[i] * e[i][k];
  return Ball{center, dist(center, support[0])};
}

Ball welzl(std::vector<Vec>& pts, size_t n, std::vector<Vec>& support, int d) {
  if (n == 0 || support.size() == static_cast<size_t>(d) + 1) {
    return circumball(support, d);
  }
  const Vec p = pts[n - 1];
  Ball ball = welzl(pts, n - 1, support, d);
  if (dist(p, ball.center) <= ball.radius + kMebSlack) return ball;
  support.push_back(p);
  ball = welzl(pts, n - 1, support, d);
  support.pop_back();
  return ball;
}

}  // namespace

Ball min_enclosing_ball(std::span<const Vec> pts) {
  if (pts.empty()) throw std::invalid_argument("min_enclosing_ball: empty set");
  std::vector<Vec> work(pts.begin(), pts.end());
  std::vector<Vec> support;
  return welzl(work, work.size(), support, pts[0].dim());
}

bool balls_have_common_point(std::span<const Vec> centers, std::span<const double> radii,
                             double tol) {
  const size_t n = centers.size();
  if (n != radii.size() || n == 0)
    throw std::invalid_argument("balls_have_common_point: bad input");
  // Necessary pairwise condition; sufficient for n == 2.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (dist(centers[i], centers[j]) > radii[i] + radii[j] + tol) return false;
  if (n <= 2) return true;

  bool equal_radii = true;
  for (size_t i = 1; i < n; ++i)
    if (std::abs(radii[i] - radii[0]) > 1e-15) equal_radii = false;
  if (equal_radii) {
    return min_enclosing_ball(centers).radius <= radii[0] + kMebSlack;
  }

  // Fast path: some center inside every ball.
  for (size_t i = 0; i < n; ++i) {
    bool inside = true;
    for (size_t j = 0; j < n && inside; ++j)
      inside = dist(centers[i], centers[j]) <= radii[j] + tol;
    if (inside) return true;
  }

  // Projections onto the most violated ball, from the centroid. Converges
  // geometrically when the interior is nonempty; stalls above tol otherwise.
  const int d = centers[0].dim();
  Vec y = Vec::zero(d);
  for (size_t i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) y[k] += centers[i][k] / static_cast<double>(n);
  double worst = 0.0;
  for (int it = 0; it < 2000; ++it) {
    worst = 0.0;
    size_t arg = 0;
    for (size_t i = 0; i < n; ++i) {
      const double v = dist(y, centers[i]) - radii[i];
      if (v > worst) {
        worst = v;
        arg = i;
      }
    }
    if (worst <= tol) return true;
    const double dd = dist(y, centers[arg]);
    const double f = radii[arg] / dd;
    for (int k = 0; k < d; ++k) y[k] = centers[arg][k] + (y[k] - centers[arg][k]) * f;
  }
  return worst <= tol;
}

// ---------------------------------------------------------------------------
// ConnectionFamily
// ---------------------------------------------------------------------------

double ConnectionFamily::phi(int j, std::span<const Vec> xs, std::span<const Mark> marks) const {
  if (j < 1 || j > alpha) throw std::invalid_argument("phi: level out of range");
  if (xs.size() != static_cast<size_t>(j) + 1 || marks.size() != xs.size())
    throw std::invalid_argument("phi: need j+1 marked points");
  switch (kind) {
    case FamilyKind::VietorisRips:
      return diam(xs) <= 2.0 * r ? 1.0 : 0.0;
    case FamilyKind::Cech:
      return min_enclosing_ball(xs).radius <= r + 1e-12 ? 1.0 : 0.0;
    case FamilyKind::BooleanBalls: {
      std::vector<double> radii(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        if (marks[i].kind != MarkKind::Radius)
          throw std::invalid_argument("phi: BooleanBalls needs Radius marks");
        radii[i] = marks[i].value;
      }
      return balls_have_common_point(xs, radii) ? 1.0 : 0.0;
    }
    case FamilyKind::DiamKernel: {
      const auto& lv = levels[static_cast<size_t>(j) - 1];
      const double t = diam(xs);
      const double base = lv.c * std::exp(-lv.rate * t);
      if (j == alpha && t > D) return 0.0;
      return base;
    }
    case FamilyKind::Custom:
      return custom_phi(j, xs, marks);
  }
  throw std::logic_error("phi: bad family kind");
}

double ConnectionFamily::kappa(int j, std::span<const Vec> xs, std::span<const Mark> marks) const {
  if (j < 1 || j > alpha) throw std::invalid_argument("kappa: level out of range");
  if (xs.size() != static_cast<size_t>(j) + 1 || marks.size() != xs.size())
    throw std::invalid_argument("kappa: need j+1 marked points");
  double prod = 1.0;
  std::vector<Vec> sub_x;
  std::vector<Mark> sub_m;
  const unsigned full = (1u << (j + 1)) - 1;
  for (unsigned mask = 0; mask <= full; ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2) continue;
    sub_x.clear();
    sub_m.clear();
    for (int i = 0; i <= j; ++i) {
      if (mask & (1u << i)) {
        sub_x.push_back(xs[static_cast<size_t>(i)]);
        sub_m.push_back(marks[static_cast<size_t>(i)]);
      }
    }
    prod *= phi(size - 1, sub_x, sub_m);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double ConnectionFamily::natural_cutoff() const {
  switch (kind) {
    case FamilyKind::VietorisRips: return 2.0 * r;
    case FamilyKind::Cech: return 2.0 * r;
    case FamilyKind::BooleanBalls: return 2.0 * mark_law.b2_bound();
    case FamilyKind::DiamKernel: return D;
    case FamilyKind::Custom: return D;
  }
  return D;
}

bool ConnectionFamily::edge_cutoff_modifies() const {
  switch (kind) {
    case FamilyKind::VietorisRips:
    case FamilyKind::Cech:
    case FamilyKind::BooleanBalls:
      return false;
    case FamilyKind::DiamKernel:
      return alpha > 1;  // only the top level has the hard cutoff
    case FamilyKind::Custom:
      return true;
  }
  return true;
}

int ConnectionFamily::min_valid_q() const {
  // Indicator kinds vanish beyond the natural cutoff at every level; the
  // diameter kernel only at its top level.
  if (kind == FamilyKind::DiamKernel || kind == FamilyKind::Custom) return alpha - 1;
  return 0;
}

std::string ConnectionFamily::kind_name() const {
  switch (kind) {
    case FamilyKind::VietorisRips: return "vr";
    case FamilyKind::Cech: return "cech";
    case FamilyKind::BooleanBalls: return "boolean";
    case FamilyKind::DiamKernel: return "diam_kernel";
    case FamilyKind::Custom: return "custom";
  }
  return "?";
}

namespace {

void check_alpha(int alpha) {
  if (alpha < 1 || alpha + 1 > kMaxDim)
    throw std::invalid_argument("family: alpha out of range");
}

double resolve_D(double natural, std::optional<double> D, const char* what) {
  if (!D) return natural;
  if (*D < natural - 1e-12)
    throw std::invalid_argument(std::string(what) + ": declared D below the natural cutoff");
  return *D;
}

}  // namespace

ConnectionFamily make_vietoris_rips(int alpha, double r, std::optional<double> D) {
  check_alpha(alpha);
  if (!(r > 0.0)) throw std::invalid_argument("vr: r must be > 0");
  ConnectionFamily f;
  f.kind = FamilyKind::VietorisRips;
  f.alpha = alpha;
  f.r = r;
  f.D = resolve_D(2.0 * r, D, "vr");
  f.v1 = V1Decl{2.0 * r, 1.0, MarkInterval{}};
  return f;
}

ConnectionFamily make_cech(int alpha, double r, std::optional<double> D) {
  check_alpha(alpha);
  if (!(r > 0.0)) throw std::invalid_argument("cech: r must be > 0");
  ConnectionFamily f;
  f.kind = FamilyKind::Cech;
  f.alpha = alpha;
  f.r = r;
  f.D = resolve_D(2.0 * r, D, "cech");
  // diam <= r forces the enclosing-ball radius <= r in every dimension.
  f.v1 = V1Decl{r, 1.0, MarkInterval{}};
  return f;
}

ConnectionFamily make_boolean_balls(int alpha, const MarkLaw& law, std::optional<double> D) {
  check_alpha(alpha);
  if (law.kind == MarkLaw::Kind::Unit)
    throw std::invalid_argument("boolean: needs a radius mark law");
  const double r0 = law.b1_radius();
  if (!(r0 > 0.0)) throw std::invalid_argument("boolean: (B1) radius must be > 0");
  ConnectionFamily f;
  f.kind = FamilyKind::BooleanBalls;
  f.alpha = alpha;
  f.mark_law = law;
  f.D = resolve_D(2.0 * law.b2_bound(), D, "boolean");
  f.v1 = V1Decl{r0, 1.0, MarkInterval{r0, law.b2_bound()}};
  return f;
}

ConnectionFamily make_diam_kernel(std::vector<DiamLevel> levels, double D) {
  const int alpha = static_cast<int>(levels.size());
  check_alpha(alpha);
  if (!(D > 0.0)) throw std::invalid_argument("diam_kernel: D must be > 0");
  for (const auto& lv : levels)
    if (!(lv.c > 0.0 && lv.c <= 1.0 && lv.rate >= 0.0))
      throw std::invalid_argument("diam_kernel: need 0 < c <= 1 and rate >= 0");
  ConnectionFamily f;
  f.kind = FamilyKind::DiamKernel;
  f.alpha = alpha;
  f.levels = std::move(levels);
  f.D = D;
  // kappa_alpha >= prod_j phi_j(D)^C(alpha+1, j+1) on tuples of diameter <= D.
  double eps = 1.0;
  for (int j = 1; j <= alpha; ++j) {
    double binom = 1.0;
    for (int i = 0; i < j + 1; ++i) binom = binom * (alpha + 1 - i) / (i + 1);
    const auto& lv = f.levels[static_cast<size_t>(j) - 1];
    eps *= std::pow(lv.c * std::exp(-lv.rate * D), binom);
  }
  f.v1 = V1Decl{D, eps, MarkInterval{}};
  return f;
}

ConnectionFamily make_custom(
    int alpha, double D, V1Decl v1,
    std::function<double(int, std::span<const Vec>, std::span<const Mark>)> phi) {
  check_alpha(alpha);
  if (!(D > 0.0)) throw std::invalid_argument("custom: D must be > 0");
  ConnectionFamily f;
  f.kind = FamilyKind::Custom;
  f.alpha = alpha;
  f.D = D;
  f.v1 = v1;
  f.custom_phi = std::move(phi);
  return f;
}

// ---------------------------------------------------------------------------
// verify_v1_v2
// ---------------------------------------------------------------------------

namespace {

Mark sample_mark_in(const MarkLaw& law, const MarkInterval& A, CounterStream& stream) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Mark m = law.sample(stream);
    if (A.contains(m)) return m;
  }
  throw std::runtime_error("verify_v1_v2: mark set A has (near-)zero mass under Theta");
}

Vec random_in_ball(int d, double radius, const Vec& center, CounterStream& stream) {
  // Rejection from the bounding box; fine for d <= 8.
  while (true) {
    Vec x(d);
    double sq = 0.0;
    for (int k = 0; k < d; ++k) {
      x[k] = (2.0 * stream.next_unit() - 1.0) * radius;
      sq += x[k] * x[k];
    }
    if (sq <= radius * radius) {
      for (int k = 0; k < d; ++k) x[k] += center[k];
      return x;
    }
  }
}

}  // namespace

V1V2Report verify_v1_v2(const ConnectionFamily& family, int q, int d, std::int64_t sample_budget,
                        std::uint64_t seed) {
  if (sample_budget < 1) throw std::invalid_argument("verify_v1_v2: budget must be >= 1");
  if (q < family.min_valid_q() || q >= family.alpha)
    throw std::invalid_argument("verify_v1_v2: q out of the family's declared range");
  V1V2Report report;
  CounterStream stream(derive_stream_key(seed, kTagVerify, static_cast<std::uint64_t>(q), 0));
  const int tuple = q + 2;
  const double delta = family.v1.delta;
  const double eps = family.v1.epsilon;
  std::vector<Vec> xs(static_cast<size_t>(tuple), Vec::zero(d));
  std::vector<Mark> marks(static_cast<size_t>(tuple));
  const std::int64_t half = sample_budget / 2;

  // Stratum 1: diam <= delta, marks in A; expect kappa >= eps.
  for (std::int64_t it = 0; it < half; ++it) {
    Vec center(d);
    for (int k = 0; k < d; ++k) center[k] = (2.0 * stream.next_unit() - 1.0) * 10.0;
    for (int i = 0; i < tuple; ++i) {
      xs[static_cast<size_t>(i)] = random_in_ball(d, 0.5 * delta, center, stream);
      marks[static_cast<size_t>(i)] = sample_mark_in(family.mark_law, family.v1.marks, stream);
    }
    ++report.v1_checked;
    const double kap = family.kappa(q + 1, xs, marks);
    if (kap < eps - 1e-12) {
      report.v1_ok = false;
      if (report.counterexamples.size() < 8)
        report.counterexamples.push_back(BoundViolation{true, xs, marks, kap});
    }
  }

  // Stratum 2: diam > D; expect kappa == 0.
  for (std::int64_t it = half; it < sample_budget; ++it) {
    Vec center(d);
    for (int k = 0; k < d; ++k) center[k] = (2.0 * stream.next_unit() - 1.0) * 10.0;
    const double spread = family.D * (1.001 + stream.next_unit());
    for (int i = 0; i < tuple; ++i) {
      xs[static_cast<size_t>(i)] = random_in_ball(d, 0.45 * family.D, center, stream);
      marks[static_cast<size_t>(i)] = family.mark_law.sample(stream);
    }
    // Pull two points apart along the first axis so the diameter exceeds D.
    xs[0][0] = center[0] - 0.5 * spread;
    xs[1][0] = center[0] + 0.5 * spread;
    for (int k = 1; k < d; ++k) {
      xs[0][k] = center[k];
      xs[1][k] = center[k];
    }
    ++report.v2_checked;
    const double kap = family.kappa(q + 1, xs, marks);
    if (kap != 0.0) {
      report.v2_ok = false;
      if (report.counterexamples.size() < 8)
        report.counterexamples.push_back(BoundViolation{false, xs, marks, kap});
    }
  }
  return report;
}

}  // namespace rcm
