#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rcm/rng.hpp"

namespace rcm {

// 95% Wilson score interval; bounded-support safe.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline Interval wilson_interval(std::int64_t successes, std::int64_t n, double z = 1.959964) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be >= 1");
  const double phat = static_cast<double>(successes) / static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return Interval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline double binomial_se(std::int64_t successes, std::int64_t n) {
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  return std::sqrt(std::max(p * (1.0 - p), 1.0 / (4.0 * static_cast<double>(n))) /
                   static_cast<double>(n));
}

// Weighted least squares of y on x. r2 is the weighted coefficient of
// determination.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                      const std::vector<double>& w) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n || w.size() != n)
    throw std::invalid_argument("weighted_least_squares: need >= 2 points");
  double sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("weighted_least_squares: degenerate x");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += w[i] * (y[i] - pred) * (y[i] - pred);
    ss_tot += w[i] * (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

// Percentile bootstrap over a statistic of binomial counts: resamples
// Binomial(n, k/n) deterministically from the seeded stream.
inline std::int64_t binomial_resample(std::int64_t n, std::int64_t k, CounterStream& stream) {
  // n is a few thousand here; direct Bernoulli summation keeps it exact.
  const double p = static_cast<double>(k) / static_cast<double>(n);
  std::int64_t out = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (stream.next_unit() < p) ++out;
  return out;
}

inline Interval percentile_interval(std::vector<double> values, double level = 0.95) {
  if (values.empty()) throw std::invalid_argument("percentile_interval: empty");
  std::sort(values.begin(), values.end());
  const double a = (1.0 - level) / 2.0;
  const auto pick = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const size_t i = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= values.size()) return values.back();
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
  };
  return Interval{pick(a), pick(1.0 - a)};
}

// Upper chi-square quantile via the Wilson-Hilferty cube approximation; used
// only as a test gate at extreme significance levels.
inline double chi_square_quantile(double p_upper_tail, int dof) {
  // z for the upper tail
  const double p = 1.0 - p_upper_tail;
  // Acklam-style rational approximation of the normal quantile.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double e[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  double z;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  } else if (p <= 0.97575) {
    const double q = p - 0.5, r = q * q;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  }
  const double k = static_cast<double>(dof);
  const double h = 2.0 / (9.0 * k);
  const double cube = 1.0 - h + z * std::sqrt(h);
  return k * cube * cube * cube;
}

}  // namespace rcm
