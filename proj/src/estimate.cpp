#include "rcm/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rcm/parallel.hpp"

namespace rcm {

namespace {

// All (r, q) indicators of one built complex, sharing one BFS per q level.
std::vector<std::uint8_t> event_bits(const Complex& cx, const std::vector<int>& qs,
                                     const std::vector<double>& rs, double D) {
  std::vector<std::uint8_t> bits(rs.size() * qs.size(), 0);
  for (size_t qi = 0; qi < qs.size(); ++qi) {
    const int q = qs[qi];
    if (cx.origin_vertex < 0) continue;
    const QGraph g = up_graph(cx, q);
    const std::uint32_t origin = static_cast<std::uint32_t>(cx.origin_vertex);
    std::vector<std::uint8_t> seen(g.vertices.size(), 0);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
      if (!g.vertices[i].contains(origin)) continue;
      if (cx.simplex_diam(g.vertices[i]) <= D) {
        seen[i] = 1;
        queue.push_back(i);
      }
    }
    double furthest = -1.0;
    while (!queue.empty()) {
      const std::uint32_t cur = queue.front();
      queue.pop_front();
      const Simplex& sim = g.vertices[cur];
      for (int k = 0; k < sim.n; ++k)
        furthest = std::max(furthest, norm(cx.verts[sim[k]].pos));
      for (const std::uint32_t nb : g.adjacency[cur])
        if (!seen[nb]) {
          seen[nb] = 1;
          queue.push_back(nb);
        }
    }
    for (size_t ri = 0; ri < rs.size(); ++ri)
      bits[ri * qs.size() + qi] = furthest > rs[ri] ? 1 : 0;
  }
  return bits;
}

}  // namespace

CoupledCell coupled_indicators(int d, const ConnectionFamily& family, const std::vector<int>& qs,
                               const std::vector<double>& rs, double beta, std::int64_t n,
                               std::uint64_t master_seed, std::uint64_t cell_index, int threads) {
  if (n < 1) throw std::invalid_argument("coupled_indicators: n must be >= 1");
  if (rs.empty() || qs.empty()) throw std::invalid_argument("coupled_indicators: empty grid");
  for (const int q : qs)
    if (q < 0 || q >= family.alpha)
      throw std::invalid_argument("coupled_indicators: q out of range");
  const double rmax = *std::max_element(rs.begin(), rs.end());
  const CubeGrid grid(d, family.D);
  const Window window = window_for_radius(rmax, grid, family.D);
  CoupledCell cell;
  cell.beta = beta;
  cell.rs = rs;
  cell.qs = qs;
  cell.n = n;
  cell.bits.assign(static_cast<size_t>(n), {});
  parallel_for(n, threads, [&](std::int64_t k) {
    const std::uint64_t seed =
        derive_u64(master_seed, kTagSample, cell_index, static_cast<std::uint64_t>(k));
    const Realization rz = sample_realization(seed, beta, window, family.mark_law, true);
    const Complex cx = build_complex(rz, family);
    cell.bits[static_cast<size_t>(k)] = event_bits(cx, qs, rs, family.D);
  });
  return cell;
}

SweepResult theta_sweep(int d, const ConnectionFamily& family, int q,
                        const std::vector<double>& betas, double r, std::int64_t n,
                        std::uint64_t master_seed, int threads) {
  if (!(r > 0.0)) throw std::invalid_argument("theta_sweep: r must be > 0");
  SweepResult sweep;
  sweep.d = d;
  sweep.master_seed = master_seed;
  for (size_t bi = 0; bi < betas.size(); ++bi) {
    const CoupledCell cell =
        coupled_indicators(d, family, {q}, {r}, betas[bi], n, master_seed, bi, threads);
    ThetaCell out;
    out.beta = betas[bi];
    out.r = r;
    out.q = q;
    out.n = n;
    out.successes = cell.count(0, 0);
    out.theta = static_cast<double>(out.successes) / static_cast<double>(n);
    out.ci = wilson_interval(out.successes, n);
    sweep.cells.push_back(out);
  }
  return sweep;
}

namespace {

struct CurvePair {
  std::vector<double> betas, theta_small, theta_large;
};

double interp_bisection(const CurvePair& c, double tau) {
  for (size_t i = 0; i < c.betas.size(); ++i) {
    if (c.theta_large[i] >= tau) {
      if (i == 0) return c.betas[0];
      const double t0 = c.theta_large[i - 1], t1 = c.theta_large[i];
      if (t1 <= t0) return c.betas[i];
      return c.betas[i - 1] + (tau - t0) / (t1 - t0) * (c.betas[i] - c.betas[i - 1]);
    }
  }
  throw NoCrossingError("no crossing in bracket: theta_{r_large} stays below tau");
}

double interp_ratio_crossing(const CurvePair& c, double rho_star) {
  // ratio defined where theta_small > 0; rises with beta
  double prev_beta = 0.0, prev_ratio = -1.0;
  bool have_prev = false;
  for (size_t i = 0; i < c.betas.size(); ++i) {
    if (c.theta_small[i] <= 0.0) continue;
    const double ratio = c.theta_large[i] / c.theta_small[i];
    if (ratio >= rho_star) {
      if (!have_prev || prev_ratio <= 0.0) {
        if (!have_prev) return c.betas[i];
        // previous ratio was zero: interpolate linearly in the ratio
        return prev_beta + rho_star / ratio * (c.betas[i] - prev_beta);
      }
      const double la = std::log(prev_ratio), lb = std::log(ratio), lt = std::log(rho_star);
      if (lb <= la) return c.betas[i];
      return prev_beta + (lt - la) / (lb - la) * (c.betas[i] - prev_beta);
    }
    prev_beta = c.betas[i];
    prev_ratio = ratio;
    have_prev = true;
  }
  throw NoCrossingError("no crossing in bracket: theta ratio stays below the crossing level");
}

}  // namespace

CriticalEstimate estimate_beta_c(int d, const ConnectionFamily& family, int q, double r_small,
                                 double r_large, double beta_lo, double beta_hi, int grid_steps,
                                 std::int64_t n, std::uint64_t master_seed, int threads, double tau,
                                 int bootstrap) {
  if (!(r_small < r_large)) throw std::invalid_argument("estimate_beta_c: need r_small < r_large");
  if (!(beta_lo < beta_hi) || grid_steps < 2)
    throw std::invalid_argument("estimate_beta_c: bad bracket");
  CriticalEstimate est;
  est.q = q;
  est.r_small = r_small;
  est.r_large = r_large;
  est.tau = tau;

  // Joint per-cell counts of the coupled pair (large implies small).
  std::vector<std::int64_t> n11(static_cast<size_t>(grid_steps)), n10(n11.size());
  CurvePair curve;
  for (int bi = 0; bi < grid_steps; ++bi) {
    const double beta =
        beta_lo + (beta_hi - beta_lo) * static_cast<double>(bi) / (grid_steps - 1);
    const CoupledCell cell = coupled_indicators(d, family, {q}, {r_small, r_large}, beta, n,
                                                master_seed, static_cast<std::uint64_t>(bi),
                                                threads);
    const std::int64_t s_small = cell.count(0, 0);
    const std::int64_t s_large = cell.count(1, 0);
    n11[static_cast<size_t>(bi)] = s_large;
    n10[static_cast<size_t>(bi)] = s_small - s_large;
    curve.betas.push_back(beta);
    curve.theta_small.push_back(static_cast<double>(s_small) / static_cast<double>(n));
    curve.theta_large.push_back(static_cast<double>(s_large) / static_cast<double>(n));

    BetaCGridCell gc;
    gc.beta = beta;
    gc.small = ThetaCell{beta, r_small, q, n, s_small, curve.theta_small.back(),
                         wilson_interval(s_small, n)};
    gc.large = ThetaCell{beta, r_large, q, n, s_large, curve.theta_large.back(),
                         wilson_interval(s_large, n)};
    est.grid.push_back(gc);
  }

  const double rho_star = std::pow(tau, (r_large - r_small) / r_large);
  est.bisection = interp_bisection(curve, tau);
  est.crossing = interp_ratio_crossing(curve, rho_star);

  // Bootstrap both estimators by resampling the per-cell joint counts.
  std::vector<double> boot_bis, boot_cross;
  CounterStream stream(derive_stream_key(master_seed, kTagBootstrap, 0, 0));
  for (int b = 0; b < bootstrap; ++b) {
    CurvePair rc;
    rc.betas = curve.betas;
    for (int bi = 0; bi < grid_steps; ++bi) {
      // multinomial (n11, n10, n00) via sequential binomials
      const std::int64_t k11 = binomial_resample(n, n11[static_cast<size_t>(bi)], stream);
      const std::int64_t rest = n - k11;
      const std::int64_t pool = n - n11[static_cast<size_t>(bi)];
      std::int64_t k10 = 0;
      if (pool > 0 && n10[static_cast<size_t>(bi)] > 0) {
        const double p10 = static_cast<double>(n10[static_cast<size_t>(bi)]) /
                           static_cast<double>(pool);
        for (std::int64_t i = 0; i < rest; ++i)
          if (stream.next_unit() < p10) ++k10;
      }
      rc.theta_large.push_back(static_cast<double>(k11) / static_cast<double>(n));
      rc.theta_small.push_back(static_cast<double>(k11 + k10) / static_cast<double>(n));
    }
    try {
      boot_bis.push_back(interp_bisection(rc, tau));
    } catch (const NoCrossingError&) {
      boot_bis.push_back(beta_hi);
    }
    try {
      boot_cross.push_back(interp_ratio_crossing(rc, rho_star));
    } catch (const NoCrossingError&) {
      boot_cross.push_back(beta_hi);
    }
  }
  est.bisection_ci = percentile_interval(boot_bis);
  est.crossing_ci = percentile_interval(boot_cross);
  return est;
}

DecayFit decay_fit(int d, const ConnectionFamily& family, int q, double beta,
                   const std::vector<double>& r_grid, std::int64_t n, std::uint64_t master_seed,
                   int threads) {
  if (r_grid.size() < 2) throw std::invalid_argument("decay_fit: need at least two radii");
  for (size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] < family.D)
      throw std::invalid_argument("decay_fit: radii must be >= D");
    if (i > 0 && r_grid[i] <= r_grid[i - 1])
      throw std::invalid_argument("decay_fit: radii must be increasing");
  }
  const CoupledCell cell =
      coupled_indicators(d, family, {q}, r_grid, beta, n, master_seed, 0, threads);
  DecayFit fit;
  std::vector<double> xs, ys, ws;
  for (size_t ri = 0; ri < r_grid.size(); ++ri) {
    DecayPoint pt;
    pt.r = r_grid[ri];
    pt.n = n;
    pt.successes = cell.count(ri, 0);
    pt.theta = static_cast<double>(pt.successes) / static_cast<double>(n);
    pt.ci = wilson_interval(pt.successes, n);
    pt.used = pt.successes > 0;
    if (pt.used) {
      // delta-method weights 1/Var(log theta) = n theta / (1 - theta)
      const double t = pt.successes == n ? (static_cast<double>(n) - 0.5) / static_cast<double>(n)
                                         : pt.theta;
      xs.push_back(pt.r);
      ys.push_back(std::log(pt.theta));
      ws.push_back(static_cast<double>(n) * t / (1.0 - t));
    }
    fit.points.push_back(pt);
  }
  if (xs.size() < 2) return fit;  // degenerate: no regression
  const LineFit line = weighted_least_squares(xs, ys, ws);
  fit.degenerate = false;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;
  return fit;
}

NearCriticalResult near_critical_slope(int d, const ConnectionFamily& family, int q,
                                       const std::vector<double>& beta_grid, double beta_c_hat,
                                       double R_proxy, std::int64_t n, std::uint64_t master_seed,
                                       int threads) {
  if (beta_grid.empty()) throw std::invalid_argument("near_critical_slope: empty grid");
  for (const double beta : beta_grid)
    if (beta < beta_c_hat - 1e-12)
      throw std::invalid_argument("near_critical_slope: grid below beta_c rejected");
  NearCriticalResult result;
  result.beta_c_hat = beta_c_hat;
  result.R_proxy = R_proxy;
  double min_ratio = std::numeric_limits<double>::infinity();
  double sxy = 0.0, sxx = 0.0;
  bool any = false;
  for (size_t bi = 0; bi < beta_grid.size(); ++bi) {
    const CoupledCell cell = coupled_indicators(d, family, {q}, {R_proxy}, beta_grid[bi], n,
                                                master_seed, bi, threads);
    SlopePoint pt;
    pt.beta = beta_grid[bi];
    pt.excess = beta_grid[bi] - beta_c_hat;
    const std::int64_t s = cell.count(0, 0);
    pt.theta = static_cast<double>(s) / static_cast<double>(n);
    pt.ci = wilson_interval(s, n);
    pt.se = binomial_se(s, n);
    pt.at_critical = pt.excess <= 1e-12;
    result.points.push_back(pt);
    if (pt.at_critical) continue;  // lower bound 0, trivially satisfied
    any = true;
    min_ratio = std::min(min_ratio, pt.theta / pt.excess);
    sxy += pt.excess * pt.theta;
    sxx += pt.excess * pt.excess;
  }
  if (!any) return result;  // no usable points: verdict stays false
  result.c_hat = min_ratio;
  result.ls_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  bool ok = result.c_hat > 0.0;
  for (const auto& pt : result.points) {
    if (pt.at_critical) continue;
    if (pt.theta < result.c_hat * pt.excess - 2.0 * pt.se) ok = false;
  }
  result.verdict = ok;
  return result;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::ordered_json sweep_to_json(const SweepResult& sweep) {
  nlohmann::ordered_json j;
  j["d"] = sweep.d;
  j["master_seed"] = sweep.master_seed;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : sweep.cells) {
    nlohmann::ordered_json e;
    e["beta"] = c.beta;
    e["r"] = c.r;
    e["q"] = c.q;
    e["n"] = c.n;
    e["theta_hat"] = c.theta;
    e["ci_lo"] = c.ci.lo;
    e["ci_hi"] = c.ci.hi;
    cells.push_back(e);
  }
  j["cells"] = cells;
  return j;
}

nlohmann::ordered_json betac_to_json(const CriticalEstimate& est) {
  nlohmann::ordered_json j;
  j["q"] = est.q;
  j["r_small"] = est.r_small;
  j["r_large"] = est.r_large;
  j["tau"] = est.tau;
  j["crossing"] = est.crossing;
  j["crossing_ci"] = {est.crossing_ci.lo, est.crossing_ci.hi};
  j["bisection"] = est.bisection;
  j["bisection_ci"] = {est.bisection_ci.lo, est.bisection_ci.hi};
  auto grid = nlohmann::ordered_json::array();
  for (const auto& cell : est.grid) {
    nlohmann::ordered_json e;
    e["beta"] = cell.beta;
    e["theta_small"] = cell.small.theta;
    e["theta_small_ci"] = {cell.small.ci.lo, cell.small.ci.hi};
    e["theta_large"] = cell.large.theta;
    e["theta_large_ci"] = {cell.large.ci.lo, cell.large.ci.hi};
    grid.push_back(e);
  }
  j["grid"] = grid;
  return j;
}

nlohmann::ordered_json decay_to_json(const DecayFit& fit, double beta) {
  nlohmann::ordered_json j;
  j["beta"] = beta;
  j["degenerate"] = fit.degenerate;
  j["slope"] = fit.slope;
  j["c"] = -fit.slope;
  j["intercept"] = fit.intercept;
  j["r2"] = fit.r2;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : fit.points) {
    nlohmann::ordered_json e;
    e["r"] = p.r;
    e["n"] = p.n;
    e["theta_hat"] = p.theta;
    e["ci_lo"] = p.ci.lo;
    e["ci_hi"] = p.ci.hi;
    e["used"] = p.used;
    pts.push_back(e);
  }
  j["points"] = pts;
  return j;
}

nlohmann::ordered_json slope_to_json(const NearCriticalResult& result) {
  nlohmann::ordered_json j;
  j["beta_c_hat"] = result.beta_c_hat;
  j["R_proxy"] = result.R_proxy;
  j["c_hat"] = result.c_hat;
  j["ls_slope"] = result.ls_slope;
  j["verdict"] = result.verdict;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : result.points) {
    nlohmann::ordered_json e;
    e["beta"] = p.beta;
    e["excess"] = p.excess;
    e["theta_hat"] = p.theta;
    e["ci_lo"] = p.ci.lo;
    e["ci_hi"] = p.ci.hi;
    e["at_critical"] = p.at_critical;
    pts.push_back(e);
  }
  j["points"] = pts;
  return j;
}

}  // namespace rcm
