#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rcm/qgraph.hpp"
#include "rcm/stats.hpp"

#include "json.hpp"

namespace rcm {

// Raised when a bracket contains no estimator crossing (e.g. phi_1 == 0).
struct NoCrossingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ThetaCell {
  double beta = 0.0;
  double r = 0.0;
  int q = 0;
  std::int64_t n = 0;
  std::int64_t successes = 0;
  double theta = 0.0;
  Interval ci;
};

struct SweepResult {
  int d = 2;
  std::uint64_t master_seed = 0;
  std::vector<ThetaCell> cells;
};

// theta_r(beta) estimates. Cells share nothing across betas (fresh seeds per
// (beta index, replication)); within one beta the realizations are shared
// across all (r, q) pairs, giving the coupled monotonicities sample-exactly.
SweepResult theta_sweep(int d, const ConnectionFamily& family, int q,
                        const std::vector<double>& betas, double r, std::int64_t n,
                        std::uint64_t master_seed, int threads = 1);

// Shared-realization evaluation over an (r, q) grid at one beta: bit k of
// sample i corresponds to (rs[k / qs.size()], qs[k % qs.size()]).
struct CoupledCell {
  double beta = 0.0;
  std::vector<double> rs;
  std::vector<int> qs;
  std::int64_t n = 0;
  std::vector<std::vector<std::uint8_t>> bits;  // [sample][r*qs+q]
  std::int64_t count(size_t ri, size_t qi) const {
    std::int64_t c = 0;
    for (const auto& row : bits) c += row[ri * qs.size() + qi];
    return c;
  }
};

CoupledCell coupled_indicators(int d, const ConnectionFamily& family, const std::vector<int>& qs,
                               const std::vector<double>& rs, double beta, std::int64_t n,
                               std::uint64_t master_seed, std::uint64_t cell_index,
                               int threads = 1);

struct BetaCGridCell {
  double beta = 0.0;
  ThetaCell small, large;
};

struct CriticalEstimate {
  int q = 0;
  double r_small = 0.0, r_large = 0.0;
  double tau = 0.05;
  double crossing = 0.0;
  Interval crossing_ci;
  double bisection = 0.0;
  Interval bisection_ci;
  std::vector<BetaCGridCell> grid;
};

// Two heuristic estimators of beta_c^(q) from theta curves at two radii on a
// shared-realization beta grid:
//  - bisection: smallest beta with theta_{r_large} >= tau (linear
//    interpolation between grid cells);
//  - curve-crossing: beta where theta_{r_large}/theta_{r_small} crosses
//    tau^{(r_large-r_small)/r_large} (log-interpolated), the ratio level
//    consistent with the bisection level under a pure exponential tail.
// Bootstrap CIs resample the per-cell coupled indicator counts.
CriticalEstimate estimate_beta_c(int d, const ConnectionFamily& family, int q, double r_small,
                                 double r_large, double beta_lo, double beta_hi, int grid_steps,
                                 std::int64_t n, std::uint64_t master_seed, int threads = 1,
                                 double tau = 0.05, int bootstrap = 1000);

struct DecayPoint {
  double r = 0.0;
  std::int64_t n = 0;
  std::int64_t successes = 0;
  double theta = 0.0;
  Interval ci;
  bool used = false;  // zero cells are excluded from the regression
};

struct DecayFit {
  bool degenerate = true;
  double slope = 0.0;      // reported as -c(beta)
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<DecayPoint> points;
};

// Weighted least squares of log theta_r on r over shared realizations.
DecayFit decay_fit(int d, const ConnectionFamily& family, int q, double beta,
                   const std::vector<double>& r_grid, std::int64_t n, std::uint64_t master_seed,
                   int threads = 1);

struct SlopePoint {
  double beta = 0.0;
  double excess = 0.0;  // beta - beta_c_hat
  double theta = 0.0;
  Interval ci;
  double se = 0.0;
  bool at_critical = false;  // contributes the trivial bound 0
};

struct NearCriticalResult {
  double beta_c_hat = 0.0;
  double R_proxy = 0.0;
  double c_hat = 0.0;     // steepest through-origin line below all points
  double ls_slope = 0.0;  // least-squares through origin, for reference
  bool verdict = false;
  std::vector<SlopePoint> points;
};

// Desk-scale check of the linear lower bound theta_inf >= c (beta - beta_c):
// theta_{R_proxy} is the theta_inf proxy; verdict is true when a positive
// c_hat keeps theta >= c_hat*(beta-beta_c) - 2*SE across the grid.
NearCriticalResult near_critical_slope(int d, const ConnectionFamily& family, int q,
                                       const std::vector<double>& beta_grid, double beta_c_hat,
                                       double R_proxy, std::int64_t n, std::uint64_t master_seed,
                                       int threads = 1);

nlohmann::ordered_json sweep_to_json(const SweepResult& sweep);
nlohmann::ordered_json betac_to_json(const CriticalEstimate& est);
nlohmann::ordered_json decay_to_json(const DecayFit& fit, double beta);
nlohmann::ordered_json slope_to_json(const NearCriticalResult& result);

}  // namespace rcm
