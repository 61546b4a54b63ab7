#pragma once

#include <cstdint>
#include <vector>

#include "rcm/qgraph.hpp"
#include "rcm/stats.hpp"

#include "json.hpp"

namespace rcm {

// One reveal step: the cube chosen and the frontier bookkeeping after the
// rebuild.
struct ExplorationStep {
  std::int64_t cube = 0;
  std::int64_t frontier_simplices = 0;   // |C_m|
  std::int64_t crossing_components = 0;  // sphere-touching components
};

struct ExplorationTrace {
  int q = 0;
  double r = 0.0;
  double s = 0.0;
  std::vector<std::int64_t> t0;        // unconditional first reveal
  std::vector<ExplorationStep> steps;  // later reveals, in order
  std::vector<std::int64_t> revealed;  // all revealed cubes, reveal order
  bool decision = false;               // B_r evaluated on the revealed region
  Window revealed_window;
};

// The cube-revealment algorithm deciding B_r. T_0 is every cube within D of
// the sphere of radius s; afterwards the eligible cube with the smallest grid
// index is revealed, where eligible means within distance D of a q-simplex
// (diam <= D) whose component in G_q(Delta_{W_m}) touches the sphere
// (inclusive comparisons on both sides). The frontier complex is Delta
// (origin excluded); the final decision is B_r on Delta^0 over the revealed
// region, which agrees with B_r on the full window whenever s >= D.
ExplorationTrace explore(const Realization& rz_with_origin, const ConnectionFamily& family, int q,
                         double r, double s);

struct ProbabilityEstimate {
  double value = 0.0;
  Interval ci;
  std::int64_t successes = 0;
  std::int64_t n = 0;
};

// delta_i(s): probability that cube i is revealed. Estimated over n
// independent realizations with per-replication derived seeds.
ProbabilityEstimate revealment(int d, double beta, const ConnectionFamily& family, int q, double r,
                               double s, std::int64_t cube, std::int64_t n,
                               std::uint64_t master_seed, int threads = 1);

// zeta_i: probability that resampling cube i flips the B_r indicator.
ProbabilityEstimate influence(int d, double beta, const ConnectionFamily& family, int q, double r,
                              std::int64_t cube, std::int64_t n, std::uint64_t master_seed,
                              int threads = 1);

struct OsssCubeTerm {
  std::int64_t cube = 0;
  ProbabilityEstimate delta;
  ProbabilityEstimate zeta;
};

// Both sides of theta_r(1-theta_r) <= sum_i delta_i(s) * zeta_i, all terms
// estimated on the same n replications (theta from the direct event, delta
// from the exploration, zeta from per-cube resampling).
struct OsssCheck {
  double beta = 0.0;
  double r = 0.0, s = 0.0;
  int q = 0;
  std::int64_t n = 0;
  ProbabilityEstimate theta;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;     // rhs - lhs
  double se_margin = 0.0;  // propagated
  std::int64_t decision_mismatches = 0;  // explore vs direct event (0 when s >= D)
  std::vector<OsssCubeTerm> cubes;
};

OsssCheck osss_check(int d, double beta, const ConnectionFamily& family, int q, double r, double s,
                     std::int64_t n, std::uint64_t master_seed, int threads = 1);

nlohmann::ordered_json trace_to_json(const ExplorationTrace& trace);
nlohmann::ordered_json osss_to_json(const OsssCheck& check);

}  // namespace rcm
