#include "rcm/explore.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "rcm/parallel.hpp"

namespace rcm {

namespace {

// C_m and its component bookkeeping: a component touches the sphere when it
// has a vertex-radius <= s and a vertex-radius >= s among its simplices (a
// vertex exactly on the sphere counts as both sides).
struct Frontier {
  std::vector<Simplex> members;  // C_m
  std::int64_t crossing_components = 0;
};

Frontier frontier_of(const Complex& cx, const QGraph& g, double s, double D) {
  Frontier out;
  std::unordered_set<std::uint32_t> roots_in, roots_out;
  std::vector<double> vert_norm(cx.verts.size());
  for (size_t i = 0; i < cx.verts.size(); ++i) vert_norm[i] = norm(cx.verts[i].pos);
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
    const Simplex& sim = g.vertices[i];
    bool inside = false, outside = false;
    for (int k = 0; k < sim.n; ++k) {
      const double rad = vert_norm[sim[k]];
      if (rad <= s) inside = true;
      if (rad >= s) outside = true;
    }
    if (inside) roots_in.insert(g.component[i]);
    if (outside) roots_out.insert(g.component[i]);
  }
  std::unordered_set<std::uint32_t> crossing;
  for (const std::uint32_t root : roots_in)
    if (roots_out.count(root)) crossing.insert(root);
  out.crossing_components = static_cast<std::int64_t>(crossing.size());
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
    if (!crossing.count(g.component[i])) continue;
    if (cx.simplex_diam(g.vertices[i]) <= D) out.members.push_back(g.vertices[i]);
  }
  return out;
}

}  // namespace

ExplorationTrace explore(const Realization& rz, const ConnectionFamily& family, int q, double r,
                         double s) {
  if (!(s > 0.0) || s > r) throw std::invalid_argument("explore: need 0 < s <= r");
  if (!rz.with_origin) throw std::invalid_argument("explore: realization must carry the origin");
  const CubeGrid& grid = rz.window.grid;
  if (std::abs(grid.t - family.D) > 1e-12)
    throw std::invalid_argument("explore: grid half edge must equal the family's D");
  const Window full = window_for_radius(r, grid, family.D);
  if (!rz.window.contains_window(full))
    throw std::invalid_argument("explore: realization window does not cover W^(r)");

  const double D = family.D;
  ExplorationTrace trace;
  trace.q = q;
  trace.r = r;
  trace.s = s;

  // Frontier complexes exclude the origin.
  const Realization bare = without_origin(rz);

  // (I) T_0: cubes within D of the sphere of radius s.
  std::set<std::int64_t> revealed;
  for (const std::int64_t cube : full.cubes)
    if (grid.dist_cube_to_sphere(cube, s) <= D) revealed.insert(cube);
  trace.t0.assign(revealed.begin(), revealed.end());
  trace.revealed = trace.t0;

  const std::unordered_set<std::int64_t> in_full(full.cubes.begin(), full.cubes.end());

  // (II) grow: reveal the smallest-index unrevealed cube within D of a
  // frontier simplex, until none is eligible.
  while (true) {
    Window wm;
    wm.grid = grid;
    wm.cubes.assign(revealed.begin(), revealed.end());
    const Realization part = restrict_realization(bare, wm);
    const Complex cx = build_complex(part, family);
    const QGraph g = up_graph(cx, q);
    const Frontier frontier = frontier_of(cx, g, s, D);

    std::set<std::int64_t> eligible;
    for (const Simplex& sim : frontier.members) {
      for (int k = 0; k < sim.n; ++k) {
        const Vec& x = cx.verts[sim[k]].pos;
        for (const std::int64_t nb : grid.neighbor_cubes(cx.verts[sim[k]].cube)) {
          if (revealed.count(nb) || !in_full.count(nb)) continue;
          if (grid.dist_point_to_cube(x, nb) <= D) eligible.insert(nb);
        }
      }
    }
    if (eligible.empty()) break;
    const std::int64_t chosen = *eligible.begin();
    revealed.insert(chosen);
    trace.revealed.push_back(chosen);
    trace.steps.push_back(ExplorationStep{
        chosen, static_cast<std::int64_t>(frontier.members.size()), frontier.crossing_components});
  }

  trace.revealed_window.grid = grid;
  trace.revealed_window.cubes.assign(revealed.begin(), revealed.end());

  // Decision: B_r on Delta^0 restricted to the revealed region. The origin is
  // present only if its cube was revealed.
  const Realization visible = restrict_realization(rz, trace.revealed_window);
  const Complex decision_cx = build_complex(visible, family);
  trace.decision = event_B_r_unchecked(decision_cx, q, r, D).occurred;
  return trace;
}

namespace {

void check_mc_args(std::int64_t n, double beta) {
  if (n < 1) throw std::invalid_argument("monte carlo: n must be >= 1");
  if (beta < 0.0) throw std::invalid_argument("monte carlo: beta must be >= 0");
}

ProbabilityEstimate finish(std::int64_t successes, std::int64_t n) {
  ProbabilityEstimate e;
  e.successes = successes;
  e.n = n;
  e.value = static_cast<double>(successes) / static_cast<double>(n);
  e.ci = wilson_interval(successes, n);
  return e;
}

}  // namespace

ProbabilityEstimate revealment(int d, double beta, const ConnectionFamily& family, int q, double r,
                               double s, std::int64_t cube, std::int64_t n,
                               std::uint64_t master_seed, int threads) {
  check_mc_args(n, beta);
  const CubeGrid grid(d, family.D);
  const Window window = window_for_radius(r, grid, family.D);
  if (!window.contains(cube)) throw std::invalid_argument("revealment: cube not in I_r");
  std::vector<std::uint8_t> hit(static_cast<size_t>(n), 0);
  parallel_for(n, threads, [&](std::int64_t k) {
    const std::uint64_t seed = derive_u64(master_seed, kTagSample, (1ull << 62) + 0, static_cast<std::uint64_t>(k));
    const Realization rz = sample_realization(seed, beta, window, family.mark_law, true);
    const ExplorationTrace trace = explore(rz, family, q, r, s);
    hit[static_cast<size_t>(k)] =
        std::find(trace.revealed.begin(), trace.revealed.end(), cube) != trace.revealed.end();
  });
  std::int64_t successes = 0;
  for (const std::uint8_t h : hit) successes += h;
  return finish(successes, n);
}

ProbabilityEstimate influence(int d, double beta, const ConnectionFamily& family, int q, double r,
                              std::int64_t cube, std::int64_t n, std::uint64_t master_seed,
                              int threads) {
  check_mc_args(n, beta);
  const CubeGrid grid(d, family.D);
  const Window window = window_for_radius(r, grid, family.D);
  if (!window.contains(cube)) throw std::invalid_argument("influence: cube not in I_r");
  std::vector<std::uint8_t> flip(static_cast<size_t>(n), 0);
  parallel_for(n, threads, [&](std::int64_t k) {
    const std::uint64_t seed = derive_u64(master_seed, kTagSample, (1ull << 62) + 1, static_cast<std::uint64_t>(k));
    Realization rz = sample_realization(seed, beta, window, family.mark_law, true);
    const bool base = event_B_r_unchecked(build_complex(rz, family), q, r, family.D).occurred;
    resample_cube(rz, cube, 1);
    const bool resampled = event_B_r_unchecked(build_complex(rz, family), q, r, family.D).occurred;
    flip[static_cast<size_t>(k)] = base != resampled;
  });
  std::int64_t successes = 0;
  for (const std::uint8_t f : flip) successes += f;
  return finish(successes, n);
}

OsssCheck osss_check(int d, double beta, const ConnectionFamily& family, int q, double r, double s,
                     std::int64_t n, std::uint64_t master_seed, int threads) {
  check_mc_args(n, beta);
  if (!(s > 0.0) || s > r) throw std::invalid_argument("osss_check: need 0 < s <= r");
  const CubeGrid grid(d, family.D);
  const Window window = window_for_radius(r, grid, family.D);
  const size_t cube_count = window.cubes.size();

  struct SampleOut {
    std::uint8_t event = 0;
    std::uint8_t mismatch = 0;
    std::vector<std::uint8_t> revealed;
    std::vector<std::uint8_t> flipped;
  };
  std::vector<SampleOut> out(static_cast<size_t>(n));

  parallel_for(n, threads, [&](std::int64_t k) {
    SampleOut& slot = out[static_cast<size_t>(k)];
    slot.revealed.assign(cube_count, 0);
    slot.flipped.assign(cube_count, 0);
    const std::uint64_t seed = derive_u64(master_seed, kTagSample, (1ull << 62) + 2, static_cast<std::uint64_t>(k));
    const Realization rz = sample_realization(seed, beta, window, family.mark_law, true);
    const bool base = event_B_r_unchecked(build_complex(rz, family), q, r, family.D).occurred;
    slot.event = base;

    const ExplorationTrace trace = explore(rz, family, q, r, s);
    slot.mismatch = trace.decision != base;
    for (const std::int64_t cube : trace.revealed) {
      const auto it = std::lower_bound(window.cubes.begin(), window.cubes.end(), cube);
      slot.revealed[static_cast<size_t>(it - window.cubes.begin())] = 1;
    }
    for (size_t ci = 0; ci < cube_count; ++ci) {
      Realization replica = rz;
      resample_cube(replica, window.cubes[ci], 1);
      const bool resampled =
          event_B_r_unchecked(build_complex(replica, family), q, r, family.D).occurred;
      slot.flipped[ci] = resampled != base;
    }
  });

  OsssCheck check;
  check.beta = beta;
  check.r = r;
  check.s = s;
  check.q = q;
  check.n = n;
  std::int64_t event_count = 0;
  for (const auto& slot : out) {
    event_count += slot.event;
    check.decision_mismatches += slot.mismatch;
  }
  check.theta = finish(event_count, n);

  double rhs = 0.0;
  double var_rhs = 0.0;
  for (size_t ci = 0; ci < cube_count; ++ci) {
    OsssCubeTerm term;
    term.cube = window.cubes[ci];
    std::int64_t rev = 0, flip = 0;
    for (const auto& slot : out) {
      rev += slot.revealed[ci];
      flip += slot.flipped[ci];
    }
    term.delta = finish(rev, n);
    term.zeta = finish(flip, n);
    rhs += term.delta.value * term.zeta.value;
    const double se_d = binomial_se(rev, n);
    const double se_z = binomial_se(flip, n);
    var_rhs += term.delta.value * term.delta.value * se_z * se_z +
               term.zeta.value * term.zeta.value * se_d * se_d;
    check.cubes.push_back(term);
  }
  const double theta = check.theta.value;
  check.lhs = theta * (1.0 - theta);
  check.rhs = rhs;
  const double se_theta = binomial_se(event_count, n);
  const double var_lhs = (1.0 - 2.0 * theta) * (1.0 - 2.0 * theta) * se_theta * se_theta +
                         2.0 * se_theta * se_theta * se_theta * se_theta;
  check.margin = rhs - check.lhs;
  check.se_margin = std::sqrt(var_rhs + var_lhs);
  return check;
}

nlohmann::ordered_json trace_to_json(const ExplorationTrace& trace) {
  nlohmann::ordered_json j;
  j["q"] = trace.q;
  j["r"] = trace.r;
  j["s"] = trace.s;
  j["t0"] = trace.t0;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& st : trace.steps) {
    nlohmann::ordered_json e;
    e["cube"] = st.cube;
    e["frontier_simplices"] = st.frontier_simplices;
    e["crossing_components"] = st.crossing_components;
    steps.push_back(e);
  }
  j["steps"] = steps;
  j["revealed"] = trace.revealed;
  j["decision"] = trace.decision;
  return j;
}

nlohmann::ordered_json osss_to_json(const OsssCheck& check) {
  nlohmann::ordered_json j;
  j["beta"] = check.beta;
  j["r"] = check.r;
  j["s"] = check.s;
  j["q"] = check.q;
  j["n"] = check.n;
  j["theta"] = check.theta.value;
  j["theta_ci"] = {check.theta.ci.lo, check.theta.ci.hi};
  j["lhs"] = check.lhs;
  j["rhs"] = check.rhs;
  j["margin"] = check.margin;
  j["se_margin"] = check.se_margin;
  j["decision_mismatches"] = check.decision_mismatches;
  auto cubes = nlohmann::ordered_json::array();
  for (const auto& term : check.cubes) {
    nlohmann::ordered_json e;
    e["cube"] = term.cube;
    e["delta"] = term.delta.value;
    e["delta_ci"] = {term.delta.ci.lo, term.delta.ci.hi};
    e["zeta"] = term.zeta.value;
    e["zeta_ci"] = {term.zeta.ci.lo, term.zeta.ci.hi};
    cubes.push_back(e);
  }
  j["cubes"] = cubes;
  return j;
}

}  // namespace rcm
