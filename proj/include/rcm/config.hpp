#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcm/family.hpp"

namespace rcm {

// Flat key = value run configuration (TOML-compatible subset: scalars,
// strings, numeric arrays, # comments). CLI flags override file values.
//
// Schema (all keys optional unless a command requires them):
//   d, q, alpha, n, seed, threads, bootstrap   integers
//   family                                     "vr" | "cech" | "boolean" | "diam_kernel"
//   family_r                                   vr / cech radius parameter
//   fixed_radius | radius_lo, radius_hi        boolean mark law
//   levels_c, levels_rate                      diam_kernel level arrays
//   D                                          (V2) cutoff override; required for diam_kernel
//   beta | betas                               intensity / intensity grid
//   r | r_grid                                 percolation radius / grid
//   s                                          exploration sphere radius
//   r_small, r_large, beta_min, beta_max,
//   grid_steps, tau                            beta_c estimation
//   beta_c_hat, proxy_r                        near-critical slope
//   out                                        output directory
struct RunConfig {
  int d = 2;
  int q = 0;
  int alpha = 1;
  std::int64_t n = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  int bootstrap = 1000;

  std::string family = "vr";
  std::optional<double> family_r;
  std::optional<double> fixed_radius;
  std::optional<double> radius_lo, radius_hi;
  std::vector<double> levels_c, levels_rate;
  std::optional<double> D;

  std::optional<double> beta;
  std::vector<double> betas;
  std::optional<double> r;
  std::vector<double> r_grid;
  std::optional<double> s;

  std::optional<double> r_small, r_large;
  std::optional<double> beta_min, beta_max;
  int grid_steps = 16;
  double tau = 0.05;

  std::optional<double> beta_c_hat;
  std::optional<double> proxy_r;

  std::string out = "out";
};

// Parse the key = value text; unknown keys are an error.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical serialization: fixed key order, round-trip exact via %.17g.
std::string serialize_config(const RunConfig& cfg);

// SipHash of the canonical serialization under a fixed key; stamped into
// every artifact for exact replay.
std::uint64_t config_hash(const RunConfig& cfg);

// Build the connection family (throws std::invalid_argument on bad configs).
ConnectionFamily family_from_config(const RunConfig& cfg);

// Shared validation: q < alpha, s <= r, V2 cutoff resolvable. Returns the
// human-readable violations (empty when valid).
std::vector<std::string> validate_config(const RunConfig& cfg);

}  // namespace rcm
