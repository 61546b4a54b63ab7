#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcm/grid.hpp"
#include "rcm/marks.hpp"
#include "rcm/vec.hpp"

namespace rcm {

// Smallest enclosing ball of a point set (Welzl, deterministic order; 1e-12
// slack on containment comparisons). Inputs are simplex-sized, so the
// exponential worst case is irrelevant.
struct Ball {
  Vec center;
  double radius = 0.0;
};
Ball min_enclosing_ball(std::span<const Vec> pts);

// Do the closed balls B(centers[i], radii[i]) have a common point?
// Equal radii route through min_enclosing_ball; heterogeneous radii use the
// pairwise criterion plus projection onto violated balls, with tolerance
// `tol` on the final residual (boundary-contact configurations are a null
// set for every sampling distribution used here).
bool balls_have_common_point(std::span<const Vec> centers, std::span<const double> radii,
                             double tol = 1e-10);

enum class FamilyKind : std::uint8_t {
  VietorisRips = 0,
  Cech = 1,
  BooleanBalls = 2,
  DiamKernel = 3,
  Custom = 4,
};

// One level of a diameter kernel: phi_j(t) = c * exp(-rate * t), decreasing,
// not vanishing anywhere.
struct DiamLevel {
  double c = 1.0;
  double rate = 0.0;
};

struct V1Decl {
  double delta = 0.0;
  double epsilon = 0.0;
  MarkInterval marks;  // the set A
};

// A family bundles the connection functions phi_1..phi_alpha with the declared
// (V1)/(V2) parameters of its built-in kind. D is the (V2) cutoff used for the
// cube decomposition (grid half edge t = D); it may be declared larger than
// the kind's natural cutoff but never smaller.
struct ConnectionFamily {
  FamilyKind kind = FamilyKind::VietorisRips;
  int alpha = 1;
  double D = 0.0;

  double r = 0.0;                 // VietorisRips / Cech radius parameter
  MarkLaw mark_law;               // BooleanBalls; Unit otherwise
  std::vector<DiamLevel> levels;  // DiamKernel: levels[j-1] is phi_j, cutoff at the top level

  V1Decl v1;

  // Custom families (tests): phi and the declaration are caller-supplied.
  std::function<double(int, std::span<const Vec>, std::span<const Mark>)> custom_phi;

  // phi_j evaluated on j+1 marked points. Indicator kinds return exactly 0/1.
  double phi(int j, std::span<const Vec> xs, std::span<const Mark> marks) const;

  // kappa_j: product of phi over all sub-tuples of size >= 2 (phi_0 == 1).
  double kappa(int j, std::span<const Vec> xs, std::span<const Mark> marks) const;

  // The kind's natural (V2) cutoff (largest diameter with kappa possibly > 0
  // at the top relevant level). D must be >= this.
  double natural_cutoff() const;

  // True when phi_1 is positive beyond D, i.e. the builder's pairwise cutoff
  // (the modified edge function) actually changes the complex.
  bool edge_cutoff_modifies() const;

  // Smallest q this family's (V2) declaration is valid for.
  int min_valid_q() const;

  std::string kind_name() const;
};

ConnectionFamily make_vietoris_rips(int alpha, double r, std::optional<double> D = {});
ConnectionFamily make_cech(int alpha, double r, std::optional<double> D = {});
ConnectionFamily make_boolean_balls(int alpha, const MarkLaw& law, std::optional<double> D = {});
// levels.size() == alpha; the top level carries the 1{diam <= D} cutoff.
ConnectionFamily make_diam_kernel(std::vector<DiamLevel> levels, double D);
ConnectionFamily make_custom(int alpha, double D, V1Decl v1,
                             std::function<double(int, std::span<const Vec>, std::span<const Mark>)> phi);

// Empirical check of the functional bounds
//   eps * 1{diam <= delta, marks in A}  <=  kappa_{q+1}  <=  1{diam > D} == 0
// on stratified random tuples. Violations carry a witness.
struct BoundViolation {
  bool v1 = false;  // which bound failed
  std::vector<Vec> xs;
  std::vector<Mark> marks;
  double kappa = 0.0;
};

struct V1V2Report {
  bool v1_ok = true;
  bool v2_ok = true;
  std::int64_t v1_checked = 0;
  std::int64_t v2_checked = 0;
  std::vector<BoundViolation> counterexamples;  // capped at 8
};

V1V2Report verify_v1_v2(const ConnectionFamily& family, int q, int d, std::int64_t sample_budget,
                        std::uint64_t seed);

}  // namespace rcm
