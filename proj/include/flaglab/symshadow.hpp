#pragma once

// Shadows in the symmetric space X = SL(n,R)/SO(n): O_R(p, q) is the set of
// flags k P whose Weyl chamber k A+ o, based at p, passes within R of q.
// Membership is decided by minimising |kappa(exp(-H) k^T q)| over H in a+;
// the minimiser is a heuristic, so "member" is certain and "not member" is
// best effort.

#include <optional>
#include <string>
#include <vector>

#include "flaglab/contraction.hpp"

namespace flaglab {

struct SymShadowQuery {
  GroupElement base;    // p = base . o
  GroupElement target;  // q = target . o
  double R = 0.0;

  static SymShadowQuery make(GroupElement base, GroupElement target, double R);
};

struct MembershipResult {
  bool member = false;
  double achieved_distance = 0.0;  // upper bound for the true minimum
  CartanVector minimizer;
};

struct MinimizerOptions {
  int rays = 9;
  int radii = 20;
  int refine_iterations = 200;
  double tolerance = 1e-6;
};

MembershipResult sym_shadow_membership(const SymShadowQuery& query, const Flag& f,
                                       const MinimizerOptions& options = {});

struct ObservationOne {
  double lhs = 0.0;
  double bound = 0.0;
  bool holds = false;
};

// For f in O_R(o, gamma o): d_X(k exp(kappa(gamma)) o, gamma o) <= 2R.
// Throws MembershipUnverified when membership cannot be confirmed.
ObservationOne shadow_observation_1(const Flag& f, const GroupElement& gamma, double R);

struct ObservationTwo {
  bool intersects = false;
  bool distance_bound_holds = true;
  double distance = 0.0;
  double bound = 0.0;
};

// Probes for a flag in both O_R(o, g1 o) and O_R(o, g2 o); when one is found
// checks d_X(g1 o, g2 o) <= 4R + |kappa(g1) - kappa(g2)|.
ObservationTwo shadow_observation_2(const GroupElement& g1, const GroupElement& g2, double R, int probe_budget,
                                    std::uint64_t seed = 0);

struct InclusionReport {
  bool holds = true;
  int violations = 0;
  int probes = 0;
  bool vacuous = false;  // no probes were drawn
};

// Pushes samples of S_{2 eps}(g) forward and tests each for membership in
// O_R(o, g o). Throws NotCertified unless g passes at 2 eps.
InclusionReport flag_shadow_in_sym_shadow(const GroupElement& g, double epsilon, double R, int probe_budget,
                                          std::uint64_t seed = 0);

struct CalibrationRow {
  double epsilon = 0.0;
  int n = 0;
  std::optional<double> R_min;  // smallest grid value with zero violations
  int probes = 0;
};

CalibrationRow calibrate_shadow_radius(const GroupElement& g, double epsilon, const std::vector<double>& grid,
                                       int probe_budget, std::uint64_t seed = 0);

// Shadow seen from a boundary point: f is a member of O_R(eta, p) when the
// flat joining eta and f passes within R of p. Minimises over all of a.
MembershipResult boundary_shadow_membership(const OppositeFlag& eta, const GroupElement& target, double R,
                                            const Flag& f);

}  // namespace flaglab
