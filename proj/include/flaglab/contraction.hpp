#pragma once

// Numerical certification of contracting elements, shadows of contracting
// elements and ping-pong certificates for finite generator sets.
//
// Neighbourhoods of the non-transverse locus are measured with the
// transversality margin: "f is eps-far from Z_y" means zeta(f, y) >= eps.
// Everything below certifies that variant and is Monte-Carlo evidence, not an
// interval proof.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flaglab/flag.hpp"
#include "flaglab/sampling.hpp"

namespace flaglab {

using Word = std::vector<int>;

struct SamplingBudget {
  int samples = 4000;
  std::uint64_t seed = 0;
  double gap_tol = 1e-6;
};

// Multiplier applied to the largest observed ratio before it is compared
// with epsilon.
inline constexpr double kLipschitzSafety = 1.5;

struct ContractionCertificate {
  double epsilon = 0.0;
  std::string element_id;
  Flag attracting;
  OppositeFlag repelling;
  double margin_a = 0.0;
  double image_radius = 0.0;
  double max_ratio = 0.0;
  double lipschitz_bound = 0.0;  // kLipschitzSafety * max_ratio
  int samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;

  // Recomputes the verdict from the stored margins.
  bool verdict_from_margins() const;
  // Upper bound on the radius of a ball around the attracting flag that
  // contains every shadow S_r with r >= epsilon.
  double containment_radius() const;
};

// Draws count flags with zeta(f, y) >= eps; the second half lies in the band
// eps <= zeta < 1.1 eps, where contraction is weakest.
std::vector<Flag> draw_region_samples(const OppositeFlag& y, double eps, int count, Rng& rng);

ContractionCertificate check_contracting(const GroupElement& g, double epsilon, const SamplingBudget& budget = {});

struct CriterionResult {
  bool holds = false;
  ContractionCertificate certificate;  // at 2 * epsilon
  double attracting_offset = 0.0;      // flag_distance(x_g+, x_plus)
  double repelling_offset = 0.0;       // opposite_distance(x_g-, y_minus)
  std::string reason;
};

// Sufficient criterion for 2 eps-contraction from data (x_plus, y_minus) with
// zeta(x_plus, y_minus) >= 6 eps. Throws HypothesisViolated naming the first
// hypothesis that fails.
CriterionResult contraction_criterion(const GroupElement& g, const Flag& x_plus, const OppositeFlag& y_minus,
                                      double epsilon, const SamplingBudget& budget = {});

struct Shadow {
  GroupElement element;
  double r = 0.0;
  Flag center;
  OppositeFlag repelling;
  double containment_radius = 1.0;
};

Shadow make_shadow(const GroupElement& g, double r, double gap_tol = 1e-6);
Shadow make_shadow(const GroupElement& g, double r, const ContractionCertificate& cert);

bool shadow_membership(const Shadow& s, const Flag& f);

// Samples S_{2eps}(eta) and checks inclusion in S_{4eps}(gamma), where
// eta = gamma * generator.
bool shadow_inclusion_check(const GroupElement& gamma, const GroupElement& eta, const GroupElement& generator,
                            double epsilon, const SamplingBudget& budget = {});

struct ExactCrosscheck {
  int max_len = 0;
  std::size_t words = 0;
  std::size_t collisions = 0;
  std::vector<std::pair<Word, Word>> witnesses;  // first few colliding pairs
};

inline constexpr std::size_t kMaxWitnesses = 16;

ExactCrosscheck exact_freeness_crosscheck(const std::vector<GroupElement>& generators, int max_len);

struct FreenessCertificate {
  double epsilon = 0.0;
  std::vector<std::string> generator_ids;
  std::vector<ContractionCertificate> per_generator;
  std::vector<std::vector<double>> pairwise_separation;  // zeta(x_i+, x_j-)
  std::vector<std::vector<double>> shadow_disjointness;  // flag_distance(x_i+, x_j+)
  std::vector<double> shadow_radii;                      // containment radius per generator
  std::optional<ExactCrosscheck> exact_crosscheck;
  std::vector<std::string> failures;
  bool pass = false;

  // Recomputes failures and verdict from the stored numbers only.
  std::vector<std::string> failures_from_margins() const;
};

// Elements that are not loxodromic raise NotLoxodromic carrying their index.
FreenessCertificate pingpong_certificate(const std::vector<GroupElement>& generators, double epsilon,
                                         const SamplingBudget& budget = {}, std::optional<int> exact_max_len = {});

std::string element_id(const GroupElement& g);

}  // namespace flaglab
