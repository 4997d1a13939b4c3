#pragma once

// Estimators on finite orbit samples: partial Poincare sums, the exponential
// growth rate of orbit counts (globally and inside cones), limit-cone
// directions, subadditivity defects and the linear root-growth fit.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flaglab/orbit.hpp"

namespace flaglab {

inline constexpr std::size_t kMinRecordsForFit = 100;

struct WindowPolicy {
  double drop_low = 0.2;
  double drop_high = 0.2;
};

struct GrowthReport {
  std::map<int, std::size_t> counts_by_radius;
  double bin_width = 0.0;
  std::vector<double> edges;              // T values
  std::vector<std::size_t> cumulative;    // N(T) at each edge
  double delta_hat = 0.0;
  std::pair<double, double> fit_window;
  double fit_residual = 0.0;              // RMS of log N about the line
  std::size_t sample_size = 0;
};

double poincare_partial_sum(const std::vector<OrbitRecord>& records, double s);
double poincare_partial_sum(const std::vector<double>& norms, double s);

GrowthReport estimate_delta(const std::vector<double>& norms, double bin_width, const WindowPolicy& window = {});
GrowthReport estimate_delta(const std::vector<OrbitRecord>& records, double bin_width,
                            const WindowPolicy& window = {});

struct LimitConeSample {
  std::vector<CartanVector> cartan;  // kappa / |kappa|
  std::vector<CartanVector> jordan;  // lambda / |lambda| for loxodromic records
  bool empty = false;
};

LimitConeSample limit_cone_sample(const std::vector<OrbitRecord>& records, double norm_floor = 5.0,
                                  double gap_tol = 1e-6);

struct IndicatorPoint {
  double angle = 0.0;
  std::size_t sample_size = 0;
  std::optional<double> tau_hat;
  std::string error;  // set when the cone held too few records
};

std::vector<IndicatorPoint> growth_indicator_estimate(const std::vector<OrbitRecord>& records, const Vector& direction,
                                                      const std::vector<double>& angles, double bin_width,
                                                      const WindowPolicy& window = {});

struct DefectStats {
  double max_defect = 0.0;
  double mean_defect = 0.0;
  double histogram_bin = 0.0;
  std::vector<std::size_t> histogram;
  std::size_t pairs = 0;
};

// |kappa(gh) - kappa(g) - kappa(h)| over ordered pairs; exhaustive when the
// pair count fits the budget, otherwise a seeded sample of that size.
DefectStats subadditivity_defect(const std::vector<GroupElement>& elements, std::size_t pair_budget,
                                 std::uint64_t seed = 0, int histogram_bins = 20);

// max |B(w, x) - kappa(w)| over the given elements.
double busemann_cartan_constant(const std::vector<GroupElement>& elements, const Flag& x);

struct AnosovFit {
  double C_hat = 0.0;
  double c_hat = 0.0;
  double min_ratio = 0.0;
  double head_slope = 0.0;
  double tail_slope = 0.0;
  std::map<int, double> min_root_by_length;
  bool pass = false;
};

AnosovFit anosov_slope(const std::vector<OrbitRecord>& records);

}  // namespace flaglab
