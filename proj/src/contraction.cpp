#include "flaglab/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

constexpr double kBandWidth = 1.1;
constexpr double kPerturbation = 1e-4;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
}

void check_budget(const SamplingBudget& budget) {
  if (budget.samples < 1000) throw InvalidInput("sampling budget must be at least 1000");
  if (!(budget.gap_tol > 0.0)) throw InvalidInput("gap tolerance must be positive");
}

Flag uniform_region_sample(const OppositeFlag& y, double eps, Rng& rng, long& attempts, long cap) {
  for (;;) {
    if (++attempts > cap)
      throw InsufficientBudget("rejection sampler could not populate {zeta >= " + std::to_string(eps) + "}");
    Flag f = random_flag(y.dim(), rng);
    if (transversality_margin(f, y) >= eps) return f;
  }
}

// Walks from f towards a frame that is not transverse to y and bisects until
// the margin lands in [eps, 1.1 eps).
std::optional<Flag> band_sample(const Flag& f, const OppositeFlag& y, double eps) {
  const double start = transversality_margin(f, y);
  if (start < kBandWidth * eps) return f;
  Matrix target = f.frame();
  target.col(0) = y.frame().col(y.dim() - 1);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    Flag candidate;
    try {
      candidate = flag_from_frame((1.0 - mid) * f.frame() + mid * target);
    } catch (const RankDeficient&) {
      hi = mid;
      continue;
    }
    const double z = transversality_margin(candidate, y);
    if (z >= eps && z < kBandWidth * eps) return candidate;
    if (z >= kBandWidth * eps)
      lo = mid;
    else
      hi = mid;
  }
  return std::nullopt;
}

struct RegionScan {
  double image_radius = 0.0;
  double max_ratio = 0.0;
};

RegionScan scan_region(const GroupElement& g, const Flag& center, const OppositeFlag& y,
                       const std::vector<Flag>& samples, double eps, Rng& rng) {
  RegionScan out;
  std::vector<Flag> images;
  images.reserve(samples.size());
  for (const auto& f : samples) {
    images.push_back(act_on_flag(g, f));
    out.image_radius = std::max(out.image_radius, flag_distance(images.back(), center));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Flag near = perturb_flag(samples[i], kPerturbation, rng);
    if (transversality_margin(near, y) >= eps) {
      const double d = flag_distance(samples[i], near);
      if (d > 0) out.max_ratio = std::max(out.max_ratio, flag_distance(images[i], act_on_flag(g, near)) / d);
    }
    if (i + 1 < samples.size()) {
      const double d = flag_distance(samples[i], samples[i + 1]);
      if (d > 1e-12) out.max_ratio = std::max(out.max_ratio, flag_distance(images[i], images[i + 1]) / d);
    }
  }
  return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool certified_at(const GroupElement& g, double epsilon, const SamplingBudget& budget) {
  try {
    if (check_contracting(g, epsilon, budget).pass) return true;
  } catch (const NotLoxodromic&) {
    return false;
  } catch (const InsufficientBudget&) {
  }
  if (2 * epsilon >= 1.0) return false;
  try {
    return check_contracting(g, 2 * epsilon, budget).pass;
  } catch (const InsufficientBudget&) {
    return false;
  }
}

}  // namespace

std::string element_id(const GroupElement& g) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(g.fingerprint()));
  return buf;
}

bool ContractionCertificate::verdict_from_margins() const {
  return margin_a >= 0.0 && image_radius <= epsilon && lipschitz_bound <= epsilon;
}

double ContractionCertificate::containment_radius() const {
  double r = std::min({kLipschitzSafety * image_radius, lipschitz_bound, 1.0});
  if (pass) r = std::min(r, epsilon);
  return r;
}

std::vector<Flag> draw_region_samples(const OppositeFlag& y, double eps, int count, Rng& rng) {
  std::vector<Flag> out;
  out.reserve(count);
  long attempts = 0;
  const long cap = 100L * std::max(count, 1);
  const int uniform_count = count - count / 2;
  for (int i = 0; i < uniform_count; ++i) out.push_back(uniform_region_sample(y, eps, rng, attempts, cap));
  while (static_cast<int>(out.size()) < count) {
    const Flag f = uniform_region_sample(y, eps, rng, attempts, cap);
    if (auto b = band_sample(f, y, eps)) out.push_back(*b);
  }
  return out;
}

ContractionCertificate check_contracting(const GroupElement& g, double epsilon, const SamplingBudget& budget) {
  check_epsilon(epsilon);
  check_budget(budget);
  ContractionCertificate cert;
  cert.epsilon = epsilon;
  cert.element_id = element_id(g);
  cert.attracting = attracting_flag(g, budget.gap_tol);
  cert.repelling = repelling_flag(g, budget.gap_tol);
  cert.margin_a = transversality_margin(cert.attracting, cert.repelling) - 2 * epsilon;
  cert.samples = budget.samples;
  cert.seed = budget.seed;
  Rng rng(g.fingerprint(), budget.seed);
  const auto samples = draw_region_samples(cert.repelling, epsilon, budget.samples, rng);
  const auto scan = scan_region(g, cert.attracting, cert.repelling, samples, epsilon, rng);
  cert.image_radius = scan.image_radius;
  cert.max_ratio = scan.max_ratio;
  cert.lipschitz_bound = kLipschitzSafety * scan.max_ratio;
  cert.pass = cert.verdict_from_margins();
  return cert;
}

CriterionResult contraction_criterion(const GroupElement& g, const Flag& x_plus, const OppositeFlag& y_minus,
                                      double epsilon, const SamplingBudget& budget) {
  check_epsilon(epsilon);
  check_budget(budget);
  const double sep = transversality_margin(x_plus, y_minus);
  if (sep < 6 * epsilon)
    throw HypothesisViolated(Hypothesis::Separation,
                             "zeta(x_plus, y_minus) = " + std::to_string(sep) + " is below 6 epsilon");
  Rng rng(g.fingerprint(), budget.seed);
  const auto samples = draw_region_samples(y_minus, epsilon, budget.samples, rng);
  const auto scan = scan_region(g, x_plus, y_minus, samples, epsilon, rng);
  if (scan.image_radius > epsilon)
    throw HypothesisViolated(Hypothesis::ImageBall, "image leaves the epsilon-ball of x_plus (radius " +
                                                        std::to_string(scan.image_radius) + ")");
  if (kLipschitzSafety * scan.max_ratio > epsilon)
    throw HypothesisViolated(Hypothesis::Lipschitz,
                             "Lipschitz estimate " + std::to_string(kLipschitzSafety * scan.max_ratio) +
                                 " exceeds epsilon");
  if (2 * epsilon >= 1.0) throw InvalidInput("2 epsilon must lie in (0, 1)");
  CriterionResult out;
  out.certificate = check_contracting(g, 2 * epsilon, budget);
  out.attracting_offset = flag_distance(out.certificate.attracting, x_plus);
  out.repelling_offset = opposite_distance(out.certificate.repelling, y_minus);
  out.holds = out.certificate.pass && out.attracting_offset <= epsilon && out.repelling_offset <= epsilon;
  if (!out.certificate.pass)
    out.reason = "2 epsilon certificate failed";
  else if (out.attracting_offset > epsilon)
    out.reason = "attracting flag farther than epsilon from x_plus";
  else if (out.repelling_offset > epsilon)
    out.reason = "repelling flag farther than epsilon from y_minus";
  return out;
}

Shadow make_shadow(const GroupElement& g, double r, double gap_tol) {
  if (!(r > 0)) throw InvalidInput("shadow radius must be positive");
  return {g, r, attracting_flag(g, gap_tol), repelling_flag(g, gap_tol), 1.0};
}

Shadow make_shadow(const GroupElement& g, double r, const ContractionCertificate& cert) {
  if (!(r > 0)) throw InvalidInput("shadow radius must be positive");
  const double radius = r >= cert.epsilon ? cert.containment_radius() : 1.0;
  return {g, r, cert.attracting, cert.repelling, radius};
}

bool shadow_membership(const Shadow& s, const Flag& f) {
  return transversality_margin(act_on_flag(s.element.inverse(), f), s.repelling) >= s.r;
}

bool shadow_inclusion_check(const GroupElement& gamma, const GroupElement& eta, const GroupElement& generator,
                            double epsilon, const SamplingBudget& budget) {
  check_epsilon(epsilon);
  check_budget(budget);
  const Matrix product = gamma.matrix() * generator.matrix();
  if (max_abs(product - eta.matrix()) > 1e-9 * std::max(1.0, max_abs(eta.matrix())))
    throw NotCertified("eta is not gamma times the generator");
  if (!certified_at(gamma, epsilon, budget)) throw NotCertified("gamma is not certified contracting");
  if (!certified_at(eta, epsilon, budget)) throw NotCertified("eta is not certified contracting");
  if (4 * epsilon > 1.0) return false;
  const OppositeFlag eta_minus = repelling_flag(eta, budget.gap_tol);
  const OppositeFlag gamma_minus = repelling_flag(gamma, budget.gap_tol);
  const GroupElement gamma_inv = gamma.inverse();
  Rng rng(eta.fingerprint() ^ gamma.fingerprint(), budget.seed);
  for (const auto& f : draw_region_samples(eta_minus, 2 * epsilon, budget.samples, rng)) {
    const Flag p = act_on_flag(eta, f);
    if (transversality_margin(act_on_flag(gamma_inv, p), gamma_minus) < 4 * epsilon) return false;
  }
  return true;
}

ExactCrosscheck exact_freeness_crosscheck(const std::vector<GroupElement>& generators, int max_len) {
  if (generators.empty()) throw InvalidInput("empty generator list");
  if (max_len < 2) throw InvalidInput("max_len must be at least 2");
  for (const auto& g : generators)
    if (!g.has_exact()) throw ExactEntriesMissing("generator lacks exact entries");
  const double worst = std::pow(static_cast<double>(generators.size()), max_len);
  if (worst > 1e7) throw BudgetExceeded("|S|^max_len exceeds 1e7");

  ExactCrosscheck out;
  out.max_len = max_len;
  std::unordered_map<std::string, std::vector<Word>> classes;
  std::vector<std::pair<Word, RationalMatrix>> layer;
  for (int i = 0; i < static_cast<int>(generators.size()); ++i) layer.push_back({{i}, generators[i].exact()});
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::pair<Word, RationalMatrix>> next;
    for (auto& [word, mat] : layer) {
      classes[mat.key()].push_back(word);
      ++out.words;
      if (len == max_len) continue;
      for (int i = 0; i < static_cast<int>(generators.size()); ++i) {
        Word w = word;
        w.push_back(i);
        next.push_back({std::move(w), mat * generators[i].exact()});
      }
    }
    layer = std::move(next);
  }
  std::vector<std::vector<Word>*> groups;
  for (auto& [key, words] : classes)
    if (words.size() > 1) groups.push_back(&words);
  std::sort(groups.begin(), groups.end(), [](auto* a, auto* b) { return a->front() < b->front(); });
  for (auto* words : groups) {
    std::sort(words->begin(), words->end());
    const std::size_t k = words->size();
    out.collisions += k * (k - 1) / 2;
    for (std::size_t a = 0; a < k && out.witnesses.size() < kMaxWitnesses; ++a)
      for (std::size_t b = a + 1; b < k && out.witnesses.size() < kMaxWitnesses; ++b)
        out.witnesses.push_back({(*words)[a], (*words)[b]});
  }
  return out;
}

std::vector<std::string> FreenessCertificate::failures_from_margins() const {
  std::vector<std::string> out;
  const std::size_t k = per_generator.size();
  for (std::size_t i = 0; i < k; ++i)
    if (!per_generator[i].verdict_from_margins()) out.push_back("contraction[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (pairwise_separation[i][j] < 6 * epsilon)
        out.push_back("pairwise_separation[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (!(shadow_disjointness[i][j] > shadow_radii[i] + shadow_radii[j]))
        out.push_back("shadow_disjointness[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  if (exact_crosscheck && exact_crosscheck->collisions > 0) out.push_back("exact_crosscheck");
  return out;
}

FreenessCertificate pingpong_certificate(const std::vector<GroupElement>& generators, double epsilon,
                                         const SamplingBudget& budget, std::optional<int> exact_max_len) {
  if (generators.size() < 2) throw InvalidInput("ping-pong needs at least two generators");
  check_epsilon(epsilon);
  check_budget(budget);
  FreenessCertificate out;
  out.epsilon = epsilon;
  const std::size_t k = generators.size();
  for (std::size_t i = 0; i < k; ++i) {
    try {
      out.per_generator.push_back(check_contracting(generators[i], epsilon, budget));
    } catch (const NotLoxodromic& e) {
      throw NotLoxodromic("generator " + std::to_string(i) + ": " + e.what(), static_cast<std::ptrdiff_t>(i));
    }
    out.generator_ids.push_back(out.per_generator.back().element_id);
    out.shadow_radii.push_back(out.per_generator.back().containment_radius());
  }
  out.pairwise_separation.assign(k, std::vector<double>(k, 0.0));
  out.shadow_disjointness.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      out.pairwise_separation[i][j] =
          transversality_margin(out.per_generator[i].attracting, out.per_generator[j].repelling);
      out.shadow_disjointness[i][j] = flag_distance(out.per_generator[i].attracting, out.per_generator[j].attracting);
    }
  if (exact_max_len) out.exact_crosscheck = exact_freeness_crosscheck(generators, *exact_max_len);
  out.failures = out.failures_from_margins();
  out.pass = out.failures.empty();
  return out;
}

}  // namespace flaglab
