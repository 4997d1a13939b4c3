#include "flaglab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

std::string float_key(const Matrix& m) {
  std::string key;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      key += std::to_string(std::llround(m(i, j) * 1e9));
      key += ',';
    }
  return key;
}

int matrix_rank(const Matrix& stacked, double rel_tol) {
  if (stacked.rows() == 0 || stacked.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

}  // namespace

Cone Cone::make(const Vector& axis, double half_angle) {
  if (!(half_angle > 0.0 && half_angle < M_PI / 2)) throw InvalidInput("cone half-angle must lie in (0, pi/2)");
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw InvalidInput("cone axis must be nonzero");
  Cone c;
  c.axis_ = CartanVector::from_coords(axis / norm);
  for (const auto& r : simple_root_values(c.axis_))
    if (!(r.value > 0.0)) throw InvalidInput("cone axis must be interior to the chamber");
  c.half_angle_ = half_angle;
  return c;
}

double Cone::angle_to(const CartanVector& v) const {
  const double nv = v.norm();
  if (nv == 0.0) return M_PI;
  return std::acos(std::clamp(axis_.coords().dot(v.coords()) / nv, -1.0, 1.0));
}

bool Cone::contains(const CartanVector& v) const { return angle_to(v) < half_angle_; }

OrbitRecord make_record(Word word, GroupElement g) {
  OrbitRecord r;
  r.word = std::move(word);
  r.kak = kak_decomposition(g);
  r.kappa = r.kak.a;
  r.kflag = Flag(r.kak.k);
  r.lflag = OppositeFlag(r.kak.l.transpose());
  r.matrix = std::move(g);
  return r;
}

std::vector<GroupElement> alphabet(const std::vector<GroupElement>& generators, bool include_inverses) {
  std::vector<GroupElement> out = generators;
  if (include_inverses)
    for (const auto& g : generators) out.push_back(g.inverse());
  return out;
}

GroupElement evaluate_word(const std::vector<GroupElement>& letters, const Word& word) {
  if (word.empty()) throw InvalidInput("empty word");
  GroupElement out = letters.at(word[0]);
  for (std::size_t i = 1; i < word.size(); ++i) out = out * letters.at(word[i]);
  return out;
}

std::vector<OrbitRecord> enumerate_ball(const std::vector<GroupElement>& generators, const EnumerateOptions& options) {
  if (options.radius < 1) throw InvalidInput("radius must be at least 1");
  if (generators.empty()) throw InvalidInput("empty generator list");
  const int n = generators.front().dim();
  for (const auto& g : generators)
    if (g.dim() != n) throw InvalidInput("generators have different dimensions");
  if (options.dedup == Dedup::Exact)
    for (const auto& g : generators)
      if (!g.has_exact()) throw DedupUnavailable("exact deduplication needs exact entries");

  const int k = static_cast<int>(generators.size());
  const int letters_count = options.include_inverses ? 2 * k : k;
  const double branching = options.include_inverses ? 2.0 * k - 1.0 : k;
  double worst = 0.0, layer_size = letters_count;
  for (int len = 1; len <= options.radius; ++len) {
    worst += layer_size;
    layer_size *= branching;
    if (worst > options.node_cap) break;
  }
  if (worst > options.node_cap)
    throw BudgetExceeded("word ball of radius " + std::to_string(options.radius) + " exceeds the node cap");

  const auto letters = alphabet(generators, options.include_inverses);
  auto inverse_letter = [&](int a) { return a < k ? a + k : a - k; };

  std::unordered_set<std::string> seen;
  auto fresh = [&](const GroupElement& g) {
    switch (options.dedup) {
      case Dedup::Exact:
        return seen.insert(g.exact().key()).second;
      case Dedup::Float:
        return seen.insert(float_key(g.matrix())).second;
      case Dedup::None:
        return true;
    }
    return true;
  };
  fresh(GroupElement::identity(n));

  std::vector<OrbitRecord> out;
  std::vector<std::pair<Word, GroupElement>> layer;
  layer.emplace_back(Word{}, GroupElement::identity(n));
  for (int len = 1; len <= options.radius; ++len) {
    std::vector<std::pair<Word, GroupElement>> next;
    for (const auto& [word, g] : layer) {
      for (int a = 0; a < letters_count; ++a) {
        if (options.include_inverses && !word.empty() && word.back() == inverse_letter(a)) continue;
        GroupElement h = word.empty() ? letters[a] : g * letters[a];
        if (!fresh(h)) continue;
        Word w = word;
        w.push_back(a);
        out.push_back(make_record(w, h));
        next.emplace_back(std::move(w), std::move(h));
      }
    }
    layer = std::move(next);
  }
  return out;
}

FilterSpec FilterSpec::make(Cone cone, Flag x, OppositeFlag y, double n_min, std::optional<double> width,
                            double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (width && !(*width > 0.0)) throw InvalidInput("annulus width must be positive");
  const double z = transversality_margin(x, y);
  if (!(epsilon < z / 8.0))
    throw InvalidInput("epsilon must be below zeta(x, y) / 8 = " + std::to_string(z / 8.0));
  FilterSpec s;
  s.cone_ = std::move(cone);
  s.x_ = std::move(x);
  s.y_ = std::move(y);
  s.n_min_ = n_min;
  s.width_ = width;
  s.epsilon_ = epsilon;
  return s;
}

bool FilterSpec::accepts(const OrbitRecord& r) const {
  const double norm = r.kappa.norm();
  if (norm < n_min_) return false;
  if (width_ && norm >= n_min_ + *width_) return false;
  if (!cone_.contains(r.kappa)) return false;
  if (!(flag_distance(r.kflag, x_) < epsilon_)) return false;
  return opposite_distance(r.lflag, y_) < epsilon_;
}

std::vector<OrbitRecord> filter_gamma_set(const std::vector<OrbitRecord>& records, const FilterSpec& spec) {
  std::vector<OrbitRecord> out;
  for (const auto& r : records)
    if (spec.accepts(r)) out.push_back(r);
  return out;
}

bool shadows_disjoint(const OrbitRecord& a, const OrbitRecord& b, double R, ShadowMode mode) {
  if (mode == ShadowMode::Flag) return flag_distance(a.kflag, b.kflag) > 2 * R;
  const double d = symmetric_space_distance(a.matrix, b.matrix);
  return d > 4 * R + (a.kappa.coords() - b.kappa.coords()).norm();
}

std::vector<OrbitRecord> greedy_disjoint_pack(const std::vector<OrbitRecord>& candidates, double R, ShadowMode mode,
                                              const std::vector<std::size_t>& pinned) {
  if (candidates.empty()) throw InvalidInput("no candidates to pack");
  if (!(R > 0.0)) throw InvalidInput("R must be positive");
  if (pinned.size() > 2) throw InvalidInput("at most two records can be pinned");
  for (auto p : pinned)
    if (p >= candidates.size()) throw InvalidInput("pinned index out of range");

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double na = candidates[a].kappa.norm(), nb = candidates[b].kappa.norm();
    if (na != nb) return na < nb;
    return candidates[a].word < candidates[b].word;
  });
  std::vector<std::size_t> sequence = pinned;
  for (auto i : order)
    if (std::find(pinned.begin(), pinned.end(), i) == pinned.end()) sequence.push_back(i);

  std::vector<OrbitRecord> kept;
  for (std::size_t s = 0; s < sequence.size(); ++s) {
    const auto& cand = candidates[sequence[s]];
    const bool forced = s < pinned.size();
    bool ok = true;
    for (const auto& other : kept)
      if (!shadows_disjoint(cand, other, R, mode)) {
        ok = false;
        break;
      }
    if (ok || forced) kept.push_back(cand);
  }
  return kept;
}

ZariskiReport zariski_heuristic(const std::vector<OrbitRecord>& records, double gap_tol) {
  if (records.size() < 2) throw InvalidInput("Zariski heuristic needs at least two records");
  const int n = records.front().matrix.dim();
  ZariskiReport rep;
  rep.full_dimension = n * n;
  Matrix stacked(records.size(), n * n);
  std::vector<Vector> jordan;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const Matrix& m = records[r].matrix.matrix();
    Eigen::Map<const Vector> flat(m.data(), n * n);
    stacked.row(r) = flat.transpose() / flat.norm();
    if (is_loxodromic(records[r].matrix, gap_tol)) {
      ++rep.loxodromic_count;
      const CartanVector l = jordan_projection(records[r].matrix);
      jordan.push_back(l.coords() / l.norm());
    }
  }
  rep.span_dimension = matrix_rank(stacked, 1e-9);
  Matrix lam(jordan.size(), n);
  for (std::size_t i = 0; i < jordan.size(); ++i) lam.row(i) = jordan[i].transpose();
  rep.jordan_rank = matrix_rank(lam, 1e-9);
  rep.consistent = rep.span_dimension == rep.full_dimension && rep.jordan_rank == n - 1 && rep.loxodromic_count > 0;
  rep.verdict = rep.consistent ? "consistent with Zariski dense" : "inconclusive";
  return rep;
}

double measured_cone_spread(const std::vector<OrbitRecord>& records, double outer_norm) {
  if (!(outer_norm > 0.0)) throw InvalidInput("outer norm must be positive");
  double spread = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t j = i + 1; j < records.size(); ++j)
      spread = std::max(spread, (records[i].kappa.coords() - records[j].kappa.coords()).norm());
  return spread / outer_norm;
}

double sampled_lipschitz(const GroupElement& g, int samples, Rng& rng) {
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Flag f = random_flag(g.dim(), rng);
    const Flag f2 = perturb_flag(f, 1e-5, rng);
    const double d = flag_distance(f, f2);
    if (d > 0) best = std::max(best, flag_distance(act_on_flag(g, f), act_on_flag(g, f2)) / d);
  }
  return best;
}

}  // namespace flaglab
