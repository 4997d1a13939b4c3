#pragma once

// Word-ball enumeration, the cone/flag filters on Cartan data and greedy
// packing of records with pairwise disjoint shadows.

#include <optional>
#include <string>
#include <vector>

#include "flaglab/contraction.hpp"

namespace flaglab {

// Round cone around a unit axis interior to the chamber.
class Cone {
 public:
  Cone() = default;
  // Normalises axis; requires every simple root positive on it and
  // 0 < half_angle < pi/2.
  static Cone make(const Vector& axis, double half_angle);

  const CartanVector& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }
  bool contains(const CartanVector& v) const;
  double angle_to(const CartanVector& v) const;

 private:
  CartanVector axis_;
  double half_angle_ = 0.0;
};

struct OrbitRecord {
  Word word;
  GroupElement matrix = GroupElement::identity(2);
  CartanVector kappa;
  KAKDecomposition kak;
  Flag kflag;          // flag of the left K factor
  OppositeFlag lflag;  // opposite flag of the inverse right K factor

  int length() const { return static_cast<int>(word.size()); }
};

OrbitRecord make_record(Word word, GroupElement g);

enum class Dedup { Exact, Float, None };

struct EnumerateOptions {
  int radius = 1;
  Dedup dedup = Dedup::Exact;
  // Letters k..2k-1 stand for the inverses of generators 0..k-1 and words are
  // freely reduced.
  bool include_inverses = false;
  double node_cap = 1e7;
};

// Alphabet used by words: the generators, followed by their inverses when
// include_inverses is set.
std::vector<GroupElement> alphabet(const std::vector<GroupElement>& generators, bool include_inverses);
GroupElement evaluate_word(const std::vector<GroupElement>& letters, const Word& word);

std::vector<OrbitRecord> enumerate_ball(const std::vector<GroupElement>& generators, const EnumerateOptions& options);

class FilterSpec {
 public:
  // Rejects epsilon >= zeta(x, y) / 8.
  static FilterSpec make(Cone cone, Flag x, OppositeFlag y, double n_min, std::optional<double> width,
                         double epsilon);

  const Cone& cone() const { return cone_; }
  const Flag& x() const { return x_; }
  const OppositeFlag& y() const { return y_; }
  double n_min() const { return n_min_; }
  const std::optional<double>& width() const { return width_; }
  double epsilon() const { return epsilon_; }

  bool accepts(const OrbitRecord& r) const;

 private:
  Cone cone_;
  Flag x_;
  OppositeFlag y_;
  double n_min_ = 0.0;
  std::optional<double> width_;
  double epsilon_ = 0.0;
};

std::vector<OrbitRecord> filter_gamma_set(const std::vector<OrbitRecord>& records, const FilterSpec& spec);

enum class ShadowMode { SymmetricSpace, Flag };

// True only when the two shadows are certainly disjoint. In symmetric-space
// mode, intersecting shadows force d_X <= 4R + |kappa_1 - kappa_2|, so
// exceeding that bound proves disjointness.
bool shadows_disjoint(const OrbitRecord& a, const OrbitRecord& b, double R, ShadowMode mode);

// Pinned records (indices into candidates, at most two) are kept first; the
// rest are tried by ascending |kappa|, ties broken by word.
std::vector<OrbitRecord> greedy_disjoint_pack(const std::vector<OrbitRecord>& candidates, double R, ShadowMode mode,
                                              const std::vector<std::size_t>& pinned = {});

struct ZariskiReport {
  int span_dimension = 0;
  int full_dimension = 0;
  int jordan_rank = 0;
  int loxodromic_count = 0;
  bool consistent = false;
  std::string verdict;  // "consistent with Zariski dense" or "inconclusive"
};

ZariskiReport zariski_heuristic(const std::vector<OrbitRecord>& records, double gap_tol = 1e-6);

// Largest |kappa_1 - kappa_2| / outer_norm over pairs of records.
double measured_cone_spread(const std::vector<OrbitRecord>& records, double outer_norm);

// Largest sampled ratio d(g f, g f') / d(f, f') over random close pairs.
double sampled_lipschitz(const GroupElement& g, int samples, Rng& rng);

}  // namespace flaglab
