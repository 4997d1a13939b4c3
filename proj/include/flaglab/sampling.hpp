#pragma once

#include <cstdint>
#include <random>

#include "flaglab/flag.hpp"

namespace flaglab {

// Deterministic generator; seeds are mixed through splitmix64 so nearby
// (element, seed) pairs give unrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}
  Rng(std::uint64_t element_hash, std::uint64_t global_seed)
      : engine_(splitmix(element_hash ^ splitmix(global_seed))) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

  static std::uint64_t splitmix(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Haar-distributed element of O(n).
Matrix haar_orthogonal(int n, Rng& rng);
// Haar-distributed element of SO(n).
Matrix haar_special_orthogonal(int n, Rng& rng);
Flag random_flag(int n, Rng& rng);
OppositeFlag random_opposite_flag(int n, Rng& rng);
// Rotates f by a random orthogonal matrix at distance about size from I.
Flag perturb_flag(const Flag& f, double size, Rng& rng);

// Gaussian matrix rescaled to det 1 (sign fixed by a row flip), redrawn until
// its condition number is below cond_cap.
GroupElement random_sl(int n, Rng& rng, double cond_cap = 1e4);

}  // namespace flaglab
