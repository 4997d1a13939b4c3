#pragma once

// Structure theory of SL(n,R): Cartan and Jordan projections, the KA+K
// decomposition, the Iwasawa cocycle and the distance on the symmetric space.
//
// Coordinates on the Cartan subalgebra a are the diagonal log-coordinates, so
// a vector h in a is a zero-sum vector of length n and the positive chamber a+
// is {h_1 >= h_2 >= ... >= h_n}. The norm is the Euclidean one.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "flaglab/rational.hpp"

namespace flaglab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Flag;

inline constexpr double kDeterminantTolerance = 1e-9;

// An element of SL(n,R), optionally carrying an exact rational image.
class GroupElement {
 public:
  // Ingestion path: rejects non-square input, n < 2, non-finite entries and
  // |det - 1| > 1e-9.
  static GroupElement from_matrix(const Matrix& m);
  // Exact ingestion: det must be exactly 1; entries are the rounded image.
  static GroupElement from_exact(const RationalMatrix& q);
  // Internal path for products and inverses of already valid elements.
  static GroupElement unchecked(Matrix m, std::optional<RationalMatrix> q = {});
  static GroupElement identity(int n);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  bool has_exact() const { return exact_.has_value(); }
  const RationalMatrix& exact() const { return *exact_; }

  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;
  GroupElement power(int m) const;

  // Stable 64-bit hash of the floating entries; seeds per-element samplers.
  std::uint64_t fingerprint() const;

 private:
  GroupElement(Matrix m, std::optional<RationalMatrix> q)
      : entries_(std::move(m)), exact_(std::move(q)) {}

  Matrix entries_;
  std::optional<RationalMatrix> exact_;
};

// A point of the closed positive Weyl chamber.
class CartanVector {
 public:
  CartanVector() = default;
  // Validates zero sum (1e-9) and monotonicity (1e-12 slack).
  static CartanVector from_coords(const Vector& coords);

  const Vector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_(i); }
  double norm() const { return coords_.norm(); }

 private:
  explicit CartanVector(Vector c) : coords_(std::move(c)) {}
  friend CartanVector make_sorted_cartan(Vector c);

  Vector coords_;
};

// Sorts descending and recentres; for internally produced coordinates.
CartanVector make_sorted_cartan(Vector c);

struct KAKDecomposition {
  Matrix k;
  CartanVector a;
  Matrix l;
};

// Value of the simple root alpha_index (1-based) on a Cartan vector.
struct RootValue {
  int index = 0;
  double value = 0.0;
};

CartanVector cartan_projection(const GroupElement& g);
KAKDecomposition kak_decomposition(const GroupElement& g);
CartanVector jordan_projection(const GroupElement& g);
CartanVector opposition_involution(const CartanVector& h);
std::vector<RootValue> simple_root_values(const CartanVector& h);
double min_root_value(const CartanVector& h);
Vector iwasawa_cocycle(const GroupElement& g, const Flag& f);
double symmetric_space_distance(const GroupElement& g, const GroupElement& h);
bool is_loxodromic(const GroupElement& g, double gap_tol);

// kappa(g^m) computed through renormalised powers of exterior powers, so it
// stays accurate long after g^m itself has overflowed.
CartanVector cartan_projection_power(const GroupElement& g, int m);

// Log-singular values (descending) of an n x n matrix with |det| = 1. Each
// partial sum is read off the top singular value of an exterior power, which
// keeps the small singular values accurate for graded matrices.
Vector unimodular_log_singular_values(const Matrix& m);

// Matrix of k x k minors, rows and columns indexed by k-subsets in
// lexicographic order.
Matrix exterior_power(const Matrix& m, int k);

// Orthogonal matrix with +1 determinant from a sample of the Haar measure on
// O(n), by flipping the last column when needed.
Matrix to_special_orthogonal(Matrix q);

}  // namespace flaglab
