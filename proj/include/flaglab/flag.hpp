#pragma once

// Complete flags in R^n held as orthonormal frames. A Flag filters from the
// first column (V_i = span of columns 1..i), an OppositeFlag from the last
// (W_i = span of the last i columns). Frames are never sign-canonicalised;
// every comparison goes through projectors.

#include "flaglab/lie.hpp"

namespace flaglab {

class Flag {
 public:
  Flag() = default;
  // frame must already be orthogonal; use flag_from_frame otherwise.
  explicit Flag(Matrix frame) : frame_(std::move(frame)) {}
  // Validating path for external data (orthogonality within 1e-9).
  static Flag from_orthonormal(const Matrix& frame);
  static Flag standard(int n) { return Flag(Matrix::Identity(n, n)); }

  const Matrix& frame() const { return frame_; }
  int dim() const { return static_cast<int>(frame_.rows()); }

 private:
  Matrix frame_;
};

class OppositeFlag {
 public:
  OppositeFlag() = default;
  explicit OppositeFlag(Matrix frame) : frame_(std::move(frame)) {}
  static OppositeFlag from_orthonormal(const Matrix& frame);
  static OppositeFlag standard(int n) { return OppositeFlag(Matrix::Identity(n, n)); }

  const Matrix& frame() const { return frame_; }
  int dim() const { return static_cast<int>(frame_.rows()); }

 private:
  Matrix frame_;
};

// Orthonormalises the columns in order (positive triangular factor). Rows are
// pivoted by norm first so graded inputs such as g^m k keep their small
// directions.
Flag flag_from_frame(const Matrix& m);
// Same, but orthonormalising from the last column backwards.
OppositeFlag opposite_from_frame(const Matrix& m);

Flag act_on_flag(const GroupElement& g, const Flag& f);
OppositeFlag act_on_flag(const GroupElement& g, const OppositeFlag& f);

// max over levels of the operator norm of the projector difference.
double flag_distance(const Flag& a, const Flag& b);
double opposite_distance(const OppositeFlag& a, const OppositeFlag& b);

// min over i of the smallest singular value of [x_1..x_i | y_{i+1}..y_n].
// Zero exactly on non-transverse pairs, at most 1.
double transversality_margin(const Flag& x, const OppositeFlag& y);

Flag attracting_flag(const GroupElement& g, double gap_tol);
OppositeFlag repelling_flag(const GroupElement& g, double gap_tol);

}  // namespace flaglab
