#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

namespace flaglab {

using Rational = boost::multiprecision::mpq_rational;

// Parses "p", "p/q" or "-p/q" into a canonical rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Dense square matrix over Q, row-major. Entries are kept canonical by GMP, so
// equality and the canonical key are exact.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n);
  static RationalMatrix identity(int n);

  int dim() const { return n_; }
  Rational& operator()(int i, int j) { return data_[i * n_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[i * n_ + j]; }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  bool operator==(const RationalMatrix& rhs) const;

  Rational determinant() const;
  RationalMatrix inverse() const;
  Eigen::MatrixXd to_double() const;

  // Canonical text form, usable as a hash key.
  std::string key() const;

 private:
  int n_ = 0;
  std::vector<Rational> data_;
};

}  // namespace flaglab
