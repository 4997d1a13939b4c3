#include "flaglab/rational.hpp"

#include <utility>

#include "flaglab/errors.hpp"

namespace flaglab {

using boost::multiprecision::mpz_int;

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_int(text));
    mpz_int num(text.substr(0, slash));
    mpz_int den(text.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in rational '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("cannot parse rational '" + text + "'");
  }
}

std::string to_string(const Rational& q) { return q.str(); }

RationalMatrix::RationalMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  RationalMatrix out(n_);
  Rational acc;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      acc = 0;
      for (int k = 0; k < n_; ++k) acc += (*this)(i, k) * rhs(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const {
  return n_ == rhs.n_ && data_ == rhs.data_;
}

Rational RationalMatrix::determinant() const {
  std::vector<Rational> a = data_;
  Rational det = 1;
  for (int c = 0; c < n_; ++c) {
    int pivot = -1;
    for (int r = c; r < n_; ++r) {
      if (a[r * n_ + c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != c) {
      for (int k = 0; k < n_; ++k) std::swap(a[c * n_ + k], a[pivot * n_ + k]);
      det = -det;
    }
    const Rational p = a[c * n_ + c];
    det *= p;
    for (int r = c + 1; r < n_; ++r) {
      if (a[r * n_ + c] == 0) continue;
      const Rational f = a[r * n_ + c] / p;
      for (int k = c; k < n_; ++k) a[r * n_ + k] -= f * a[c * n_ + k];
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n_);
  for (int c = 0; c < n_; ++c) {
    int pivot = -1;
    for (int r = c; r < n_; ++r) {
      if (a(r, c) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw SingularMatrix("rational matrix is singular");
    if (pivot != c) {
      for (int k = 0; k < n_; ++k) {
        std::swap(a(c, k), a(pivot, k));
        std::swap(inv(c, k), inv(pivot, k));
      }
    }
    const Rational p = a(c, c);
    for (int k = 0; k < n_; ++k) {
      a(c, k) /= p;
      inv(c, k) /= p;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const Rational f = a(r, c);
      for (int k = 0; k < n_; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
  return m;
}

std::string RationalMatrix::key() const {
  std::string out;
  for (size_t i = 0; i < data_.size(); ++i) {
    if (i) out += ',';
    out += data_[i].str();
  }
  return out;
}

}  // namespace flaglab
