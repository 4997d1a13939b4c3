#pragma once

// Shared matrices for the test binaries, and closed-form reference values
// computed independently of the library (no call into flaglab numerics).

#include <algorithm>
#include <cmath>
#include <vector>

#include "flaglab/contraction.hpp"
#include "flaglab/rational.hpp"

namespace fixtures {

using flaglab::GroupElement;
using flaglab::Matrix;
using flaglab::Rational;
using flaglab::RationalMatrix;
using flaglab::Vector;

inline Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline GroupElement diag2(double a) { return GroupElement::from_matrix(m2(std::exp(a), 0, 0, std::exp(-a))); }

inline GroupElement rotation2(double theta) {
  return GroupElement::from_matrix(m2(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)));
}

inline GroupElement diag(const std::vector<double>& logs) {
  Matrix m = Matrix::Zero(logs.size(), logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) m(i, i) = std::exp(logs[i]);
  return GroupElement::unchecked(m);
}

inline RationalMatrix q2(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  RationalMatrix q(2);
  q(0, 0) = a;
  q(0, 1) = b;
  q(1, 0) = c;
  q(1, 1) = d;
  return q;
}

inline GroupElement exact2(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  return GroupElement::from_exact(q2(a, b, c, d));
}

// Rational rotation r = [[4,-3],[3,4]]/5 (angle atan(3/4)).
inline RationalMatrix rational_rotation() { return q2(Rational(4, 5), Rational(-3, 5), Rational(3, 5), Rational(4, 5)); }

// {diag(s, 1/s), r diag(s, 1/s) r^T} with exact entries.
inline std::vector<GroupElement> schottky_pair(int s) {
  const RationalMatrix d = q2(Rational(s), 0, 0, Rational(1, s));
  const RationalMatrix r = rational_rotation();
  RationalMatrix rt = r;
  rt(0, 1) = r(1, 0);
  rt(1, 0) = r(0, 1);
  return {GroupElement::from_exact(d), GroupElement::from_exact(r * d * rt)};
}

inline std::vector<GroupElement> weak_schottky() { return schottky_pair(5); }
inline std::vector<GroupElement> strong_schottky() { return schottky_pair(125); }

inline std::vector<GroupElement> sanov() { return {exact2(1, 2, 0, 1), exact2(1, 0, 2, 1)}; }

// Closed-form helpers on RP^1: a line is an angle theta mod pi.
inline flaglab::Flag line_flag(double theta) {
  return flaglab::Flag(m2(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)));
}

// Opposite flag whose one-dimensional piece W_1 is the line at angle theta.
inline flaglab::OppositeFlag opposite_line(double theta) {
  return flaglab::OppositeFlag(m2(-std::sin(theta), std::cos(theta), std::cos(theta), std::sin(theta)));
}

inline double line_distance(double a, double b) { return std::abs(std::sin(a - b)); }

// Margin of the pair (line a, opposite line b) in R^2: smallest singular
// value of [u_a | u_b], i.e. sqrt(1 - |cos(a - b)|).
inline double line_margin(double a, double b) { return std::sqrt(1.0 - std::abs(std::cos(a - b))); }

// Image of the line at angle theta under diag(e^t, e^-t).
inline double diag_image_angle(double t, double theta) {
  return std::atan2(std::exp(-t) * std::sin(theta), std::exp(t) * std::cos(theta));
}

// Derivative of that map on angles.
inline double diag_derivative(double t, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return 1.0 / (std::exp(2 * t) * c * c + std::exp(-2 * t) * s * s);
}

// Singular values of a 2x2 matrix from its invariants.
inline std::pair<double, double> singular_values_2x2(const Matrix& m) {
  const double f = m.squaredNorm();
  const double d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::sqrt(std::max(0.0, f * f / 4 - d * d));
  return {std::sqrt(f / 2 + disc), std::sqrt(f / 2 - disc)};
}

// Angles of the lines allowed by zeta(line, y) >= eps when W_1(y) is the
// vertical line: |sin theta| <= 1 - eps^2.
inline std::vector<double> admissible_angles(double eps, int count) {
  const double edge = std::asin(1.0 - eps * eps);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(-edge + 2 * edge * i / (count - 1));
  return out;
}

// Sup of the image distance to e_1 and of the sine-metric Lipschitz ratio of
// diag(e^t, e^-t) on the admissible set, by dense evaluation of the
// closed-form action.
inline std::pair<double, double> rp1_contraction_oracle(double t, double eps) {
  const auto thetas = admissible_angles(eps, 1201);
  double radius = 0.0, ratio = 0.0;
  for (double a : thetas) {
    radius = std::max(radius, line_distance(diag_image_angle(t, a), 0.0));
    ratio = std::max(ratio, diag_derivative(t, a));
  }
  for (std::size_t i = 0; i < thetas.size(); i += 7)
    for (std::size_t j = i + 1; j < thetas.size(); j += 7) {
      const double d = line_distance(thetas[i], thetas[j]);
      if (d > 1e-9)
        ratio = std::max(ratio, line_distance(diag_image_angle(t, thetas[i]), diag_image_angle(t, thetas[j])) / d);
    }
  return {radius, ratio};
}

}  // namespace fixtures
