#include "flaglab/flag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

void check_orthonormal(const Matrix& frame) {
  if (frame.rows() != frame.cols() || frame.rows() < 2) throw InvalidInput("flag frame must be square, n >= 2");
  if (!frame.allFinite()) throw InvalidInput("flag frame has non-finite entries");
  const Matrix defect = frame.transpose() * frame - Matrix::Identity(frame.rows(), frame.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-9) throw InvalidInput("flag frame is not orthogonal");
}

// Row-equilibrated rank test: row scaling preserves rank but removes the
// grading that would make g^m k look singular.
void check_rank(const Matrix& m) {
  if (!m.allFinite()) throw RankDeficient("frame has non-finite entries");
  Matrix scaled = m;
  for (int i = 0; i < m.rows(); ++i) {
    const double r = m.row(i).norm();
    if (r == 0.0) throw RankDeficient("frame has a zero row");
    scaled.row(i) /= r;
  }
  Eigen::JacobiSVD<Matrix> svd(scaled);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw RankDeficient("frame is numerically rank deficient");
}

// The rank test is for external frames only: g F is invertible whenever F is,
// however ill-conditioned the product looks.
Matrix orthonormalise_columns(const Matrix& m, bool checked = true) {
  if (checked)
    check_rank(m);
  else if (!m.allFinite())
    throw RankDeficient("frame has non-finite entries");
  const int n = static_cast<int>(m.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) norms[i] = m.row(i).cwiseAbs().maxCoeff();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b]; });
  Matrix permuted(n, m.cols());
  for (int i = 0; i < n; ++i) permuted.row(i) = m.row(order[i]);
  Eigen::HouseholderQR<Matrix> qr(permuted);
  Matrix q = qr.householderQ() * Matrix::Identity(n, m.cols());
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  Matrix out(n, m.cols());
  for (int i = 0; i < n; ++i) out.row(order[i]) = q.row(i);
  return out;
}

double subspace_gap(const Matrix& a, const Matrix& b) {
  const Matrix diff = b - a * (a.transpose() * b);
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()(0);
}

double min_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Real eigenvectors of g ordered by decreasing modulus; g must be loxodromic.
Matrix ordered_eigenvectors(const Matrix& g) {
  Eigen::EigenSolver<Matrix> es(g, true);
  const int n = static_cast<int>(g.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) out.col(j) = es.eigenvectors().col(order[j]).real();
  return out;
}

void require_loxodromic(const GroupElement& g, double gap_tol) {
  if (!is_loxodromic(g, gap_tol))
    throw NotLoxodromic("element is not loxodromic at gap tolerance " + std::to_string(gap_tol));
}

}  // namespace

Flag Flag::from_orthonormal(const Matrix& frame) {
  check_orthonormal(frame);
  return Flag(frame);
}

OppositeFlag OppositeFlag::from_orthonormal(const Matrix& frame) {
  check_orthonormal(frame);
  return OppositeFlag(frame);
}

Flag flag_from_frame(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("frame must be square");
  return Flag(orthonormalise_columns(m));
}

OppositeFlag opposite_from_frame(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("frame must be square");
  const Matrix reversed = m.rowwise().reverse();
  return OppositeFlag(orthonormalise_columns(reversed).rowwise().reverse());
}

Flag act_on_flag(const GroupElement& g, const Flag& f) {
  return Flag(orthonormalise_columns(g.matrix() * f.frame(), false));
}

OppositeFlag act_on_flag(const GroupElement& g, const OppositeFlag& f) {
  const Matrix reversed = (g.matrix() * f.frame()).rowwise().reverse();
  return OppositeFlag(orthonormalise_columns(reversed, false).rowwise().reverse());
}

double flag_distance(const Flag& a, const Flag& b) {
  double d = 0.0;
  for (int i = 1; i < a.dim(); ++i) d = std::max(d, subspace_gap(a.frame().leftCols(i), b.frame().leftCols(i)));
  return std::min(d, 1.0);
}

double opposite_distance(const OppositeFlag& a, const OppositeFlag& b) {
  double d = 0.0;
  for (int i = 1; i < a.dim(); ++i)
    d = std::max(d, subspace_gap(a.frame().rightCols(i), b.frame().rightCols(i)));
  return std::min(d, 1.0);
}

double transversality_margin(const Flag& x, const OppositeFlag& y) {
  const int n = x.dim();
  double z = 1.0;
  Matrix joined(n, n);
  for (int i = 1; i < n; ++i) {
    joined.leftCols(i) = x.frame().leftCols(i);
    joined.rightCols(n - i) = y.frame().rightCols(n - i);
    z = std::min(z, min_singular_value(joined));
  }
  return std::max(z, 0.0);
}

Flag attracting_flag(const GroupElement& g, double gap_tol) {
  require_loxodromic(g, gap_tol);
  return flag_from_frame(ordered_eigenvectors(g.matrix()));
}

OppositeFlag repelling_flag(const GroupElement& g, double gap_tol) {
  require_loxodromic(g, gap_tol);
  // Eigenvectors of g^{-1} by decreasing modulus are those of g by increasing
  // modulus, so they fill the frame from the last column backwards.
  const Matrix inv = g.inverse().matrix();
  return opposite_from_frame(ordered_eigenvectors(inv).rowwise().reverse());
}

}  // namespace flaglab
