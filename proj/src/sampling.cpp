#include "flaglab/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace flaglab {

std::uint64_t Rng::splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix haar_orthogonal(int n, Rng& rng) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

Matrix haar_special_orthogonal(int n, Rng& rng) { return to_special_orthogonal(haar_orthogonal(n, rng)); }

Flag random_flag(int n, Rng& rng) { return Flag(haar_orthogonal(n, rng)); }

OppositeFlag random_opposite_flag(int n, Rng& rng) { return OppositeFlag(haar_orthogonal(n, rng)); }

Flag perturb_flag(const Flag& f, double size, Rng& rng) {
  const int n = f.dim();
  Matrix skew = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      skew(i, j) = rng.normal();
      skew(j, i) = -skew(i, j);
    }
  skew *= size / std::max(skew.norm(), 1e-300);
  // Cayley transform keeps the result orthogonal.
  const Matrix id = Matrix::Identity(n, n);
  const Matrix rot = (id - 0.5 * skew).partialPivLu().solve(id + 0.5 * skew);
  return flag_from_frame(rot * f.frame());
}

GroupElement random_sl(int n, Rng& rng, double cond_cap) {
  for (;;) {
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) z(i, j) = rng.normal();
    Eigen::JacobiSVD<Matrix> svd(z);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) <= 0 || sv(0) / sv(n - 1) > cond_cap) continue;
    double det = z.partialPivLu().determinant();
    if (det < 0) {
      z.row(0) *= -1.0;
      det = -det;
    }
    z /= std::pow(det, 1.0 / n);
    return GroupElement::unchecked(z);
  }
}

}  // namespace flaglab
