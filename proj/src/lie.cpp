#include "flaglab/lie.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

#include "flaglab/errors.hpp"
#include "flaglab/flag.hpp"

namespace flaglab {

namespace {

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

double minor(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2) {
    return m(rows[0], cols[0]) * m(rows[1], cols[1]) -
           m(rows[0], cols[1]) * m(rows[1], cols[0]);
  }
  Matrix sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
  return sub.partialPivLu().determinant();
}

double spectral_radius(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Matrix> es(m, false);
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

double top_singular_value(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Partial sums s_0 = 0, s_1, ..., s_n = 0 turned into consecutive differences.
Vector differences_of_partial_sums(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size()) - 1;
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = s[i + 1] - s[i];
  return out;
}

void check_finite(const Matrix& m) {
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

}  // namespace

GroupElement GroupElement::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  if (m.rows() < 2) throw InvalidInput("dimension must be at least 2");
  check_finite(m);
  const double det = m.partialPivLu().determinant();
  if (!(std::abs(det - 1.0) <= kDeterminantTolerance))
    throw InvalidInput("determinant " + std::to_string(det) + " differs from 1");
  return GroupElement(m, std::nullopt);
}

GroupElement GroupElement::from_exact(const RationalMatrix& q) {
  if (q.dim() < 2) throw InvalidInput("dimension must be at least 2");
  if (q.determinant() != 1) throw InvalidInput("exact determinant is not 1");
  return GroupElement(q.to_double(), q);
}

GroupElement GroupElement::unchecked(Matrix m, std::optional<RationalMatrix> q) {
  return GroupElement(std::move(m), std::move(q));
}

GroupElement GroupElement::identity(int n) {
  return GroupElement(Matrix::Identity(n, n), RationalMatrix::identity(n));
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (dim() != rhs.dim()) throw InvalidInput("dimension mismatch in product");
  if (has_exact() && rhs.has_exact()) {
    RationalMatrix q = exact() * rhs.exact();
    Matrix m = q.to_double();
    return GroupElement(std::move(m), std::move(q));
  }
  return GroupElement(entries_ * rhs.entries_, std::nullopt);
}

GroupElement GroupElement::inverse() const {
  if (has_exact()) {
    RationalMatrix q = exact().inverse();
    Matrix m = q.to_double();
    return GroupElement(std::move(m), std::move(q));
  }
  if (dim() == 2) {
    Matrix m(2, 2);
    m << entries_(1, 1), -entries_(0, 1), -entries_(1, 0), entries_(0, 0);
    return GroupElement(std::move(m), std::nullopt);
  }
  return GroupElement(entries_.partialPivLu().inverse(), std::nullopt);
}

GroupElement GroupElement::power(int m) const {
  if (m < 0) return inverse().power(-m);
  GroupElement out = identity(dim());
  if (!has_exact()) out.exact_.reset();
  for (int i = 0; i < m; ++i) out = out * *this;
  return out;
}

std::uint64_t GroupElement::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      double x = entries_(i, j);
      if (x == 0.0) x = 0.0;
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      mix(bits);
    }
  }
  return h;
}

CartanVector CartanVector::from_coords(const Vector& coords) {
  if (coords.size() < 2) throw InvalidInput("Cartan vector needs length at least 2");
  if (!coords.allFinite()) throw InvalidInput("Cartan vector has non-finite entries");
  if (std::abs(coords.sum()) > 1e-9) throw InvalidInput("Cartan vector does not sum to zero");
  for (int i = 0; i + 1 < coords.size(); ++i)
    if (coords(i) < coords(i + 1) - 1e-12) throw InvalidInput("Cartan vector is not nonincreasing");
  return CartanVector(coords);
}

CartanVector make_sorted_cartan(Vector c) {
  std::sort(c.data(), c.data() + c.size(), std::greater<double>());
  c.array() -= c.mean();
  return CartanVector(std::move(c));
}

Matrix exterior_power(const Matrix& m, int k) {
  const int n = static_cast<int>(m.rows());
  const auto sets = subsets(n, k);
  const int d = static_cast<int>(sets.size());
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = minor(m, sets[i], sets[j]);
  return out;
}

Vector unimodular_log_singular_values(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> s(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const double top = top_singular_value(exterior_power(m, i));
    if (!(top > 0.0) || !std::isfinite(top)) throw SingularMatrix("matrix is numerically singular");
    s[i] = std::log(top);
  }
  return differences_of_partial_sums(s);
}

CartanVector cartan_projection(const GroupElement& g) {
  return make_sorted_cartan(unimodular_log_singular_values(g.matrix()));
}

KAKDecomposition kak_decomposition(const GroupElement& g) {
  Eigen::JacobiSVD<Matrix> svd(g.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU();
  Matrix v = svd.matrixV();
  if (u.determinant() < 0) {
    u.col(u.cols() - 1) *= -1.0;
    v.col(v.cols() - 1) *= -1.0;
  }
  return {u, cartan_projection(g), v.transpose()};
}

CartanVector jordan_projection(const GroupElement& g) {
  const int n = g.dim();
  std::vector<double> s(n + 1, 0.0);
  for (int i = 1; i < n; ++i) s[i] = std::log(spectral_radius(exterior_power(g.matrix(), i)));
  return make_sorted_cartan(differences_of_partial_sums(s));
}

CartanVector opposition_involution(const CartanVector& h) {
  return CartanVector::from_coords(-h.coords().reverse());
}

std::vector<RootValue> simple_root_values(const CartanVector& h) {
  std::vector<RootValue> out;
  for (int i = 0; i + 1 < h.dim(); ++i) out.push_back({i + 1, h[i] - h[i + 1]});
  return out;
}

double min_root_value(const CartanVector& h) {
  double m = INFINITY;
  for (const auto& r : simple_root_values(h)) m = std::min(m, r.value);
  return m;
}

Vector iwasawa_cocycle(const GroupElement& g, const Flag& f) {
  const Matrix gk = g.matrix() * f.frame();
  const int n = g.dim();
  // |R_11 ... R_ii| is the volume spanned by the first i columns of g k.
  std::vector<double> s(n + 1, 0.0);
  std::vector<int> lead;
  for (int i = 1; i < n; ++i) {
    lead.push_back(i - 1);
    double sq = 0.0;
    for (const auto& rows : subsets(n, i)) {
      const double d = minor(gk, rows, lead);
      sq += d * d;
    }
    s[i] = 0.5 * std::log(sq);
  }
  return differences_of_partial_sums(s);
}

double symmetric_space_distance(const GroupElement& g, const GroupElement& h) {
  return cartan_projection(g.inverse() * h).norm();
}

bool is_loxodromic(const GroupElement& g, double gap_tol) {
  if (!(gap_tol > 0)) throw InvalidInput("gap tolerance must be positive");
  for (const auto& r : simple_root_values(jordan_projection(g)))
    if (!(r.value > gap_tol)) return false;
  return true;
}

CartanVector cartan_projection_power(const GroupElement& g, int m) {
  if (m < 1) throw InvalidInput("power must be positive");
  const int n = g.dim();
  std::vector<double> s(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const Matrix step = exterior_power(g.matrix(), i);
    Matrix acc = step;
    double log_scale = 0.0;
    for (int p = 1; p < m; ++p) {
      acc = acc * step;
      const double big = acc.cwiseAbs().maxCoeff();
      acc /= big;
      log_scale += std::log(big);
    }
    s[i] = log_scale + std::log(top_singular_value(acc));
  }
  return make_sorted_cartan(differences_of_partial_sums(s));
}

Matrix to_special_orthogonal(Matrix q) {
  if (q.determinant() < 0) q.col(q.cols() - 1) *= -1.0;
  return q;
}

}  // namespace flaglab
