#include "flaglab/symshadow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

// Fundamental coweights: alpha_i(omega_j) = delta_ij.
Matrix coweights(int n) {
  Matrix w = Matrix::Zero(n, n - 1);
  for (int j = 0; j < n - 1; ++j)
    for (int i = 0; i < n; ++i) w(i, j) = (i <= j ? 1.0 : 0.0) - static_cast<double>(j + 1) / n;
  return w;
}

double objective(const Vector& h, const Matrix& m) {
  const Vector scale = (-h.array()).exp();
  const Matrix scaled = scale.asDiagonal() * m;
  return unimodular_log_singular_values(scaled).norm();
}

struct Simplex {
  Vector best;
  double value;
};

// Reflection / expansion / contraction / shrink over a point set, with every
// trial point passed through project first.
Simplex nelder_mead(const std::function<double(const Vector&)>& f, const std::function<Vector(Vector)>& project,
                    Vector start, double step, int iterations, double tol) {
  const int d = static_cast<int>(start.size());
  std::vector<Vector> pts;
  std::vector<double> vals;
  pts.push_back(project(start));
  for (int i = 0; i < d; ++i) {
    Vector p = start;
    p(i) += step;
    pts.push_back(project(p));
  }
  for (const auto& p : pts) vals.push_back(f(p));
  std::vector<int> idx(d + 1);
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    if (vals[idx[d]] - vals[idx[0]] < tol && it > 0) break;
    Vector centroid = Vector::Zero(d);
    for (int i = 0; i < d; ++i) centroid += pts[idx[i]];
    centroid /= d;
    const Vector& worst = pts[idx[d]];
    const Vector refl = project(centroid + (centroid - worst));
    const double fr = f(refl);
    if (fr < vals[idx[0]]) {
      const Vector exp = project(centroid + 2.0 * (centroid - worst));
      const double fe = f(exp);
      if (fe < fr) {
        pts[idx[d]] = exp;
        vals[idx[d]] = fe;
      } else {
        pts[idx[d]] = refl;
        vals[idx[d]] = fr;
      }
      continue;
    }
    if (fr < vals[idx[d - 1]]) {
      pts[idx[d]] = refl;
      vals[idx[d]] = fr;
      continue;
    }
    const Vector contr = project(centroid + 0.5 * (worst - centroid));
    const double fc = f(contr);
    if (fc < vals[idx[d]]) {
      pts[idx[d]] = contr;
      vals[idx[d]] = fc;
      continue;
    }
    for (int i = 1; i <= d; ++i) {
      pts[idx[i]] = project(pts[idx[0]] + 0.5 * (pts[idx[i]] - pts[idx[0]]));
      vals[idx[i]] = f(pts[idx[i]]);
    }
  }
  int b = 0;
  for (int i = 1; i <= d; ++i)
    if (vals[i] < vals[b]) b = i;
  return {pts[b], vals[b]};
}

std::vector<Vector> ray_directions(const Vector& preferred, int count) {
  const int d = static_cast<int>(preferred.size());
  std::vector<Vector> rays;
  auto add = [&](Vector v) {
    if (static_cast<int>(rays.size()) >= count || !(v.norm() > 0)) return;
    v /= v.norm();
    for (const auto& r : rays)
      if ((r - v).norm() < 1e-12) return;
    rays.push_back(v);
  };
  add(preferred);
  add(Vector::Ones(d));
  for (int j = 0; j < d; ++j) add(Vector::Unit(d, j));
  for (int j = 0; j + 1 < d; ++j) {
    Vector v = Vector::Zero(d);
    v(j) = v(j + 1) = 1.0;
    add(v);
  }
  for (int j = 0; j < d && static_cast<int>(rays.size()) < count; ++j) {
    Vector v = Vector::Ones(d);
    v(j) = 3.0;
    add(v);
  }
  if (rays.empty()) rays.push_back(Vector::Ones(d) / std::sqrt(static_cast<double>(d)));
  return rays;
}

MembershipResult minimise_over_chamber(const Matrix& m, double R, const MinimizerOptions& opt) {
  const int n = static_cast<int>(m.rows());
  const Matrix w = coweights(n);
  const CartanVector target_kappa = make_sorted_cartan(unimodular_log_singular_values(m));
  Vector target_roots(n - 1);
  for (int i = 0; i < n - 1; ++i) target_roots(i) = target_kappa[i] - target_kappa[i + 1];

  auto to_h = [&](const Vector& c) -> Vector { return w * c; };
  auto f = [&](const Vector& c) { return objective(to_h(c), m); };
  auto project = [](Vector c) { return Vector(c.cwiseMax(0.0)); };

  const double scale = target_kappa.norm();
  Vector best_c = Vector::Zero(n - 1);
  double best = f(best_c);
  for (const Vector& dir : ray_directions(target_roots, opt.rays)) {
    // Directions are unit in H, so radius j/16 * |kappa| lands on kappa itself
    // along the preferred ray.
    const Vector unit_c = dir / to_h(dir).norm();
    for (int j = 1; j < opt.radii; ++j) {
      const Vector c = unit_c * (scale * j / 16.0);
      const double v = f(c);
      if (v < best) {
        best = v;
        best_c = c;
      }
    }
  }
  if (best > opt.tolerance && opt.refine_iterations > 0) {
    const double step = std::max(scale / 16.0, 0.05);
    const Simplex s = nelder_mead(f, project, best_c, step, opt.refine_iterations, opt.tolerance);
    if (s.value < best) {
      best = s.value;
      best_c = s.best;
    }
  }
  MembershipResult out;
  out.achieved_distance = best;
  out.member = best <= R;
  out.minimizer = make_sorted_cartan(to_h(best_c));
  return out;
}

Vector intersection_line(const Matrix& a, const Matrix& b) {
  Matrix joined(a.rows(), a.cols() + b.cols());
  joined << a, -b;
  Eigen::JacobiSVD<Matrix> svd(joined, Eigen::ComputeFullV);
  const Vector coeff = svd.matrixV().col(joined.cols() - 1);
  Vector v = a * coeff.head(a.cols());
  return v / v.norm();
}

}  // namespace

SymShadowQuery SymShadowQuery::make(GroupElement base, GroupElement target, double R) {
  if (!(R > 0.0)) throw InvalidInput("shadow radius must be positive");
  if (base.dim() != target.dim()) throw InvalidInput("dimension mismatch in shadow query");
  return {std::move(base), std::move(target), R};
}

MembershipResult sym_shadow_membership(const SymShadowQuery& query, const Flag& f, const MinimizerOptions& options) {
  if (!(query.R > 0.0)) throw InvalidInput("shadow radius must be positive");
  const GroupElement base_inv = query.base.inverse();
  const Matrix relative = (base_inv * query.target).matrix();
  const Flag local = act_on_flag(base_inv, f);
  return minimise_over_chamber(local.frame().transpose() * relative, query.R, options);
}

ObservationOne shadow_observation_1(const Flag& f, const GroupElement& gamma, double R) {
  const auto q = SymShadowQuery::make(GroupElement::identity(gamma.dim()), gamma, R);
  if (!sym_shadow_membership(q, f).member)
    throw MembershipUnverified("flag is not confirmed to lie in O_R(o, gamma o)");
  const CartanVector k = cartan_projection(gamma);
  const Vector scale = (-k.coords().array()).exp();
  const Matrix m = scale.asDiagonal() * (f.frame().transpose() * gamma.matrix());
  ObservationOne out;
  out.lhs = unimodular_log_singular_values(m).norm();
  out.bound = 2 * R;
  out.holds = out.lhs <= out.bound + 1e-7;
  return out;
}

ObservationTwo shadow_observation_2(const GroupElement& g1, const GroupElement& g2, double R, int probe_budget,
                                    std::uint64_t seed) {
  if (!(R > 0.0)) throw InvalidInput("shadow radius must be positive");
  const int n = g1.dim();
  const auto q1 = SymShadowQuery::make(GroupElement::identity(n), g1, R);
  const auto q2 = SymShadowQuery::make(GroupElement::identity(n), g2, R);
  Rng rng(g1.fingerprint() ^ Rng::splitmix(g2.fingerprint()), seed);
  const Flag k1(kak_decomposition(g1).k), k2(kak_decomposition(g2).k);
  ObservationTwo out;
  for (int p = 0; p < probe_budget && !out.intersects; ++p) {
    Flag probe;
    if (p == 0)
      probe = k1;
    else if (p == 1)
      probe = k2;
    else if (p % 3 == 0)
      probe = random_flag(n, rng);
    else
      probe = perturb_flag(p % 3 == 1 ? k1 : k2, R * rng.uniform(), rng);
    if (sym_shadow_membership(q1, probe).member && sym_shadow_membership(q2, probe).member) out.intersects = true;
  }
  out.distance = symmetric_space_distance(g1, g2);
  out.bound = 4 * R + (cartan_projection(g1).coords() - cartan_projection(g2).coords()).norm();
  if (out.intersects) out.distance_bound_holds = out.distance <= out.bound + 1e-6;
  return out;
}

InclusionReport flag_shadow_in_sym_shadow(const GroupElement& g, double epsilon, double R, int probe_budget,
                                          std::uint64_t seed) {
  if (!(R > 0.0)) throw InvalidInput("shadow radius must be positive");
  if (probe_budget < 0) throw InvalidInput("probe budget must be nonnegative");
  SamplingBudget budget;
  budget.seed = seed;
  ContractionCertificate cert;
  try {
    cert = check_contracting(g, 2 * epsilon, budget);
  } catch (const NotLoxodromic& e) {
    throw NotCertified(std::string("element is not loxodromic: ") + e.what());
  }
  if (!cert.pass) throw NotCertified("element is not 2 epsilon-contracting");
  InclusionReport out;
  out.probes = probe_budget;
  out.vacuous = probe_budget == 0;
  if (out.vacuous) return out;
  Rng rng(g.fingerprint(), Rng::splitmix(seed + 1));
  const auto q = SymShadowQuery::make(GroupElement::identity(g.dim()), g, R);
  for (const auto& f : draw_region_samples(cert.repelling, 2 * epsilon, probe_budget, rng))
    if (!sym_shadow_membership(q, act_on_flag(g, f)).member) ++out.violations;
  out.holds = out.violations == 0;
  return out;
}

CalibrationRow calibrate_shadow_radius(const GroupElement& g, double epsilon, const std::vector<double>& grid,
                                       int probe_budget, std::uint64_t seed) {
  CalibrationRow row;
  row.epsilon = epsilon;
  row.n = g.dim();
  row.probes = probe_budget;
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  for (double R : sorted) {
    if (flag_shadow_in_sym_shadow(g, epsilon, R, probe_budget, seed).holds) {
      row.R_min = R;
      break;
    }
  }
  return row;
}

MembershipResult boundary_shadow_membership(const OppositeFlag& eta, const GroupElement& target, double R,
                                            const Flag& f) {
  if (!(R > 0.0)) throw InvalidInput("shadow radius must be positive");
  const int n = f.dim();
  MembershipResult out;
  out.achieved_distance = INFINITY;
  out.minimizer = make_sorted_cartan(Vector::Zero(n));
  if (transversality_margin(f, eta) <= 1e-10) return out;
  Matrix g0(n, n);
  for (int i = 1; i <= n; ++i)
    g0.col(i - 1) = intersection_line(f.frame().leftCols(i), eta.frame().rightCols(n - i + 1));
  g0 /= std::pow(std::abs(g0.determinant()), 1.0 / n);
  const Matrix m = g0.partialPivLu().solve(target.matrix());
  auto fn = [&](const Vector& h_free) {
    Vector h(n);
    h.head(n - 1) = h_free;
    h(n - 1) = -h_free.sum();
    return objective(h, m);
  };
  Vector start(n - 1);
  Vector rows(n);
  for (int i = 0; i < n; ++i) rows(i) = std::log(m.row(i).norm());
  rows.array() -= rows.mean();
  start = rows.head(n - 1);
  const auto s = nelder_mead(fn, [](Vector v) { return v; }, start, 0.5, 2000, 1e-12);
  out.achieved_distance = s.value;
  out.member = s.value <= R;
  Vector h(n);
  h.head(n - 1) = s.best;
  h(n - 1) = -s.best.sum();
  out.minimizer = make_sorted_cartan(h);
  return out;
}

}  // namespace flaglab
