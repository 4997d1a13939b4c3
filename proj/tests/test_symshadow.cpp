#include <doctest.h>

#include "fixtures.hpp"
#include "flaglab/errors.hpp"
#include "flaglab/orbit.hpp"
#include "flaglab/symshadow.hpp"

using namespace flaglab;
using namespace fixtures;

namespace {

SymShadowQuery from_origin(const GroupElement& target, double R) {
  return SymShadowQuery::make(GroupElement::identity(target.dim()), target, R);
}

// min over h >= 0 of |kappa(diag(e^-h, e^h) rot(-theta) diag(e^t, e^-t))| by
// a fine scan of h, using the closed-form 2x2 singular values.
double rp1_shadow_distance(double theta, double t) {
  const Matrix m = m2(std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta)) *
                   m2(std::exp(t), 0, 0, std::exp(-t));
  double best = INFINITY;
  for (int i = 0; i <= 200000; ++i) {
    const double h = (t + 2) * i / 200000.0;
    const auto [s1, s2] = singular_values_2x2(m2(std::exp(-h), 0, 0, std::exp(h)) * m);
    (void)s2;
    best = std::min(best, std::sqrt(2.0) * std::log(s1));
  }
  return best;
}

}  // namespace

TEST_CASE("own k-flag and trivial target") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto g = random_sl(3, rng);
    const auto r = sym_shadow_membership(from_origin(g, 0.01), Flag(kak_decomposition(g).k));
    CHECK(r.member);
    CHECK(r.achieved_distance < 1e-6);
    CHECK((r.minimizer.coords() - cartan_projection(g).coords()).norm() < 1e-3);
  }
  const auto id = sym_shadow_membership(from_origin(GroupElement::identity(3), 0.1), random_flag(3, rng));
  CHECK(id.member);
  CHECK(id.achieved_distance < 1e-12);
}

TEST_CASE("flag opposite to the axis is far from the shadow") {
  const auto g = diag2(5.0);
  const auto r = sym_shadow_membership(from_origin(g, 1.0), line_flag(M_PI / 2));
  CHECK_FALSE(r.member);
  CHECK(r.achieved_distance >= 5 * std::sqrt(2.0) - 1e-9);
  CHECK(r.achieved_distance == doctest::Approx(5 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("minimum over the chamber matches a one-dimensional scan on RP1") {
  for (double theta : {0.0, 0.05, 0.3, 0.8, 1.3}) {
    for (double t : {1.0, 3.0}) {
      const auto r = sym_shadow_membership(from_origin(diag2(t), 1.0), line_flag(theta));
      CHECK(r.achieved_distance == doctest::Approx(rp1_shadow_distance(theta, t)).epsilon(1e-4));
    }
  }
}

TEST_CASE("membership is monotone in R") {
  Rng rng(2);
  const auto g = random_sl(3, rng);
  for (int t = 0; t < 20; ++t) {
    const Flag f = perturb_flag(Flag(kak_decomposition(g).k), 0.3, rng);
    const auto small = sym_shadow_membership(from_origin(g, 0.5), f);
    const auto large = sym_shadow_membership(from_origin(g, 1.5), f);
    CHECK(small.achieved_distance == large.achieved_distance);
    if (small.member) CHECK(large.member);
  }
}

TEST_CASE("membership is equivariant under translation") {
  Rng rng(3);
  for (int t = 0; t < 15; ++t) {
    const auto gamma = random_sl(3, rng, 50);
    const auto h = random_sl(3, rng, 50);
    const Flag f = perturb_flag(Flag(kak_decomposition(gamma).k), 0.2, rng);
    const auto direct = sym_shadow_membership(from_origin(gamma, 1.0), f);
    const auto moved = sym_shadow_membership(SymShadowQuery::make(h, h * gamma, 1.0), act_on_flag(h, f));
    // Both runs minimise the same function up to rounding; the minimiser stops
    // at a 1e-6 spread of the simplex, not at the exact minimum.
    CHECK(moved.achieved_distance == doctest::Approx(direct.achieved_distance).epsilon(1e-3));
  }
  CHECK_THROWS_AS(SymShadowQuery::make(GroupElement::identity(2), diag2(1), 0.0), InvalidInput);
}

TEST_CASE("first shadow observation") {
  Rng rng(4);
  const auto g = random_sl(3, rng);
  const auto own = shadow_observation_1(Flag(kak_decomposition(g).k), g, 0.5);
  CHECK(own.holds);
  CHECK(own.lhs < 1e-9);
  CHECK_THROWS_AS(shadow_observation_1(line_flag(M_PI / 2), diag2(5.0), 1.0), MembershipUnverified);

  // Shadows of elements with root values beyond ~30 are narrower than double
  // precision on the flag variety, so the sample stays below that.
  const auto records = enumerate_ball(sanov(), {4, Dedup::Exact, true});
  int members = 0;
  for (const auto& r : records) {
    for (int p = 0; p < 3; ++p) {
      const Flag f = perturb_flag(r.kflag, 0.05 * p, rng);
      if (!sym_shadow_membership(from_origin(r.matrix, 1.0), f).member) continue;
      ++members;
      const auto obs = shadow_observation_1(f, r.matrix, 1.0);
      CHECK(obs.holds);
      CHECK(obs.lhs <= 2.0 + 1e-7);
    }
  }
  CHECK(members >= static_cast<int>(records.size()));
}

TEST_CASE("second shadow observation") {
  const auto g = diag2(5.0);
  const auto same = shadow_observation_2(g, g, 0.5, 10);
  CHECK(same.intersects);
  CHECK(same.distance_bound_holds);
  CHECK(same.distance == doctest::Approx(0.0));

  const auto r = rotation2(M_PI / 2);
  const auto apart = shadow_observation_2(g, r * g * r.inverse(), 0.1, 200);
  CHECK_FALSE(apart.intersects);

  Rng rng(5);
  const auto h = random_sl(3, rng);
  Matrix small = Matrix::Identity(3, 3);
  small(0, 1) = 0.02;
  small(2, 0) = -0.01;
  const auto g2 = h * GroupElement::from_matrix(small);
  const auto close = shadow_observation_2(h, g2, 0.5, 50);
  CHECK(close.intersects);
  CHECK(close.distance_bound_holds);
  CHECK(close.distance < close.bound);
}

TEST_CASE("flag shadows sit inside symmetric-space shadows") {
  const auto g = strong_schottky()[1];
  const std::vector<double> grid = {0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  const auto row = calibrate_shadow_radius(g, 0.1, grid, 100, 0);
  REQUIRE(row.R_min);
  CHECK(row.n == 2);
  CHECK(flag_shadow_in_sym_shadow(g, 0.1, *row.R_min, 100, 0).holds);
  CHECK(flag_shadow_in_sym_shadow(g, 0.1, *row.R_min * 2, 100, 0).holds);

  const auto tiny = flag_shadow_in_sym_shadow(g, 0.1, 0.01, 100, 0);
  CHECK_FALSE(tiny.holds);
  CHECK(tiny.violations > 0);

  const auto vacuous = flag_shadow_in_sym_shadow(g, 0.1, 0.01, 0, 0);
  CHECK(vacuous.holds);
  CHECK(vacuous.vacuous);
  CHECK(vacuous.violations == 0);

  CHECK_THROWS_AS(flag_shadow_in_sym_shadow(diag2(0.1), 0.1, 1.0, 10), NotCertified);
  CHECK_THROWS_AS(flag_shadow_in_sym_shadow(rotation2(0.4), 0.1, 1.0, 10), NotCertified);
}

TEST_CASE("shadows seen from far points approach the shadow from the boundary") {
  // g_t o runs to the boundary point whose opposite flag is the standard one,
  // so O_{R-0.1}(g_t o, p) < O_R(eta, p) < O_{R+0.1}(g_t o, p) for t large.
  Vector u(3);
  u << 1, 0, -1;
  u /= u.norm();
  const double t = 40.0;
  const auto far = GroupElement::unchecked(Matrix((-t * u).array().exp().matrix().asDiagonal()));
  const OppositeFlag eta = OppositeFlag::standard(3);
  Rng rng(6);
  const auto p = random_sl(3, rng, 20);
  const double R = 1.0;
  int inner = 0, middle = 0, violations = 0;
  for (int i = 0; i < 60; ++i) {
    Flag f = i % 2 ? random_flag(3, rng) : perturb_flag(Flag(kak_decomposition(far.inverse() * p).k), 0.5, rng);
    f = i % 2 ? f : act_on_flag(far, f);
    const bool in_small = sym_shadow_membership(SymShadowQuery::make(far, p, R - 0.1), f).member;
    const bool in_eta = boundary_shadow_membership(eta, p, R, f).member;
    const double outer = sym_shadow_membership(SymShadowQuery::make(far, p, R + 0.1), f).achieved_distance;
    inner += in_small;
    middle += in_eta;
    if (in_small && !in_eta) ++violations;
    if (in_eta && !(outer <= R + 0.1)) ++violations;
  }
  CHECK(violations == 0);
  CHECK(inner > 0);
  CHECK(middle > 0);
}
