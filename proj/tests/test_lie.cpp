#include <doctest.h>

#include <Eigen/SVD>

#include "fixtures.hpp"
#include "flaglab/errors.hpp"

using namespace flaglab;
using namespace fixtures;

namespace {

Vector log_singular_values_bdc(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().array().log().matrix();
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("cartan projection of diagonal and closed-form 2x2 matrices") {
  CHECK(cartan_projection(GroupElement::identity(3)).coords().norm() == doctest::Approx(0.0));

  const auto g = diag({1.0, 0.0, -1.0});
  CHECK((cartan_projection(g).coords() - vec({1, 0, -1})).norm() < 1e-12);

  const auto swap = GroupElement::from_matrix(m2(0, 2, -0.5, 0));
  CHECK((cartan_projection(swap).coords() - vec({std::log(2.0), -std::log(2.0)})).norm() < 1e-12);

  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto h = random_sl(2, rng);
    const auto [s1, s2] = singular_values_2x2(h.matrix());
    const auto k = cartan_projection(h);
    CHECK(k[0] == doctest::Approx(std::log(s1)).epsilon(1e-10));
    CHECK(k[1] == doctest::Approx(std::log(s2)).epsilon(1e-10));
  }
}

TEST_CASE("cartan projection agrees with a divide-and-conquer SVD") {
  Rng rng(11);
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto g = random_sl(n, rng);
      CHECK((cartan_projection(g).coords() - log_singular_values_bdc(g.matrix())).norm() < 1e-9);
    }
  }
}

TEST_CASE("graded matrices keep their small singular values") {
  Rng rng(3);
  const Matrix l = haar_special_orthogonal(3, rng);
  const Matrix m = diag({30.0, 0.0, -30.0}).matrix() * l;
  CHECK((unimodular_log_singular_values(m) - vec({30, 0, -30})).norm() < 1e-9);
}

TEST_CASE("KAK decomposition reconstructs g with special orthogonal factors") {
  const auto id = kak_decomposition(GroupElement::identity(3));
  CHECK((id.k * id.l - Matrix::Identity(3, 3)).norm() < 1e-12);

  const auto d = kak_decomposition(diag2(2.0));
  CHECK((d.a.coords() - vec({2, -2})).norm() < 1e-12);

  Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 30; ++t) {
      const auto g = random_sl(n, rng);
      const auto kak = kak_decomposition(g);
      const Matrix a = kak.a.coords().array().exp().matrix().asDiagonal();
      CHECK((kak.k * a * kak.l - g.matrix()).norm() < 1e-8 * g.matrix().norm());
      CHECK((kak.k.transpose() * kak.k - Matrix::Identity(n, n)).norm() < 1e-9);
      CHECK((kak.l * kak.l.transpose() - Matrix::Identity(n, n)).norm() < 1e-9);
      CHECK(kak.k.determinant() == doctest::Approx(1.0));
      CHECK(kak.l.determinant() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("jordan projection from eigenvalue moduli") {
  CHECK((jordan_projection(diag({std::log(4.0), 0, -std::log(4.0)})).coords() -
         vec({std::log(4.0), 0, -std::log(4.0)}))
            .norm() < 1e-12);
  CHECK(jordan_projection(rotation2(0.7)).norm() < 1e-12);

  // [[2,1],[1,1]]: eigenvalues (3 +- sqrt 5) / 2.
  const auto g = GroupElement::from_matrix(m2(2, 1, 1, 1));
  const double top = std::log((3 + std::sqrt(5.0)) / 2);
  CHECK((jordan_projection(g).coords() - vec({top, -top})).norm() < 1e-12);
}

TEST_CASE("jordan projection is invariant under conjugation") {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_sl(3, rng);
    const auto h = random_sl(3, rng, 1e3);
    const auto c = h * g * h.inverse();
    CHECK((jordan_projection(c).coords() - jordan_projection(g).coords()).norm() < 1e-6);
  }
}

TEST_CASE("opposition involution") {
  const auto h = opposition_involution(CartanVector::from_coords(vec({2, 0.5, -2.5})));
  CHECK((h.coords() - vec({2.5, -0.5, -2})).norm() < 1e-15);

  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_sl(3, rng);
    CHECK((cartan_projection(g.inverse()).coords() - opposition_involution(cartan_projection(g)).coords()).norm() <
          1e-8);
  }
}

TEST_CASE("simple roots") {
  const auto roots = simple_root_values(CartanVector::from_coords(vec({3, 1, -4})));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].index == 1);
  CHECK(roots[0].value == doctest::Approx(2.0));
  CHECK(roots[1].index == 2);
  CHECK(roots[1].value == doctest::Approx(5.0));
  CHECK(min_root_value(CartanVector::from_coords(vec({3, 1, -4}))) == doctest::Approx(2.0));
}

TEST_CASE("cartan vectors reject non-chamber input") {
  CHECK_THROWS_AS(CartanVector::from_coords(vec({1, 1, 0})), InvalidInput);
  CHECK_THROWS_AS(CartanVector::from_coords(vec({-1, 0, 1})), InvalidInput);
  CHECK_NOTHROW(CartanVector::from_coords(vec({1, 0, -1})));
}

TEST_CASE("inequalities between cartan projections of products") {
  Rng rng(19);
  for (int t = 0; t < 300; ++t) {
    const auto g = random_sl(3, rng);
    const auto h = random_sl(3, rng);
    const double kg = cartan_projection(g).norm();
    CHECK((cartan_projection(g * h).coords() - cartan_projection(h).coords()).norm() <= kg + 1e-7);
    CHECK((cartan_projection(h * g).coords() - cartan_projection(h).coords()).norm() <= kg + 1e-7);
  }
}

TEST_CASE("cartan projection is bi-invariant under SO(n)") {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_sl(3, rng);
    const auto k = GroupElement::unchecked(haar_special_orthogonal(3, rng));
    const auto l = GroupElement::unchecked(haar_special_orthogonal(3, rng));
    CHECK((cartan_projection(k * g * l).coords() - cartan_projection(g).coords()).norm() < 1e-9);
  }
}

TEST_CASE("iwasawa cocycle") {
  const Vector expected = vec({3, -1, -2});
  CHECK((iwasawa_cocycle(diag({3, -1, -2}), Flag::standard(3)) - expected).norm() < 1e-12);

  Rng rng(29);
  const auto k = GroupElement::unchecked(haar_special_orthogonal(3, rng));
  CHECK(iwasawa_cocycle(k, random_flag(3, rng)).norm() < 1e-12);

  for (int t = 0; t < 200; ++t) {
    const auto g = random_sl(3, rng);
    const auto h = random_sl(3, rng);
    const auto f = random_flag(3, rng);
    const Vector lhs = iwasawa_cocycle(g * h, f);
    const Vector rhs = iwasawa_cocycle(g, act_on_flag(h, f)) + iwasawa_cocycle(h, f);
    CHECK((lhs - rhs).norm() < 1e-8);
  }
}

TEST_CASE("symmetric space distance") {
  const auto id = GroupElement::identity(2);
  CHECK(symmetric_space_distance(id, diag2(1.5)) == doctest::Approx(1.5 * std::sqrt(2.0)));
  CHECK(symmetric_space_distance(id, rotation2(0.4)) == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_sl(3, rng);
    const auto h = random_sl(3, rng);
    const auto p = random_sl(3, rng);
    CHECK(symmetric_space_distance(g, h) == doctest::Approx(symmetric_space_distance(h, g)).epsilon(1e-9));
    CHECK(symmetric_space_distance(g, h) <= symmetric_space_distance(g, p) + symmetric_space_distance(p, h) + 1e-9);
  }
}

TEST_CASE("loxodromic test") {
  CHECK(is_loxodromic(diag({1, 0, -1}), 1e-6));
  CHECK_FALSE(is_loxodromic(diag({1, 1, -2}), 1e-6));
  CHECK_FALSE(is_loxodromic(rotation2(0.3), 1e-6));
  CHECK_FALSE(is_loxodromic(GroupElement::from_matrix(m2(1, 1, 0, 1)), 1e-6));
  CHECK_THROWS_AS(is_loxodromic(diag2(1), 0.0), InvalidInput);
}

TEST_CASE("ingestion validation") {
  CHECK_THROWS_AS(GroupElement::from_matrix(m2(2, 0, 0, 1)), InvalidInput);
  CHECK_THROWS_AS(GroupElement::from_matrix(Matrix::Identity(2, 3)), InvalidInput);
  CHECK_THROWS_AS(GroupElement::from_matrix(Matrix::Identity(1, 1)), InvalidInput);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(GroupElement::from_matrix(nan), InvalidInput);
  CHECK_THROWS_AS(exact2(2, 0, 0, 1), InvalidInput);
  CHECK(exact2(Rational(3), 0, 0, Rational(1, 3)).has_exact());
}

TEST_CASE("exact arithmetic survives products and inverses") {
  const auto s = sanov();
  const auto w = s[0] * s[1] * s[0].inverse();
  REQUIRE(w.has_exact());
  CHECK(w.exact().determinant() == Rational(1));
  CHECK((w.matrix() - w.exact().to_double()).norm() < 1e-12);
  CHECK((w * w.inverse()).exact() == RationalMatrix::identity(2));
  CHECK((s[0].power(5).matrix() - m2(1, 10, 0, 1)).norm() < 1e-12);
}

TEST_CASE("exterior powers are multiplicative") {
  Rng rng(37);
  for (int k = 1; k <= 3; ++k) {
    const auto g = random_sl(4, rng);
    const auto h = random_sl(4, rng);
    const Matrix lhs = exterior_power(g.matrix() * h.matrix(), k);
    const Matrix rhs = exterior_power(g.matrix(), k) * exterior_power(h.matrix(), k);
    CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
  }
  CHECK(exterior_power(Matrix::Identity(4, 4), 2).isIdentity());
  CHECK(exterior_power(diag({1, 0, -1}).matrix(), 3)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("cartan projection of powers") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto g = random_sl(3, rng);
    for (int m : {1, 2, 5}) {
      CHECK((cartan_projection_power(g, m).coords() - cartan_projection(g.power(m)).coords()).norm() < 1e-7);
    }
  }
  // Far past overflow of g^m itself.
  const auto d = diag({2, 0, -2});
  CHECK((cartan_projection_power(d, 2000).coords() - vec({4000, 0, -4000})).norm() < 1e-6);
}

TEST_CASE("cartan averages of powers converge to the jordan projection") {
  Rng rng(43);
  int checked = 0;
  while (checked < 20) {
    const auto g = random_sl(3, rng, 1e2);
    if (!is_loxodromic(g, 1e-3)) continue;
    ++checked;
    const Vector lambda = jordan_projection(g).coords();
    const double e64 = (lambda - cartan_projection_power(g, 64).coords() / 64).norm();
    const double e256 = (lambda - cartan_projection_power(g, 256).coords() / 256).norm();
    CHECK(e256 <= e64 / 2 + 1e-12);
  }
}

TEST_CASE("special orthogonal projection") {
  Rng rng(47);
  for (int t = 0; t < 10; ++t) {
    const Matrix q = to_special_orthogonal(haar_orthogonal(3, rng));
    CHECK(q.determinant() == doctest::Approx(1.0));
    CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() < 1e-12);
  }
}
