#include <doctest.h>

#include <cmath>

#include "momentlab/errors.hpp"
#include "momentlab/seminorm.hpp"
#include "support.hpp"

using namespace momentlab;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }
GramForm diag2(double a, double b) { return GramForm::diagonal(vec2(a, b)); }

}  // namespace

TEST_SUITE("seminorm") {
  TEST_CASE("evaluate") {
    CHECK(evaluate(GramForm::identity(2), vec2(3, 4)) == doctest::Approx(5.0));
    CHECK(evaluate(diag2(1, 0), vec2(0, 7)) == 0.0);
    CHECK(evaluate(diag2(1, 4), vec2(1, 1)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  }

  TEST_CASE("construction rejects bad Gram matrices") {
    Matrix asym(2, 2);
    asym << 1, 2, 0, 1;
    CHECK_THROWS_AS(GramForm{asym}, Error);
    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1;
    try {
      GramForm g(neg);
      FAIL("expected NotPSD");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotPSD);
    }
  }

  TEST_CASE("polarize") {
    CHECK(polarize(GramForm::identity(2), vec2(1, 0), vec2(0, 1)) == doctest::Approx(0.0));
    CHECK(polarize(GramForm::identity(2), vec2(1, 0), vec2(1, 0)) == doctest::Approx(1.0));
    CHECK(polarize(diag2(1, 4), vec2(1, 1), vec2(1, -1)) == doctest::Approx(-3.0));
  }

  TEST_CASE("kernel_basis") {
    CHECK(kernel_basis(GramForm::identity(2)).empty());
    const auto k = kernel_basis(diag2(1, 0));
    REQUIRE(k.size() == 1);
    CHECK(std::abs(k[0](1)) == doctest::Approx(1.0));
    const auto k2 = kernel_basis(GramForm(Matrix::Ones(2, 2)));
    REQUIRE(k2.size() == 1);
    CHECK(std::abs(k2[0](0)) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(k2[0](0) == doctest::Approx(-k2[0](1)));
  }

  TEST_CASE("dual_norm") {
    CHECK(dual_norm(GramForm::identity(2), vec2(3, 4)).value() == doctest::Approx(5.0));
    CHECK(dual_norm(diag2(1, 0), vec2(0, 1)).is_infinite());
    CHECK(dual_norm(diag2(4, 1), vec2(1, 0)).value() == doctest::Approx(0.5));
    CHECK(is_continuous(diag2(1, 0), vec2(2, 0)));
    CHECK_FALSE(is_continuous(diag2(1, 0), vec2(2, 1e-3)));
  }

  TEST_CASE("gram_schmidt") {
    auto s = gram_schmidt(GramForm::identity(2), {vec2(1, 0), vec2(1, 1)});
    REQUIRE(s.size() == 2);
    CHECK((s.vector(1) - vec2(0, 1)).norm() < 1e-14);
    CHECK(s.complete);

    s = gram_schmidt(diag2(1, 0), {vec2(0, 1)});
    CHECK(s.size() == 0);
    CHECK(s.dropped.size() == 1);

    s = gram_schmidt(diag2(1, 4), {vec2(1, 0), vec2(0, 1)});
    REQUIRE(s.size() == 2);
    CHECK((s.vector(0) - vec2(1, 0)).norm() < 1e-14);
    CHECK((s.vector(1) - vec2(0, 0.5)).norm() < 1e-14);
  }

  TEST_CASE("simultaneous_diagonalize") {
    auto s = simultaneous_diagonalize(diag2(1, 4), GramForm::identity(2));
    REQUIRE(s.size() == 2);
    // Sorted by decreasing p: e2 first.
    CHECK(std::abs(s.vector(0)(1)) == doctest::Approx(1.0));
    CHECK(std::abs(s.vector(1)(0)) == doctest::Approx(1.0));

    s = simultaneous_diagonalize(GramForm(Matrix::Ones(2, 2)), GramForm::identity(2));
    const double r = 1 / std::sqrt(2.0);
    CHECK(std::abs(s.vector(0)(0)) == doctest::Approx(r));
    CHECK(s.vector(0)(0) == doctest::Approx(s.vector(0)(1)));
    CHECK(s.vector(1)(0) == doctest::Approx(-s.vector(1)(1)));

    CHECK_THROWS_AS(simultaneous_diagonalize(GramForm::identity(2), diag2(1, 0)), Error);
  }

  TEST_CASE("properties on random forms") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 6;
      const GramForm p(testing::random_psd(rng, n, 1 + trial % n));
      const GramForm q(testing::random_pd(rng, n));
      const Vector v = testing::random_vector(rng, n), w = testing::random_vector(rng, n);
      // Triangle inequality and parallelogram law.
      CHECK(p(v + w) <= p(v) + p(w) + 1e-9);
      const double lhs = p.quadratic(v + w) + p.quadratic(v - w);
      CHECK(lhs == doctest::Approx(2 * p.quadratic(v) + 2 * p.quadratic(w)).epsilon(1e-9));
      CHECK(p(3.5 * v) == doctest::Approx(3.5 * p(v)).epsilon(1e-12));

      const auto sys = simultaneous_diagonalize(p, q);
      CHECK(sys.complete);
      CHECK(sys.orthonormality_error() < 1e-10);
      const Matrix pg = sys.vectors.transpose() * p.gram() * sys.vectors;
      CHECK((pg - Matrix(pg.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, pg.maxCoeff()));

      // |l(v)| <= q'(l) q(v).
      const Vector l = testing::random_vector(rng, n);
      CHECK(std::abs(l.dot(v)) <= dual_norm(q, l).value() * q(v) * (1 + 1e-12) + 1e-12);
    }
  }
}
