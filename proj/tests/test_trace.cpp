#include <doctest.h>

#include <cmath>
#include <numbers>

#include "momentlab/errors.hpp"
#include "momentlab/trace.hpp"
#include "support.hpp"

using namespace momentlab;

namespace {

GramForm diag2(double a, double b) { return GramForm::diagonal((Vector(2) << a, b).finished()); }

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("fixtures") {
    const auto r = trace(diag2(1, 4), GramForm::identity(2));
    CHECK(r.value.value() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(r.method == TraceMethod::OrthonormalSum);
    CHECK(trace(GramForm::identity(4), GramForm::identity(4)).value.value() == doctest::Approx(4.0));
    CHECK(trace(GramForm::identity(2), diag2(1, 0)).value.is_infinite());
    CHECK(operator_trace(GramForm::identity(2), diag2(1, 0)).is_infinite());
    // Kernel of q inside the kernel of p: finite.
    CHECK(trace(diag2(1, 0), diag2(4, 0)).value.value() == doctest::Approx(0.25));
  }

  TEST_CASE("scaling, restriction, dominance") {
    const GramForm p = diag2(1, 4), q = GramForm::identity(2);
    CHECK(trace(p.scaled(2), q.scaled(0.5)).value.value() == doctest::Approx(80.0));
    CHECK(trace_scaling_check(p, q, 2, 0.5));
    CHECK(trace_scaling_check(p, q, 1, 1));
    CHECK(trace_restriction_check(p, q, {Vector::Unit(2, 0)}));
    CHECK(trace_restriction_check(p, q, {Vector::Unit(2, 0), Vector::Unit(2, 1)}));
    const auto sub = trace(p.restricted(Vector::Unit(2, 0)), q.restricted(Vector::Unit(2, 0)));
    CHECK(sub.value.value() == doctest::Approx(1.0));
    CHECK(dominance_check(p, q));
    CHECK(dominance_check(q, q));
    CHECK(dominance_check(GramForm::identity(3).scaled(2.5), GramForm::identity(3)));
  }

  TEST_CASE("nuclear tower") {
    const auto t = nuclear_tower(3, 3);
    REQUIRE(t.forms.size() == 3);
    for (std::size_t k = 0; k + 1 < t.forms.size(); ++k)
      CHECK(trace(t.forms[k], t.forms[k + 1]).value.value() == doctest::Approx(49.0 / 36.0).epsilon(1e-14));
    CHECK(trace(nuclear_tower(1, 2).forms[0], nuclear_tower(1, 2).forms[1]).value.value() == doctest::Approx(1.0));
    const auto big = nuclear_tower(100, 2);
    const double v = trace(big.forms[0], big.forms[1]).value.value();
    CHECK(v < std::numbers::pi * std::numbers::pi / 6);
    CHECK(v > 1.63);
  }

  TEST_CASE("basis independence and operator equivalence") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 1 + trial % 12;
      const GramForm p(testing::random_psd(rng, n, 1 + trial % n));
      const GramForm q(testing::random_pd(rng, n));
      const double t = trace(p, q).value.value();
      const auto sys = simultaneous_diagonalize(p, q);
      CHECK(orthonormal_sum(p, sys.vectors) == doctest::Approx(t).epsilon(1e-9));
      // trace(G_q^{-1/2} G_p G_q^{-1/2}) computed independently.
      Eigen::SelfAdjointEigenSolver<Matrix> es(q.gram());
      const Matrix inv_sqrt = es.operatorInverseSqrt();
      CHECK((inv_sqrt * p.gram() * inv_sqrt).trace() == doctest::Approx(t).epsilon(1e-10));
      CHECK(operator_trace(p, q).value() == doctest::Approx(t).epsilon(1e-10));
    }
  }

  TEST_CASE("restriction monotone on random triples") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + trial % 6;
      const GramForm p(testing::random_psd(rng, n, n)), q(testing::random_pd(rng, n));
      std::vector<Vector> w;
      for (int k = 0; k < 1 + trial % (n - 1); ++k) w.push_back(testing::random_vector(rng, n));
      CHECK(trace_restriction_check(p, q, w));
    }
  }
}
