#include <doctest.h>

#include <cmath>

#include "momentlab/errors.hpp"
#include "momentlab/gaussian.hpp"
#include "momentlab/rng.hpp"
#include "momentlab/trace.hpp"
#include "support.hpp"

using namespace momentlab;

namespace {

constexpr double kTailAtOne = 0.31731050786291415;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("philox known answers") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32(0)(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    const std::uint64_t pi_key = 0xa4093822ull | (0x299f31d0ull << 32);
    CHECK(Philox4x32(pi_key)(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    CHECK(Philox4x32(~0ull)(C{~0u, ~0u, ~0u, ~0u}) == C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  }

  TEST_CASE("sampling is deterministic and independent of threads") {
    const GaussianMeasure g(GramForm::diagonal(vec({4, 1})));
    McConfig cfg{42, 20000, 8};
    set_worker_threads(1);
    const Matrix a = g.sample(cfg);
    set_worker_threads(4);
    const Matrix b = g.sample(cfg);
    CHECK(a == b);
    auto f = [](const Vector& v) { return v(0) * v(0); };
    const auto e1 = mc_mean(g, cfg, f);
    set_worker_threads(1);
    const auto e2 = mc_mean(g, cfg, f);
    CHECK(e1.estimate == e2.estimate);
    CHECK(e1.std_error == e2.std_error);
    // Var(v1) = 1/4 under q = diag(4, 1).
    CHECK(std::abs(e1.estimate - 0.25) <= 4 * e1.std_error);
    cfg.seed = 43;
    CHECK(g.sample(cfg) != a);
  }

  TEST_CASE("second moments") {
    const GaussianMeasure g1(GramForm::identity(1));
    const auto r = second_moment_check(g1, vec({1}), {1, 1000000, 8});
    CHECK(r.exact == 1.0);
    CHECK(r.within);
    const auto r3 = second_moment_check(g1, vec({3}), {2, 100000, 8});
    CHECK(r3.within);

    const GaussianMeasure g2(GramForm::identity(2));
    const auto cross = mc_mean(g2, {3, 200000, 8}, [](const Vector& v) { return v(0) * v(1); });
    CHECK(std::abs(cross.estimate) <= 4 * cross.std_error);

    std::mt19937_64 rng(1);
    const GaussianMeasure g5(GramForm(testing::random_pd(rng, 5)));
    CHECK(second_moment_check(g5, testing::random_vector(rng, 5), {4, 1000000, 8}).within);

    try {
      second_moment_check(GaussianMeasure(GramForm::identity(2)), vec({0, 0}), {0, 100, 1});
      FAIL("expected ZeroNormDirection");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroNormDirection);
    }
  }

  TEST_CASE("singular forms") {
    try {
      GaussianMeasure g(GramForm::diagonal(vec({1, 0})));
      FAIL("expected SingularForm");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularForm);
    }
    const GaussianMeasure g(GramForm::diagonal(vec({1, 0})), true);
    CHECK(g.rank() == 1);
  }

  TEST_CASE("distribution law") {
    std::mt19937_64 rng(7);
    const Matrix qm = testing::random_pd(rng, 4);
    const GaussianMeasure g{GramForm(qm)};
    const Vector l = testing::random_vector(rng, 4);
    const double sigma = dual_norm(g.form(), l).value();
    const Matrix s = g.sample({99, 100000, 8});
    std::vector<double> xs;
    for (Eigen::Index j = 0; j < s.cols(); ++j) xs.push_back(l.dot(s.col(j)));
    CHECK(testing::ks_normal_pvalue(xs, sigma) > 1e-3);
    // The wrong scale is rejected.
    CHECK(testing::ks_normal_pvalue(xs, 1.1 * sigma) < 1e-3);
  }

  TEST_CASE("kolmogorov helper matches reference values") {
    CHECK(testing::kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
    CHECK(testing::kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-12));
    CHECK(testing::kolmogorov_sf(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-10));
  }

  TEST_CASE("tail lower bound") {
    const auto r = tail_lower_bound_check(GaussianMeasure(GramForm::identity(1)), DualFunctional{vec({1})});
    CHECK(std::abs(r.exact - kTailAtOne) < 1e-15);
    CHECK(r.ok);
    CHECK(r.bound == doctest::Approx(1.0 / 7));

    std::mt19937_64 rng(3);
    const GramForm q7(testing::random_pd(rng, 7));
    Vector l = testing::random_vector(rng, 7);
    l /= dual_norm(q7, l).value();
    const auto r7 = tail_lower_bound_check(GaussianMeasure(q7), DualFunctional{l});
    CHECK(std::abs(r7.exact - kTailAtOne) < 1e-9);

    const auto far = tail_lower_bound_check(GaussianMeasure(GramForm::identity(1)), DualFunctional{vec({1e8})});
    CHECK(far.exact == doctest::Approx(1.0).epsilon(1e-7));

    try {
      tail_lower_bound_check(GaussianMeasure(GramForm::identity(1)), DualFunctional{vec({0.5})});
      FAIL("expected NotInScope");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInScope);
    }
    CHECK(normal_two_sided_tail(10.0) == doctest::Approx(1.523970604832094e-23).epsilon(1e-9));
  }

  TEST_CASE("chebyshev outside the ball") {
    const auto r = chebyshev_outside_ball(GaussianMeasure(GramForm::identity(1)), GramForm::identity(1), 10, {5, 100000, 8});
    CHECK(r.bound == doctest::Approx(0.01));
    CHECK(r.mc.estimate == 0.0);
    CHECK(r.ok);
    const auto r2 = chebyshev_outside_ball(GaussianMeasure(GramForm::identity(2)), GramForm::diagonal(vec({1, 4})), 5,
                                           {6, 200000, 8});
    CHECK(r2.bound == doctest::Approx(0.2));
    CHECK(r2.mc.estimate < r2.bound);
    CHECK(r2.ok);
    CHECK_THROWS_AS(chebyshev_outside_ball(GaussianMeasure(GramForm::diagonal(vec({1, 1}))),
                                           GramForm::identity(3), 1, {0, 10, 1}),
                    Error);
  }

  TEST_CASE("fundamental lemma") {
    const GramForm id = GramForm::identity(1);
    const auto trivial = fundamental_lemma_check(DiscreteMeasure::point_mass(vec({0})), id, id, 0.1, 0.5);
    CHECK(trivial.mass == 1.0);
    CHECK(trivial.certified);
    CHECK(trivial.holds);

    const DiscreteMeasure mu({vec({0.5}), vec({3})}, {0.5, 0.5});
    const auto r = fundamental_lemma_check(mu, id, id, 0.05, 0.1);
    CHECK(r.hypothesis_value.value() == doctest::Approx(37.0 / 800).epsilon(1e-14));
    CHECK(r.certified);
    CHECK(r.mass == 0.5);
    CHECK(r.bound < 0);
    CHECK(r.holds);

    // Below the hypothesis value the lemma is not certified and not asserted.
    const auto weak = fundamental_lemma_check(mu, id, id, 0.04, 0.1);
    CHECK_FALSE(weak.certified);
  }

  TEST_CASE("fundamental lemma on generated scenarios") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int certified = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + trial % 4;
      const GramForm p(testing::random_pd(rng, n, 0.5, 2.0)), q(testing::random_pd(rng, n, 0.5, 3.0));
      std::vector<Vector> atoms;
      for (int j = 0; j < 5; ++j) atoms.push_back(testing::random_vector(rng, n, 0.3 * u(rng)));
      const auto mu = DiscreteMeasure::uniform(atoms);
      const double delta = 0.05 + 0.3 * u(rng);
      const auto probe = fundamental_lemma_check(mu, p, q, 1.0, delta);
      const double eps = probe.hypothesis_value.value() * (1 + u(rng));
      const auto r = fundamental_lemma_check(mu, p, q, eps, delta);
      if (!r.certified) continue;
      ++certified;
      CHECK(r.mass >= r.bound);
      CHECK(r.holds);
    }
    CHECK(certified == 100);
  }
}
