#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "opinionforge/kernels.hpp"
#include "opinionforge/rng.hpp"
#include "support/stats.hpp"

using namespace opinionforge;

TEST_CASE("expected belief") {
  CHECK(expected_belief(Opinion{2, 1, 1}, Bias{0.5}) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(expected_belief(Opinion{5, 0, 0}, Bias{0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expected_belief(Opinion{0, 0, 3}, Bias{0.7}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(expected_belief(Opinion{0, 0, 0}, Bias{0.5}), std::invalid_argument);
}

TEST_CASE("expected belief is affine in the bias with slope gamma/lambda") {
  StreamRng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Opinion op{rng.next_int(0, 6), rng.next_int(0, 6), rng.next_int(1, 6)};
    const double a1 = rng.next_double();
    const double a2 = rng.next_double();
    const double slope = static_cast<double>(op.gamma) / static_cast<double>(op.lambda());
    const double e1 = expected_belief(op, Bias{a1});
    const double e2 = expected_belief(op, Bias{a2});
    CHECK(e2 - e1 == doctest::Approx(slope * (a2 - a1)).epsilon(1e-12));
    const double lo = static_cast<double>(op.alpha) / static_cast<double>(op.lambda());
    const double hi = static_cast<double>(op.alpha + op.gamma) /
                      static_cast<double>(op.lambda());
    CHECK(e1 >= lo - 1e-15);
    CHECK(e1 <= hi + 1e-15);
  }
}

TEST_CASE("ordered logit pmf: closed-form spot checks") {
  SUBCASE("flat link") {
    const LogitParams params{0.0, {0.0}, 2};
    const auto pmf = ordered_logit_pmf(123.45, params);
    CHECK(pmf[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pmf[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("symmetric four-level expansion") {
    const LogitParams params{0.0, {2.0, 0.0, -2.0}, 4};
    const auto pmf = ordered_logit_pmf(1.0, params);
    CHECK(pmf[0] == doctest::Approx(0.11920292202211755).epsilon(1e-14));
    CHECK(pmf[1] == doctest::Approx(0.38079707797788244).epsilon(1e-14));
    CHECK(pmf[2] == doctest::Approx(0.38079707797788244).epsilon(1e-14));
    CHECK(pmf[3] == doctest::Approx(0.11920292202211755).epsilon(1e-14));
  }
  SUBCASE("x=0.625, eps=6, theta=[1.5,-1,-3.5]") {
    // Frozen from a 40-digit evaluation of the level formula; re-derived
    // below with long-double arithmetic as an in-test cross-check.
    const LogitParams params{6.0, {1.5, -1.0, -3.5}, 4};
    const auto pmf = ordered_logit_pmf(0.625, params);
    const std::vector<double> frozen = {0.0052201256935583971, 0.054866524480449225,
                                        0.37773684894019427, 0.56217650088579810};
    for (int l = 0; l < 4; ++l) {
      CHECK(pmf[static_cast<std::size_t>(l)] ==
            doctest::Approx(frozen[static_cast<std::size_t>(l)]).epsilon(1e-13));
    }
    auto sig = [](long double z) { return 1.0L / (1.0L + std::exp(-z)); };
    const long double z1 = 6.0L * 0.625L + 1.5L;
    const long double z2 = 6.0L * 0.625L - 1.0L;
    const long double z3 = 6.0L * 0.625L - 3.5L;
    CHECK(pmf[0] == doctest::Approx(static_cast<double>(1.0L - sig(z1))).epsilon(1e-13));
    CHECK(pmf[1] == doctest::Approx(static_cast<double>(sig(z1) - sig(z2))).epsilon(1e-13));
    CHECK(pmf[2] == doctest::Approx(static_cast<double>(sig(z2) - sig(z3))).epsilon(1e-13));
    CHECK(pmf[3] == doctest::Approx(static_cast<double>(sig(z3))).epsilon(1e-13));
  }
  SUBCASE("non-monotone cutpoints are rejected") {
    const LogitParams bad{1.0, {-2.0, 0.0, 2.0}, 4};
    CHECK_THROWS_AS(ordered_logit_pmf(0.5, bad), std::invalid_argument);
  }
}

TEST_CASE("ordered logit pmf: normalization and monotonicity properties") {
  StreamRng rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    const int levels = static_cast<int>(rng.next_int(2, 6));
    LogitParams params;
    params.levels = levels;
    params.epsilon = (rng.next_double() - 0.5) * 40.0;
    params.theta.resize(static_cast<std::size_t>(levels - 1));
    for (auto& t : params.theta) t = (rng.next_double() - 0.5) * 40.0;
    std::sort(params.theta.begin(), params.theta.end(), std::greater<>());
    const double x = rng.next_double();

    const auto pmf = ordered_logit_pmf(x, params);
    double sum = 0.0;
    for (double p : pmf) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0 + 1e-15);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);

    // Tail monotonicity in x for positive slopes.
    if (params.epsilon > 0.0) {
      const double x2 = x + rng.next_double() * (1.0 - x);
      const auto pmf2 = ordered_logit_pmf(x2, params);
      CHECK(pmf2.back() >= pmf.back() - 1e-15);
      CHECK(pmf2.front() <= pmf.front() + 1e-15);
    }
  }
}

TEST_CASE("multinomial log pmf") {
  CHECK(multinomial_log_pmf(Opinion{3, 0, 0}, Behavior{1.0, 0.0, 0.0}) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(multinomial_log_pmf(Opinion{1, 1, 1}, Behavior{1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(-1.5040773967762740734).epsilon(1e-14));  // log(2/9)
  CHECK(multinomial_log_pmf(Opinion{2, 1, 0}, Behavior{0.5, 0.3, 0.2}) ==
        doctest::Approx(-1.4916548767777169201).epsilon(1e-14));  // log(0.225)
  CHECK(multinomial_log_pmf(Opinion{0, 1, 0}, Behavior{1.0, 0.0, 0.0}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("multinomial pmf sums to one over compositions") {
  StreamRng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Behavior behavior = dirichlet_sample(1, 1, 1, rng);
    for (std::int64_t lambda = 0; lambda <= 20; ++lambda) {
      double sum = 0.0;
      for (const Opinion& op : enumerate_compositions(lambda)) {
        sum += std::exp(multinomial_log_pmf(op, behavior));
      }
      CHECK(std::abs(sum - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("dirichlet log pdf") {
  CHECK(dirichlet_log_pdf(Behavior{0.2, 0.5, 0.3}, Opinion{1, 1, 1}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(dirichlet_log_pdf(Behavior{0.5, 0.25, 0.25}, Opinion{2, 1, 1}) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(dirichlet_log_pdf(Behavior{0.5, 0.25, 0.25}, Opinion{0, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("dirichlet mean and monte-carlo normalization") {
  // Mean of Dirichlet(3,2,1) is (1/2, 1/3, 1/6).
  StreamRng rng(13);
  double sb = 0.0, sd = 0.0, sn = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Behavior b = dirichlet_sample(3, 2, 1, rng);
    sb += b.b;
    sd += b.d;
    sn += b.n;
  }
  CHECK(sb / draws == doctest::Approx(1.0 / 2).epsilon(0.01));
  CHECK(sd / draws == doctest::Approx(1.0 / 3).epsilon(0.01));
  CHECK(sn / draws == doctest::Approx(1.0 / 6).epsilon(0.02));

  // Density integrates to 1: uniform simplex sampling has density 2 in the
  // (b, d) chart, so E[pdf] / 2 estimates the integral.
  double acc = 0.0;
  const int mc = 1000000;
  int used = 0;
  while (used < mc) {
    const double u = rng.next_double();
    const double v = rng.next_double();
    const double b = std::min(u, v);
    const double d = std::max(u, v) - b;
    const Behavior point{b, d, 1.0 - b - d};
    acc += std::exp(dirichlet_log_pdf(point, Opinion{2, 3, 4}));
    ++used;
  }
  CHECK(acc / mc / 2.0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("composition enumeration") {
  const auto zero = enumerate_compositions(0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == Opinion{0, 0, 0});

  const auto two = enumerate_compositions(2);
  REQUIRE(two.size() == 6);
  const std::vector<Opinion> expected = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                         {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(two[i] == expected[i]);
  }

  CHECK(enumerate_compositions(10).size() == 66);
  CHECK(composition_count(10) == 66);

  // Each composition appears exactly once and sums to lambda.
  for (std::int64_t lambda : {3, 7, 15}) {
    const auto comps = enumerate_compositions(lambda);
    CHECK(static_cast<std::int64_t>(comps.size()) == composition_count(lambda));
    for (std::size_t i = 0; i < comps.size(); ++i) {
      CHECK(comps[i].lambda() == lambda);
      for (std::size_t j = i + 1; j < comps.size(); ++j) {
        CHECK(!(comps[i] == comps[j]));
      }
    }
  }
}

TEST_CASE("test-support statistics agree with reference values") {
  CHECK(testsupport::chi2_sf(20.0, 9.0) == doctest::Approx(0.017912404529843298).epsilon(1e-10));
  CHECK(testsupport::chi2_sf(5.0, 3.0) == doctest::Approx(0.1717971442967335).epsilon(1e-10));
  CHECK(testsupport::chi2_sf(130.0, 100.0) == doctest::Approx(0.02351239780980871).epsilon(1e-9));
  CHECK(testsupport::kolmogorov_q(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(testsupport::kolmogorov_q(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
  CHECK(testsupport::kolmogorov_q(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-8));
  CHECK(testsupport::beta_cdf_int(3, 2, 0.4) == doctest::Approx(0.1792).epsilon(1e-12));
  CHECK(testsupport::beta_cdf_int(11, 6, 0.7) == doctest::Approx(0.6597823259111076).epsilon(1e-10));
}
