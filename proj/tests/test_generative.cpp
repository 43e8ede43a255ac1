#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "opinionforge/generative.hpp"
#include "opinionforge/kernels.hpp"
#include "support/stats.hpp"

using namespace opinionforge;

namespace {

// Position of a composition in enumeration order.
std::size_t comp_index(const std::vector<Opinion>& comps, const Opinion& op) {
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i] == op) return i;
  }
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("degenerate behavior concentrates all evidence") {
  StreamRng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Opinion op = forward_sample_opinion(Behavior{1.0, 0.0, 0.0}, 5, rng);
    CHECK(op == Opinion{5, 0, 0});
  }
}

TEST_CASE("single-pull frequency matches the behavior") {
  StreamRng rng(2);
  std::int64_t alpha = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    alpha += forward_sample_opinion(Behavior{0.5, 0.5, 0.0}, 1, rng).alpha;
  }
  CHECK(std::abs(static_cast<double>(alpha) / n - 0.5) < 0.002);
}

TEST_CASE("opinion draws match the multinomial pmf") {
  const Behavior behavior{0.6, 0.3, 0.1};
  const std::int64_t lambda = 4;
  const auto comps = enumerate_compositions(lambda);
  std::vector<double> probs;
  probs.reserve(comps.size());
  for (const Opinion& op : comps) {
    probs.push_back(std::exp(multinomial_log_pmf(op, behavior)));
  }
  StreamRng rng(3);
  std::vector<std::int64_t> counts(comps.size(), 0);
  for (int i = 0; i < 100000; ++i) {
    ++counts[comp_index(comps, forward_sample_opinion(behavior, lambda, rng))];
  }
  CHECK(testsupport::chi2_gof_pvalue(counts, probs) > 0.001);
}

TEST_CASE("rating draws match the link pmf") {
  SUBCASE("flat two-level link is a fair coin") {
    const LogitParams logit{0.0, {0.0}, 2};
    StreamRng rng(4);
    std::int64_t ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      if (forward_sample_rating(Opinion{1, 1, 0}, Bias{0.5}, logit, rng) == 1) ++ones;
    }
    CHECK(std::abs(static_cast<double>(ones) / n - 0.5) < 0.005);
  }
  SUBCASE("a huge first cutpoint starves level 1") {
    const LogitParams logit{1.0, {50.0, 0.0, -50.0}, 4};
    StreamRng rng(5);
    for (int i = 0; i < 20000; ++i) {
      CHECK(forward_sample_rating(Opinion{2, 1, 1}, Bias{0.5}, logit, rng) != 1);
    }
  }
  SUBCASE("four-level empirical histogram") {
    const LogitParams logit{6.0, {1.5, -1.0, -3.5}, 4};
    const auto pmf = ordered_logit_pmf(0.625, logit);
    StreamRng rng(6);
    std::vector<std::int64_t> counts(4, 0);
    for (int i = 0; i < 100000; ++i) {
      ++counts[static_cast<std::size_t>(
          forward_sample_rating(Opinion{2, 1, 1}, Bias{0.5}, logit, rng) - 1)];
    }
    CHECK(testsupport::chi2_gof_pvalue(counts, pmf) > 0.001);
  }
}

TEST_CASE("network generation") {
  SUBCASE("empty edge set yields an empty matrix") {
    GroundTruth truth;
    truth.behaviors = {Behavior{0.5, 0.3, 0.2}};
    truth.biases = {Bias{0.5}};
    truth.logit = LogitParams{1.0, {0.0}, 2};
    const GeneratedNetwork net = forward_generate_network(truth, 7);
    CHECK(net.ratings.empty());
    CHECK(net.opinions.empty());
  }

  SUBCASE("single deterministic edge hits the top level at sigma(3)") {
    // B = (1,0,0) forces E(omega) = 1; the top-level probability is then
    // sigma(eps + theta_back) = sigma(10 - 7) = sigma(3).
    GroundTruth truth;
    truth.behaviors = {Behavior{1.0, 0.0, 0.0}};
    truth.biases = {Bias{0.3}};
    truth.logit = LogitParams{10.0, {-5.0, -6.0, -7.0}, 4};
    truth.lambdas = {LambdaEntry{0, 0, 3}};
    int top = 0;
    const int runs = 10000;
    for (int seed = 0; seed < runs; ++seed) {
      const GeneratedNetwork net =
          forward_generate_network(truth, static_cast<std::uint64_t>(seed));
      REQUIRE(net.opinions[0] == Opinion{3, 0, 0});
      if (net.ratings.entry(0).rating == 4) ++top;
    }
    // sigma(3) = 0.95257; plain binomial noise at 1e4 runs is ~0.002.
    CHECK(std::abs(static_cast<double>(top) / runs - 0.95257412682243322) < 0.008);
  }

  SUBCASE("complete 30x20 network is fully rated") {
    const LogitParams logit{6.0, {1.5, -1.0, -3.5}, 4};
    const GroundTruth truth = sample_ground_truth(30, 20, 3, 8, logit, 11);
    const GeneratedNetwork net = forward_generate_network(truth, 11);
    CHECK(net.ratings.size() == 600);
    for (const RatingEntry& e : net.ratings.entries()) {
      CHECK(e.rating >= 1);
      CHECK(e.rating <= 4);
    }
  }

  SUBCASE("identical seeds give bit-identical output") {
    const LogitParams logit{6.0, {1.5, -1.0, -3.5}, 4};
    const GroundTruth truth = sample_ground_truth(5, 4, 2, 6, logit, 21);
    const GeneratedNetwork a = forward_generate_network(truth, 33);
    const GeneratedNetwork b = forward_generate_network(truth, 33);
    REQUIRE(a.ratings.size() == b.ratings.size());
    for (std::size_t e = 0; e < a.ratings.size(); ++e) {
      CHECK(a.ratings.entry(e).rating == b.ratings.entry(e).rating);
      CHECK(a.opinions[e] == b.opinions[e]);
    }
  }
}

TEST_CASE("marginal rating law by exact enumeration") {
  // For one edge with small lambda, the rating marginal is
  // sum_omega Mul(omega | B, lambda) * logit-level(E(omega | a)).
  const Behavior behavior{0.5, 0.2, 0.3};
  const Bias bias{0.4};
  const LogitParams logit{5.0, {2.0, 0.0, -2.5}, 4};
  const std::int64_t lambda = 3;
  std::vector<double> marginal(4, 0.0);
  for (const Opinion& op : enumerate_compositions(lambda)) {
    const double w = std::exp(multinomial_log_pmf(op, behavior));
    const auto pmf = ordered_logit_pmf(expected_belief(op, bias), logit);
    for (int l = 0; l < 4; ++l) {
      marginal[static_cast<std::size_t>(l)] += w * pmf[static_cast<std::size_t>(l)];
    }
  }

  GroundTruth truth;
  truth.behaviors = {behavior};
  truth.biases = {bias};
  truth.logit = logit;
  truth.lambdas = {LambdaEntry{0, 0, lambda}};
  std::vector<std::int64_t> counts(4, 0);
  for (int seed = 0; seed < 100000; ++seed) {
    const GeneratedNetwork net =
        forward_generate_network(truth, static_cast<std::uint64_t>(seed));
    ++counts[static_cast<std::size_t>(net.ratings.entry(0).rating - 1)];
  }
  CHECK(testsupport::chi2_gof_pvalue(counts, marginal) > 0.001);
}
