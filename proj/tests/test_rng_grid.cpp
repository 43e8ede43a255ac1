#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "opinionforge/grid.hpp"
#include "opinionforge/rng.hpp"
#include "support/stats.hpp"

using namespace opinionforge;

TEST_CASE("streams replay and separate") {
  StreamRng a = derive_stream(42, 1, 2, 3);
  StreamRng b = derive_stream(42, 1, 2, 3);
  StreamRng c = derive_stream(42, 1, 2, 4);
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(any_diff);
}

TEST_CASE("uniform doubles look uniform") {
  StreamRng rng(2024);
  const int n = 200000;
  std::vector<std::int64_t> counts(10, 0);
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++counts[static_cast<std::size_t>(u * 10.0)];
  }
  const std::vector<double> probs(10, 0.1);
  CHECK(testsupport::chi2_gof_pvalue(counts, probs) > 1e-4);
}

TEST_CASE("bounded integers cover their range uniformly") {
  StreamRng rng(5);
  std::vector<std::int64_t> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const std::int64_t v = rng.next_int(3, 9);
    REQUIRE(v >= 3);
    REQUIRE(v <= 9);
    ++counts[static_cast<std::size_t>(v - 3)];
  }
  const std::vector<double> probs(7, 1.0 / 7);
  CHECK(testsupport::chi2_gof_pvalue(counts, probs) > 1e-4);
}

TEST_CASE("categorical inversion matches its weights and is strict") {
  // With u < cum strictly, a zero-probability cell can never be drawn.
  StreamRng rng(99);
  const std::vector<double> probs = {0.25, 0.0, 0.5, 0.25};
  std::vector<std::int64_t> counts(4, 0);
  for (int i = 0; i < 100000; ++i) {
    ++counts[static_cast<std::size_t>(categorical_from_probs(probs, rng))];
  }
  CHECK(counts[1] == 0);
  const std::vector<std::int64_t> kept = {counts[0], counts[2], counts[3]};
  const std::vector<double> kept_probs = {0.25, 0.5, 0.25};
  CHECK(testsupport::chi2_gof_pvalue(kept, kept_probs) > 1e-4);
}

TEST_CASE("log-weight normalization") {
  const std::vector<double> logw = {-1000.0, -1001.0, -999.0};
  const auto probs = normalize_log_weights(logw);
  double sum = 0.0;
  for (double p : probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(probs[2] > probs[0]);
  CHECK(probs[0] > probs[1]);

  const std::vector<double> all_ninf(3, -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(normalize_log_weights(all_ninf), NumericalError);
}

TEST_CASE("grid midpoints") {
  const GridSpec grid{0.0, 1.0, 4};
  const auto mids = grid.midpoints();
  REQUIRE(mids.size() == 4);
  CHECK(mids[0] == doctest::Approx(0.125));
  CHECK(mids[3] == doctest::Approx(0.875));
  CHECK_THROWS_AS((GridSpec{1.0, 1.0, 4}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 1}.validate()), std::invalid_argument);
}
