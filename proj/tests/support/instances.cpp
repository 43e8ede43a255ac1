#include "support/instances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "opinionforge/kernels.hpp"
#include "opinionforge/rng.hpp"
#include "support/stats.hpp"

namespace testsupport {

using namespace opinionforge;

ClampedInstance random_tiny_instance(std::uint64_t seed) {
  StreamRng rng(mix64(seed ^ 0xc2b2ae3d27d4eb4full));
  ClampedInstance inst;

  const int num_trustors = static_cast<int>(rng.next_int(1, 3));
  const int num_trustees = static_cast<int>(rng.next_int(1, 2));
  const int levels = rng.next_double() < 0.5 ? 2 : 4;

  inst.oracle.lambda_max = 3;
  inst.oracle.bias_grid = static_cast<int>(rng.next_int(5, 9));
  inst.oracle.epsilon_grid = static_cast<int>(rng.next_int(5, 9));
  inst.oracle.theta_grid = static_cast<int>(rng.next_int(7, 11));
  inst.oracle.behavior_grid = static_cast<int>(rng.next_int(3, 6));
  inst.oracle.epsilon_lo = -12.0;
  inst.oracle.epsilon_hi = 12.0;
  inst.oracle.theta_lo = -10.0;
  inst.oracle.theta_hi = 10.0;
  inst.sampler = inst.oracle.matching_sampler_config();

  inst.ratings = RatingMatrix(num_trustors, num_trustees, levels);
  for (int i = 0; i < num_trustors; ++i) {
    for (int j = 0; j < num_trustees; ++j) {
      inst.ratings.add(i, j, static_cast<int>(rng.next_int(1, levels)));
    }
  }

  GibbsState& state = inst.state;
  for (int j = 0; j < num_trustees; ++j) {
    state.behaviors.push_back(dirichlet_sample(1, 1, 1, rng));
  }
  const GridSpec bias_grid = inst.sampler.bias_grid_spec();
  for (int i = 0; i < num_trustors; ++i) {
    state.biases.push_back(Bias{bias_grid.midpoint(
        static_cast<int>(rng.next_int(0, bias_grid.cells - 1)))});
  }
  for (std::size_t e = 0; e < inst.ratings.size(); ++e) {
    const std::int64_t lambda = rng.next_int(1, inst.oracle.lambda_max);
    const auto comps = enumerate_compositions(lambda);
    state.opinions.push_back(comps[static_cast<std::size_t>(
        rng.next_int(0, static_cast<std::int64_t>(comps.size()) - 1))]);
  }
  state.logit.levels = levels;
  const GridSpec eps_grid = inst.sampler.epsilon_grid_spec();
  state.logit.epsilon =
      eps_grid.midpoint(static_cast<int>(rng.next_int(0, eps_grid.cells - 1)));
  const GridSpec theta_grid = inst.sampler.theta_grid_spec();
  std::vector<int> cells(static_cast<std::size_t>(theta_grid.cells));
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<int>(c);
  for (int c = 0; c < levels - 1; ++c) {
    const auto pick = static_cast<std::size_t>(
        rng.next_int(c, static_cast<std::int64_t>(cells.size()) - 1));
    std::swap(cells[static_cast<std::size_t>(c)], cells[pick]);
  }
  cells.resize(static_cast<std::size_t>(levels - 1));
  std::sort(cells.begin(), cells.end(), std::greater<>());
  for (int c : cells) state.logit.theta.push_back(theta_grid.midpoint(c));
  return inst;
}

std::vector<ConditionalGap> conditional_gaps(const ClampedInstance& inst) {
  const RatingMatrix& ratings = inst.ratings;
  const GibbsState& state = inst.state;
  std::vector<ConditionalGap> gaps = {
      {"opinion", 0.0}, {"behavior", 0.0}, {"lambda", 0.0},
      {"bias", 0.0},    {"epsilon", 0.0},  {"theta", 0.0}};
  auto bump = [&gaps](std::size_t k, double tv) {
    gaps[k].tv = std::max(gaps[k].tv, tv);
  };

  for (std::size_t e = 0; e < ratings.size(); ++e) {
    const auto oracle = conditional_pmf_oracle(OracleTarget::kOpinion,
                                               static_cast<int>(e), state, ratings,
                                               inst.oracle);
    const auto cond = opinion_conditional(static_cast<int>(e), state, ratings);
    bump(0, total_variation(oracle, normalize_log_weights(cond.log_weights)));

    const auto joint_oracle = conditional_pmf_oracle(OracleTarget::kLambdaOpinion,
                                                     static_cast<int>(e), state,
                                                     ratings, inst.oracle);
    const auto joint =
        lambda_opinion_conditional(static_cast<int>(e), state, ratings, inst.sampler);
    bump(2, total_variation(joint_oracle, normalize_log_weights(joint.log_weights)));
  }

  for (int j = 0; j < ratings.num_trustees(); ++j) {
    const auto oracle = conditional_pmf_oracle(OracleTarget::kBehavior, j, state,
                                               ratings, inst.oracle);
    const Opinion params = behavior_conditional_params(j, state, ratings);
    std::vector<double> logw;
    for (const Behavior& point : simplex_centroids(inst.oracle.behavior_grid)) {
      logw.push_back(dirichlet_log_pdf(point, params));
    }
    bump(1, total_variation(oracle, normalize_log_weights(logw)));
  }

  for (int i = 0; i < ratings.num_trustors(); ++i) {
    const auto oracle =
        conditional_pmf_oracle(OracleTarget::kBias, i, state, ratings, inst.oracle);
    const auto cond = bias_conditional(i, state, ratings, inst.sampler);
    bump(3, total_variation(oracle, normalize_log_weights(cond.log_weights)));
  }

  {
    const auto oracle =
        conditional_pmf_oracle(OracleTarget::kEpsilon, 0, state, ratings, inst.oracle);
    const auto cond = epsilon_conditional(state, ratings, inst.sampler);
    bump(4, total_variation(oracle, normalize_log_weights(cond.log_weights)));
  }

  const std::vector<double> theta_mids = inst.sampler.theta_grid_spec().midpoints();
  for (int l = 1; l <= state.logit.levels - 1; ++l) {
    const auto oracle =
        conditional_pmf_oracle(OracleTarget::kTheta, l, state, ratings, inst.oracle);
    const auto cond = theta_conditional(l, state, ratings, inst.sampler);
    const std::vector<double> window = normalize_log_weights(cond.log_weights);
    // Spread the window pmf back onto the full grid for comparison.
    std::vector<double> full(theta_mids.size(), 0.0);
    for (std::size_t k = 0; k < cond.support.size(); ++k) {
      const auto cell = static_cast<std::size_t>(
          std::find(theta_mids.begin(), theta_mids.end(), cond.support[k]) -
          theta_mids.begin());
      full[cell] = window[k];
    }
    bump(5, total_variation(oracle, full));
  }
  return gaps;
}

}  // namespace testsupport
