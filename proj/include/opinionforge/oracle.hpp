#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opinionforge/inference.hpp"
#include "opinionforge/types.hpp"

namespace opinionforge {

// Discretization of the full joint for exhaustive enumeration. Continuous
// parameters share the sampler's grid-midpoint supports; behaviors live on
// the centroids of a barycentric subdivision of the simplex (a midpoint rule,
// so boundary points never soak up mass they should not).
struct OracleConfig {
  std::int64_t lambda_max = 3;
  int bias_grid = 7;
  int epsilon_grid = 7;
  int theta_grid = 7;
  int behavior_grid = 6;  // subdivisions per simplex edge -> grid^2 centroids
  double epsilon_lo = -20.0;
  double epsilon_hi = 20.0;
  double theta_lo = -20.0;
  double theta_hi = 20.0;
  LambdaMode lambda_mode = LambdaMode::kBlockedJoint;
  // Per-edge lambda values for kFixed mode.
  std::vector<std::int64_t> fixed_lambdas;

  void validate() const;

  GridSpec bias_grid_spec() const { return GridSpec{0.0, 1.0, bias_grid}; }
  GridSpec epsilon_grid_spec() const { return GridSpec{epsilon_lo, epsilon_hi, epsilon_grid}; }
  GridSpec theta_grid_spec() const { return GridSpec{theta_lo, theta_hi, theta_grid}; }

  // A SamplerConfig whose grids match this discretization, for runs that are
  // compared against the oracle.
  SamplerConfig matching_sampler_config() const;
};

// Centroids of the K^2 triangles of the barycentric subdivision with K
// subdivisions per edge. All interior points, equal weights.
std::vector<Behavior> simplex_centroids(int subdivisions);

// Number of joint states in the full discrete product space; the guard the
// oracle enforces before enumerating.
double oracle_state_count(const RatingMatrix& ratings, const OracleConfig& config);

// Relative log joint of one assignment: multinomial and rating-likelihood
// terms over all observed edges plus the strict cutpoint-ordering indicator.
// Uniform prior factors are constant over every support and are dropped.
double log_joint(const GibbsState& state, const RatingMatrix& ratings);

struct ExactPosterior {
  // Per edge, over blocked_lambda_support(lambda_max) in blocked mode or the
  // compositions of the edge's fixed lambda in fixed mode.
  std::vector<std::vector<double>> edge_marginals;
  std::vector<std::vector<Opinion>> edge_supports;
  std::vector<double> edge_expected_belief_mean;
  // Per trustee, over simplex_centroids(behavior_grid).
  std::vector<std::vector<double>> behavior_marginals;
  std::vector<std::array<double, 3>> behavior_means;
  // Per trustor, over the bias grid midpoints.
  std::vector<std::vector<double>> bias_marginals;
  std::vector<double> bias_means;
  std::vector<double> epsilon_marginal;
  double epsilon_mean = 0.0;
  // Per cutpoint, over the theta grid midpoints.
  std::vector<std::vector<double>> theta_marginals;
  std::vector<double> theta_means;
};

// Enumerates the discretized joint exactly and returns normalized marginal
// tables and means for every latent. Throws DataError if the product space
// exceeds 1e8 states.
ExactPosterior exact_posterior(const RatingMatrix& ratings, const OracleConfig& config);

// Which latent a conditional oracle query targets.
enum class OracleTarget { kOpinion, kBehavior, kLambdaOpinion, kBias, kEpsilon, kTheta };

// Ground truth for the conditional samplers: evaluates the joint at every
// support point of the target with all other latents clamped at `state`,
// and normalizes. Supports (aligned with the sampler-side builders):
//   kOpinion       compositions of the edge's current lambda
//   kLambdaOpinion blocked_lambda_support(config.lambda_max)
//   kBehavior      simplex_centroids(config.behavior_grid)
//   kBias          bias grid midpoints
//   kEpsilon       epsilon grid midpoints
//   kTheta         theta grid midpoints (zero mass outside the ordering window)
std::vector<double> conditional_pmf_oracle(OracleTarget target, int entity,
                                           const GibbsState& state,
                                           const RatingMatrix& ratings,
                                           const OracleConfig& config);

}  // namespace opinionforge
