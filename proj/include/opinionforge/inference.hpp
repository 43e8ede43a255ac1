#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opinionforge/grid.hpp"
#include "opinionforge/rng.hpp"
#include "opinionforge/types.hpp"

namespace opinionforge {

// How the per-edge evidence totals move during the sweep.
//
//   kFixed        - lambda_ij never changes; the values come from the
//                   initial state.
//   kBlockedJoint - default: (lambda, omega) are resampled as one block over
//                   all compositions of all lambda in [1, lambda_max], with a
//                   uniform prior on lambda. This is the move that actually
//                   explores lambda: conditioned on omega, lambda is pinned
//                   at alpha+beta+gamma, so a per-variable move cannot budge it.
//   kPaperLiteral - the per-variable conditional evaluated literally. It is
//                   degenerate by construction (a point mass at the current
//                   total), so lambda stays frozen; the mode exists to make
//                   that behavior auditable.
enum class LambdaMode { kFixed, kBlockedJoint, kPaperLiteral };

std::string to_string(LambdaMode mode);
LambdaMode lambda_mode_from_string(const std::string& name);

struct SamplerConfig {
  std::int64_t iterations = 1000;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;
  std::int64_t lambda_max = 30;
  int bias_grid = 101;
  double epsilon_lo = -20.0;
  double epsilon_hi = 20.0;
  int epsilon_grid = 201;
  double theta_lo = -20.0;
  double theta_hi = 20.0;
  int theta_grid = 201;
  LambdaMode lambda_mode = LambdaMode::kBlockedJoint;
  // In kFixed mode, > 0 pins every edge's lambda to this value at
  // initialization; 0 draws them from the uniform prior instead.
  std::int64_t fixed_lambda = 0;

  void validate() const;

  GridSpec bias_grid_spec() const { return GridSpec{0.0, 1.0, bias_grid}; }
  GridSpec epsilon_grid_spec() const { return GridSpec{epsilon_lo, epsilon_hi, epsilon_grid}; }
  GridSpec theta_grid_spec() const { return GridSpec{theta_lo, theta_hi, theta_grid}; }
};

struct Trace {
  std::vector<GibbsState> samples;
  SamplerConfig config;
};

// ---------------------------------------------------------------------------
// Conditional weight builders.
//
// Each returns the target's full support together with unnormalized log
// weights, so tests can compare the implied pmf against the exact-oracle
// Bayes quotient, and the samplers draw from exactly what the tests checked.
// ---------------------------------------------------------------------------

struct OpinionConditional {
  std::vector<Opinion> support;  // compositions of the edge's current lambda
  std::vector<double> log_weights;
};

// P(omega_ij | rest): multinomial term under B_j times the ordered-logit
// likelihood of the observed rating at E(omega | a_i), over all compositions
// of the current lambda_ij.
OpinionConditional opinion_conditional(int edge_index, const GibbsState& state,
                                       const RatingMatrix& ratings);

// Canonical support of the blocked (lambda, omega) move: compositions of
// lambda = 1, then 2, ... up to lambda_max, each in enumeration order.
std::vector<Opinion> blocked_lambda_support(std::int64_t lambda_max);

struct LambdaOpinionConditional {
  std::vector<Opinion> support;  // blocked_lambda_support(lambda_max)
  std::vector<double> log_weights;
};

// Joint conditional of (lambda_ij, omega_ij) in blocked mode: uniform lambda
// prior x multinomial pmf x rating likelihood.
LambdaOpinionConditional lambda_opinion_conditional(int edge_index,
                                                    const GibbsState& state,
                                                    const RatingMatrix& ratings,
                                                    const SamplerConfig& config);

struct LambdaLiteralConditional {
  std::vector<std::int64_t> support;  // lambda = 1..lambda_max
  std::vector<double> log_weights;
};

// The per-variable lambda conditional evaluated as printed: the multinomial
// pmf of the current counts across candidate totals. Since the pmf is zero
// whenever the candidate total differs from alpha+beta+gamma, this is a point
// mass at the current lambda.
LambdaLiteralConditional lambda_literal_conditional(int edge_index,
                                                    const GibbsState& state,
                                                    const SamplerConfig& config);

// Dirichlet parameters of the behavior conditional for trustee j:
// (1 + sum_i alpha_ij, 1 + sum_i beta_ij, 1 + sum_i gamma_ij) over observed
// edges into j. Throws std::invalid_argument if j has no observed edge.
Opinion behavior_conditional_params(int trustee, const GibbsState& state,
                                    const RatingMatrix& ratings);

struct GridConditional {
  std::vector<double> support;  // grid midpoints (theta: window subset)
  std::vector<double> log_weights;
};

// P(a_i | rest) on the bias grid: product of the rating likelihoods of
// trustor i's edges, with E(omega | a) re-evaluated per candidate.
GridConditional bias_conditional(int trustor, const GibbsState& state,
                                 const RatingMatrix& ratings,
                                 const SamplerConfig& config);

// P(epsilon | rest) on the epsilon grid: product of all rating likelihoods.
GridConditional epsilon_conditional(const GibbsState& state,
                                    const RatingMatrix& ratings,
                                    const SamplerConfig& config);

// P(theta_l | rest), cutpoint_index 1-based. The support is the theta grid
// clipped to the open window (theta_{l+1}, theta_{l-1}) so the cutpoints
// stay strictly decreasing. Throws NumericalError if the window holds no
// grid point.
GridConditional theta_conditional(int cutpoint_index, const GibbsState& state,
                                  const RatingMatrix& ratings,
                                  const SamplerConfig& config);

// ---------------------------------------------------------------------------
// Conditional samplers.
// ---------------------------------------------------------------------------

Opinion sample_opinion_conditional(int edge_index, const GibbsState& state,
                                   const RatingMatrix& ratings, StreamRng& rng);

Behavior sample_behavior_conditional(int trustee, const GibbsState& state,
                                     const RatingMatrix& ratings, StreamRng& rng);

// Returns the new (lambda, omega) for the edge; dispatches on lambda_mode
// (kBlockedJoint or kPaperLiteral; kFixed has no lambda move).
std::pair<std::int64_t, Opinion> sample_lambda_conditional(int edge_index,
                                                           const GibbsState& state,
                                                           const RatingMatrix& ratings,
                                                           const SamplerConfig& config,
                                                           StreamRng& rng);

Bias sample_bias_conditional(int trustor, const GibbsState& state,
                             const RatingMatrix& ratings,
                             const SamplerConfig& config, StreamRng& rng);

double sample_epsilon_conditional(const GibbsState& state, const RatingMatrix& ratings,
                                  const SamplerConfig& config, StreamRng& rng);

double sample_theta_conditional(int cutpoint_index, const GibbsState& state,
                                const RatingMatrix& ratings,
                                const SamplerConfig& config, StreamRng& rng);

// ---------------------------------------------------------------------------
// Sweep driver.
// ---------------------------------------------------------------------------

enum class UpdateStage { kBehavior, kOpinion, kBias, kLambda, kTheta, kEpsilon };

struct SweepOptions {
  // Records every (stage, entity) update in sweep order.
  std::vector<std::pair<UpdateStage, int>>* update_log = nullptr;
  // Negative control for the joint-distribution test: rotates the opinion
  // conditional's probability vector by one position before drawing.
  bool corrupt_opinion_weights = false;
};

// One full sweep in the fixed stage order
//   behaviors -> opinions -> biases -> lambdas -> cutpoints -> epsilon,
// incrementing state.iteration. Entities with no incident edge are skipped
// (their conditional carries no data). Per-entity streams are keyed by
// (config.seed, new iteration, stage, entity), so the result is independent
// of the execution schedule within a stage.
GibbsState gibbs_step(const GibbsState& state, const RatingMatrix& ratings,
                      const SamplerConfig& config, const SweepOptions& options = {});

// Random initial state: behaviors ~ Dirichlet(1,1,1), biases ~ U[0,1],
// lambdas uniform on [1, lambda_max] (or pinned via config.fixed_lambda),
// opinions uniform over the compositions of their lambda, epsilon and theta
// uniform over their grid midpoints with theta strictly decreasing.
GibbsState init_state(const RatingMatrix& ratings, const SamplerConfig& config);

// A draw of all latents from the model prior itself (opinions multinomial
// given behavior and lambda, continuous parameters uniform over the grid
// supports the sampler actually visits). This is the measure the Gibbs
// kernel preserves, which is what the joint-distribution test requires.
GibbsState sample_state_from_prior(const RatingMatrix& shape, const SamplerConfig& config,
                                   StreamRng& rng);

// Runs `iterations` sweeps from a random initial state and keeps every
// thin-th state after burn-in.
Trace gibbs_run(const RatingMatrix& ratings, const SamplerConfig& config);

// Same, but starting from a caller-provided state (e.g. fixed-lambda runs
// with known per-edge totals).
Trace gibbs_run_from(const GibbsState& initial, const RatingMatrix& ratings,
                     const SamplerConfig& config);

// ---------------------------------------------------------------------------
// Posterior summaries.
// ---------------------------------------------------------------------------

struct EdgeSummary {
  int trustor = 0;
  int trustee = 0;
  double alpha_mean = 0.0;
  double beta_mean = 0.0;
  double gamma_mean = 0.0;
  double expected_belief_mean = 0.0;
  double ci90_lo = 0.0;
  double ci90_hi = 0.0;
  // Integer opinion for export: the composition of round(mean lambda)
  // closest (squared distance, enumeration order breaking ties) to the mean
  // counts.
  Opinion rounded;
};

struct PosteriorSummary {
  std::vector<EdgeSummary> edges;  // aligned with RatingMatrix entries
  std::vector<std::array<double, 3>> behavior_means;
  std::vector<double> bias_means;
  double epsilon_mean = 0.0;
  std::vector<double> theta_means;
  int levels = 2;
};

// Arithmetic means over the trace; credible intervals are empirical 5%/95%
// quantiles (linear interpolation between order statistics). Throws
// std::invalid_argument on an empty trace.
PosteriorSummary summarize_posterior(const Trace& trace, const RatingMatrix& ratings);

}  // namespace opinionforge
