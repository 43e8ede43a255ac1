#include "opinionforge/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "opinionforge/generative.hpp"
#include "opinionforge/kernels.hpp"
#include "opinionforge/parallel.hpp"

namespace opinionforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Rating log likelihood of edge e under the given logit params and bias.
double rating_log_lik(const RatingEntry& entry, const Opinion& op, const Bias& bias,
                      const LogitParams& logit) {
  return ordered_logit_log_level(expected_belief(op, bias), logit, entry.rating);
}

}  // namespace

std::string to_string(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::kFixed: return "fixed";
    case LambdaMode::kBlockedJoint: return "blocked-joint";
    case LambdaMode::kPaperLiteral: return "paper-literal";
  }
  return "blocked-joint";
}

LambdaMode lambda_mode_from_string(const std::string& name) {
  if (name == "fixed") return LambdaMode::kFixed;
  if (name == "blocked-joint") return LambdaMode::kBlockedJoint;
  if (name == "paper-literal") return LambdaMode::kPaperLiteral;
  throw DataError("unknown lambda mode '" + name + "'");
}

void SamplerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::invalid_argument("burn_in must lie in [0, iterations)");
  }
  if (thin < 1 || thin > iterations - burn_in) {
    throw std::invalid_argument("thin must lie in [1, iterations - burn_in]");
  }
  if (lambda_max < 1) throw std::invalid_argument("lambda_max must be positive");
  bias_grid_spec().validate();
  epsilon_grid_spec().validate();
  theta_grid_spec().validate();
  if (fixed_lambda < 0 || fixed_lambda > lambda_max) {
    throw std::invalid_argument("fixed_lambda must lie in [0, lambda_max]");
  }
}

// ---------------------------------------------------------------------------
// Conditional weight builders.
// ---------------------------------------------------------------------------

OpinionConditional opinion_conditional(int edge_index, const GibbsState& state,
                                       const RatingMatrix& ratings) {
  const RatingEntry& entry = ratings.entry(static_cast<std::size_t>(edge_index));
  const Opinion& current = state.opinions[static_cast<std::size_t>(edge_index)];
  const Behavior& behavior = state.behaviors[static_cast<std::size_t>(entry.trustee)];
  const Bias& bias = state.biases[static_cast<std::size_t>(entry.trustor)];

  OpinionConditional out;
  out.support = enumerate_compositions(current.lambda());
  out.log_weights.reserve(out.support.size());
  for (const Opinion& candidate : out.support) {
    out.log_weights.push_back(multinomial_log_pmf(candidate, behavior) +
                              rating_log_lik(entry, candidate, bias, state.logit));
  }
  return out;
}

std::vector<Opinion> blocked_lambda_support(std::int64_t lambda_max) {
  std::vector<Opinion> support;
  for (std::int64_t lambda = 1; lambda <= lambda_max; ++lambda) {
    auto comps = enumerate_compositions(lambda);
    support.insert(support.end(), comps.begin(), comps.end());
  }
  return support;
}

LambdaOpinionConditional lambda_opinion_conditional(int edge_index,
                                                    const GibbsState& state,
                                                    const RatingMatrix& ratings,
                                                    const SamplerConfig& config) {
  const RatingEntry& entry = ratings.entry(static_cast<std::size_t>(edge_index));
  const Behavior& behavior = state.behaviors[static_cast<std::size_t>(entry.trustee)];
  const Bias& bias = state.biases[static_cast<std::size_t>(entry.trustor)];

  LambdaOpinionConditional out;
  out.support = blocked_lambda_support(config.lambda_max);
  out.log_weights.reserve(out.support.size());
  // The uniform lambda prior contributes the same factor to every candidate
  // and drops out of the normalization.
  for (const Opinion& candidate : out.support) {
    out.log_weights.push_back(multinomial_log_pmf(candidate, behavior) +
                              rating_log_lik(entry, candidate, bias, state.logit));
  }
  return out;
}

LambdaLiteralConditional lambda_literal_conditional(int edge_index,
                                                    const GibbsState& state,
                                                    const SamplerConfig& config) {
  const Opinion& current = state.opinions[static_cast<std::size_t>(edge_index)];
  LambdaLiteralConditional out;
  out.support.resize(static_cast<std::size_t>(config.lambda_max));
  std::iota(out.support.begin(), out.support.end(), std::int64_t{1});
  out.log_weights.assign(out.support.size(), kNegInf);
  // The multinomial pmf of fixed counts is zero for every total except
  // alpha+beta+gamma, so the conditional collapses to a point mass and the
  // move can never change lambda.
  const std::int64_t pinned = current.lambda();
  if (pinned >= 1 && pinned <= config.lambda_max) {
    out.log_weights[static_cast<std::size_t>(pinned - 1)] = 0.0;
  }
  return out;
}

Opinion behavior_conditional_params(int trustee, const GibbsState& state,
                                    const RatingMatrix& ratings) {
  const auto& edges = ratings.edges_of_trustee().at(static_cast<std::size_t>(trustee));
  if (edges.empty()) {
    throw std::invalid_argument("behavior conditional needs at least one observed edge");
  }
  Opinion params{1, 1, 1};
  for (int e : edges) {
    const Opinion& op = state.opinions[static_cast<std::size_t>(e)];
    params.alpha += op.alpha;
    params.beta += op.beta;
    params.gamma += op.gamma;
  }
  return params;
}

GridConditional bias_conditional(int trustor, const GibbsState& state,
                                 const RatingMatrix& ratings,
                                 const SamplerConfig& config) {
  const auto& edges = ratings.edges_of_trustor().at(static_cast<std::size_t>(trustor));
  if (edges.empty()) {
    throw std::invalid_argument("bias conditional needs at least one observed edge");
  }
  GridConditional out;
  out.support = config.bias_grid_spec().midpoints();
  out.log_weights.assign(out.support.size(), 0.0);
  for (std::size_t k = 0; k < out.support.size(); ++k) {
    const Bias candidate{out.support[k]};
    double logw = 0.0;
    for (int e : edges) {
      const RatingEntry& entry = ratings.entry(static_cast<std::size_t>(e));
      logw += rating_log_lik(entry, state.opinions[static_cast<std::size_t>(e)],
                             candidate, state.logit);
    }
    out.log_weights[k] = logw;
  }
  return out;
}

GridConditional epsilon_conditional(const GibbsState& state, const RatingMatrix& ratings,
                                    const SamplerConfig& config) {
  if (ratings.empty()) {
    throw std::invalid_argument("epsilon conditional needs at least one observed edge");
  }
  // E(omega | a) does not involve epsilon; hoist it out of the grid loop.
  std::vector<double> beliefs(ratings.size());
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    beliefs[e] = expected_belief(state.opinions[e],
                                 state.biases[static_cast<std::size_t>(
                                     ratings.entry(e).trustor)]);
  }
  GridConditional out;
  out.support = config.epsilon_grid_spec().midpoints();
  out.log_weights.assign(out.support.size(), 0.0);
  LogitParams candidate = state.logit;
  for (std::size_t k = 0; k < out.support.size(); ++k) {
    candidate.epsilon = out.support[k];
    double logw = 0.0;
    for (std::size_t e = 0; e < ratings.size(); ++e) {
      logw += ordered_logit_log_level(beliefs[e], candidate, ratings.entry(e).rating);
    }
    out.log_weights[k] = logw;
  }
  return out;
}

GridConditional theta_conditional(int cutpoint_index, const GibbsState& state,
                                  const RatingMatrix& ratings,
                                  const SamplerConfig& config) {
  if (ratings.empty()) {
    throw std::invalid_argument("theta conditional needs at least one observed edge");
  }
  const int levels = state.logit.levels;
  if (cutpoint_index < 1 || cutpoint_index > levels - 1) {
    throw std::invalid_argument("cutpoint index out of range");
  }
  const std::size_t t = static_cast<std::size_t>(cutpoint_index - 1);
  const double upper = cutpoint_index == 1 ? std::numeric_limits<double>::infinity()
                                           : state.logit.theta[t - 1];
  const double lower = cutpoint_index == levels - 1
                           ? -std::numeric_limits<double>::infinity()
                           : state.logit.theta[t + 1];

  std::vector<double> beliefs(ratings.size());
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    beliefs[e] = expected_belief(state.opinions[e],
                                 state.biases[static_cast<std::size_t>(
                                     ratings.entry(e).trustor)]);
  }

  GridConditional out;
  LogitParams candidate = state.logit;
  for (double m : config.theta_grid_spec().midpoints()) {
    if (!(m > lower && m < upper)) continue;
    candidate.theta[t] = m;
    double logw = 0.0;
    for (std::size_t e = 0; e < ratings.size(); ++e) {
      logw += ordered_logit_log_level(beliefs[e], candidate, ratings.entry(e).rating);
    }
    out.support.push_back(m);
    out.log_weights.push_back(logw);
  }
  if (out.support.empty()) {
    throw NumericalError("empty support: no grid point between the neighboring cutpoints");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional samplers.
// ---------------------------------------------------------------------------

Opinion sample_opinion_conditional(int edge_index, const GibbsState& state,
                                   const RatingMatrix& ratings, StreamRng& rng) {
  const OpinionConditional cond = opinion_conditional(edge_index, state, ratings);
  return cond.support[static_cast<std::size_t>(
      categorical_from_log_weights(cond.log_weights, rng))];
}

Behavior sample_behavior_conditional(int trustee, const GibbsState& state,
                                     const RatingMatrix& ratings, StreamRng& rng) {
  const Opinion params = behavior_conditional_params(trustee, state, ratings);
  return dirichlet_sample(params.alpha, params.beta, params.gamma, rng);
}

std::pair<std::int64_t, Opinion> sample_lambda_conditional(int edge_index,
                                                           const GibbsState& state,
                                                           const RatingMatrix& ratings,
                                                           const SamplerConfig& config,
                                                           StreamRng& rng) {
  if (config.lambda_mode == LambdaMode::kFixed) {
    throw std::invalid_argument("no lambda move in fixed mode");
  }
  if (config.lambda_mode == LambdaMode::kPaperLiteral) {
    const LambdaLiteralConditional cond =
        lambda_literal_conditional(edge_index, state, config);
    const int k = categorical_from_log_weights(cond.log_weights, rng);
    return {cond.support[static_cast<std::size_t>(k)],
            state.opinions[static_cast<std::size_t>(edge_index)]};
  }
  const LambdaOpinionConditional cond =
      lambda_opinion_conditional(edge_index, state, ratings, config);
  const Opinion drawn = cond.support[static_cast<std::size_t>(
      categorical_from_log_weights(cond.log_weights, rng))];
  return {drawn.lambda(), drawn};
}

Bias sample_bias_conditional(int trustor, const GibbsState& state,
                             const RatingMatrix& ratings, const SamplerConfig& config,
                             StreamRng& rng) {
  const GridConditional cond = bias_conditional(trustor, state, ratings, config);
  return Bias{cond.support[static_cast<std::size_t>(
      categorical_from_log_weights(cond.log_weights, rng))]};
}

double sample_epsilon_conditional(const GibbsState& state, const RatingMatrix& ratings,
                                  const SamplerConfig& config, StreamRng& rng) {
  const GridConditional cond = epsilon_conditional(state, ratings, config);
  return cond.support[static_cast<std::size_t>(
      categorical_from_log_weights(cond.log_weights, rng))];
}

double sample_theta_conditional(int cutpoint_index, const GibbsState& state,
                                const RatingMatrix& ratings, const SamplerConfig& config,
                                StreamRng& rng) {
  const GridConditional cond = theta_conditional(cutpoint_index, state, ratings, config);
  return cond.support[static_cast<std::size_t>(
      categorical_from_log_weights(cond.log_weights, rng))];
}

// ---------------------------------------------------------------------------
// Sweep driver.
// ---------------------------------------------------------------------------

GibbsState gibbs_step(const GibbsState& state, const RatingMatrix& ratings,
                      const SamplerConfig& config, const SweepOptions& options) {
  config.validate();
  GibbsState next = state;
  next.iteration = state.iteration + 1;
  const auto t = static_cast<std::uint64_t>(next.iteration);
  const std::uint64_t seed = config.seed;

  auto log_update = [&](UpdateStage stage, int entity) {
    if (options.update_log != nullptr) {
      options.update_log->emplace_back(stage, entity);
    }
  };

  if (ratings.empty()) {
    return next;
  }

  // Behaviors. Within the stage the updates only read opinions, which do not
  // change here, so they can run in any order or in parallel.
  {
    const int n = ratings.num_trustees();
    for (int j = 0; j < n; ++j) {
      if (!ratings.edges_of_trustee()[static_cast<std::size_t>(j)].empty()) {
        log_update(UpdateStage::kBehavior, j);
      }
    }
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
      if (ratings.edges_of_trustee()[j].empty()) return;
      StreamRng rng = derive_stream(seed, t, stream_tag::kBehavior, j);
      next.behaviors[j] =
          sample_behavior_conditional(static_cast<int>(j), next, ratings, rng);
    });
  }

  // Opinions at fixed lambda.
  {
    for (std::size_t e = 0; e < ratings.size(); ++e) {
      log_update(UpdateStage::kOpinion, static_cast<int>(e));
    }
    parallel_for(ratings.size(), [&](std::size_t e) {
      StreamRng rng = derive_stream(seed, t, stream_tag::kOpinion, e);
      if (options.corrupt_opinion_weights) {
        const OpinionConditional cond =
            opinion_conditional(static_cast<int>(e), next, ratings);
        std::vector<double> probs = normalize_log_weights(cond.log_weights);
        std::rotate(probs.begin(), probs.begin() + 1, probs.end());
        next.opinions[e] = cond.support[static_cast<std::size_t>(
            categorical_from_probs(probs, rng))];
      } else {
        next.opinions[e] =
            sample_opinion_conditional(static_cast<int>(e), next, ratings, rng);
      }
    });
  }

  // Biases.
  {
    const int m = ratings.num_trustors();
    for (int i = 0; i < m; ++i) {
      if (!ratings.edges_of_trustor()[static_cast<std::size_t>(i)].empty()) {
        log_update(UpdateStage::kBias, i);
      }
    }
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
      if (ratings.edges_of_trustor()[i].empty()) return;
      StreamRng rng = derive_stream(seed, t, stream_tag::kBias, i);
      next.biases[i] =
          sample_bias_conditional(static_cast<int>(i), next, ratings, config, rng);
    });
  }

  // Lambdas (and their opinions, in the blocked move).
  if (config.lambda_mode != LambdaMode::kFixed) {
    for (std::size_t e = 0; e < ratings.size(); ++e) {
      log_update(UpdateStage::kLambda, static_cast<int>(e));
    }
    parallel_for(ratings.size(), [&](std::size_t e) {
      StreamRng rng = derive_stream(seed, t, stream_tag::kLambda, e);
      if (options.corrupt_opinion_weights &&
          config.lambda_mode == LambdaMode::kBlockedJoint) {
        const LambdaOpinionConditional cond =
            lambda_opinion_conditional(static_cast<int>(e), next, ratings, config);
        std::vector<double> probs = normalize_log_weights(cond.log_weights);
        std::rotate(probs.begin(), probs.begin() + 1, probs.end());
        next.opinions[e] = cond.support[static_cast<std::size_t>(
            categorical_from_probs(probs, rng))];
        return;
      }
      auto [lambda, op] =
          sample_lambda_conditional(static_cast<int>(e), next, ratings, config, rng);
      (void)lambda;
      next.opinions[e] = op;
    });
  }

  // Cutpoints, in index order; each update sees the cutpoints already
  // refreshed this sweep.
  for (int l = 1; l <= state.logit.levels - 1; ++l) {
    log_update(UpdateStage::kTheta, l);
    StreamRng rng = derive_stream(seed, t, stream_tag::kTheta,
                                  static_cast<std::uint64_t>(l));
    next.logit.theta[static_cast<std::size_t>(l - 1)] =
        sample_theta_conditional(l, next, ratings, config, rng);
  }

  // Slope.
  {
    log_update(UpdateStage::kEpsilon, 0);
    StreamRng rng = derive_stream(seed, t, stream_tag::kEpsilon, 0);
    next.logit.epsilon = sample_epsilon_conditional(next, ratings, config, rng);
  }

  return next;
}

GibbsState init_state(const RatingMatrix& ratings, const SamplerConfig& config) {
  config.validate();
  GibbsState state;
  state.iteration = 0;
  StreamRng rng = derive_stream(config.seed, 0, stream_tag::kInit, 0);

  state.behaviors.reserve(static_cast<std::size_t>(ratings.num_trustees()));
  for (int j = 0; j < ratings.num_trustees(); ++j) {
    state.behaviors.push_back(dirichlet_sample(1, 1, 1, rng));
  }
  state.biases.reserve(static_cast<std::size_t>(ratings.num_trustors()));
  for (int i = 0; i < ratings.num_trustors(); ++i) {
    state.biases.push_back(Bias{rng.next_double()});
  }
  state.opinions.reserve(ratings.size());
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    const std::int64_t lambda =
        (config.lambda_mode == LambdaMode::kFixed && config.fixed_lambda > 0)
            ? config.fixed_lambda
            : rng.next_int(1, config.lambda_max);
    const auto comps = enumerate_compositions(lambda);
    state.opinions.push_back(
        comps[static_cast<std::size_t>(rng.next_int(0, composition_count(lambda) - 1))]);
  }

  state.logit.levels = ratings.levels();
  const GridSpec eps_grid = config.epsilon_grid_spec();
  state.logit.epsilon = eps_grid.midpoint(
      static_cast<int>(rng.next_int(0, eps_grid.cells - 1)));

  // Cutpoints: distinct grid midpoints sorted decreasing, i.e. a uniform draw
  // from the strictly ordered tuples the chain lives on.
  const int num_cuts = ratings.levels() - 1;
  const GridSpec theta_grid = config.theta_grid_spec();
  if (theta_grid.cells < num_cuts) {
    throw std::invalid_argument("theta grid too coarse for the number of cutpoints");
  }
  std::vector<int> cells(static_cast<std::size_t>(theta_grid.cells));
  std::iota(cells.begin(), cells.end(), 0);
  for (int c = 0; c < num_cuts; ++c) {
    const auto pick = static_cast<std::size_t>(
        rng.next_int(c, static_cast<std::int64_t>(cells.size()) - 1));
    std::swap(cells[static_cast<std::size_t>(c)], cells[pick]);
  }
  cells.resize(static_cast<std::size_t>(num_cuts));
  std::sort(cells.begin(), cells.end(), std::greater<>());
  state.logit.theta.reserve(cells.size());
  for (int c : cells) state.logit.theta.push_back(theta_grid.midpoint(c));

  return state;
}

GibbsState sample_state_from_prior(const RatingMatrix& shape, const SamplerConfig& config,
                                   StreamRng& rng) {
  config.validate();
  GibbsState state;
  state.iteration = 0;
  for (int j = 0; j < shape.num_trustees(); ++j) {
    state.behaviors.push_back(dirichlet_sample(1, 1, 1, rng));
  }
  const GridSpec bias_grid = config.bias_grid_spec();
  for (int i = 0; i < shape.num_trustors(); ++i) {
    state.biases.push_back(Bias{bias_grid.midpoint(
        static_cast<int>(rng.next_int(0, bias_grid.cells - 1)))});
  }
  for (std::size_t e = 0; e < shape.size(); ++e) {
    const std::int64_t lambda = rng.next_int(1, config.lambda_max);
    const Behavior& behavior =
        state.behaviors[static_cast<std::size_t>(shape.entry(e).trustee)];
    state.opinions.push_back(forward_sample_opinion(behavior, lambda, rng));
  }
  state.logit.levels = shape.levels();
  const GridSpec eps_grid = config.epsilon_grid_spec();
  state.logit.epsilon =
      eps_grid.midpoint(static_cast<int>(rng.next_int(0, eps_grid.cells - 1)));
  const int num_cuts = shape.levels() - 1;
  const GridSpec theta_grid = config.theta_grid_spec();
  std::vector<int> cells(static_cast<std::size_t>(theta_grid.cells));
  std::iota(cells.begin(), cells.end(), 0);
  for (int c = 0; c < num_cuts; ++c) {
    const auto pick = static_cast<std::size_t>(
        rng.next_int(c, static_cast<std::int64_t>(cells.size()) - 1));
    std::swap(cells[static_cast<std::size_t>(c)], cells[pick]);
  }
  cells.resize(static_cast<std::size_t>(num_cuts));
  std::sort(cells.begin(), cells.end(), std::greater<>());
  for (int c : cells) state.logit.theta.push_back(theta_grid.midpoint(c));
  return state;
}

Trace gibbs_run_from(const GibbsState& initial, const RatingMatrix& ratings,
                     const SamplerConfig& config) {
  config.validate();
  if (ratings.empty()) {
    throw std::invalid_argument("gibbs_run needs a nonempty rating matrix");
  }
  validate_state(initial, ratings, config.lambda_max);
  Trace trace;
  trace.config = config;
  trace.samples.reserve(
      static_cast<std::size_t>((config.iterations - config.burn_in) / config.thin));
  GibbsState state = initial;
  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    state = gibbs_step(state, ratings, config);
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
      trace.samples.push_back(state);
    }
  }
  return trace;
}

Trace gibbs_run(const RatingMatrix& ratings, const SamplerConfig& config) {
  return gibbs_run_from(init_state(ratings, config), ratings, config);
}

// ---------------------------------------------------------------------------
// Posterior summaries.
// ---------------------------------------------------------------------------

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Opinion nearest_composition(double alpha_mean, double beta_mean, double gamma_mean) {
  const auto target = static_cast<std::int64_t>(
      std::llround(alpha_mean + beta_mean + gamma_mean));
  const std::int64_t lambda = std::max<std::int64_t>(1, target);
  Opinion best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Opinion& c : enumerate_compositions(lambda)) {
    const double da = static_cast<double>(c.alpha) - alpha_mean;
    const double db = static_cast<double>(c.beta) - beta_mean;
    const double dg = static_cast<double>(c.gamma) - gamma_mean;
    const double dist = da * da + db * db + dg * dg;
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

}  // namespace

PosteriorSummary summarize_posterior(const Trace& trace, const RatingMatrix& ratings) {
  if (trace.samples.empty()) {
    throw std::invalid_argument("cannot summarize an empty trace");
  }
  const std::size_t n = trace.samples.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  PosteriorSummary out;
  out.levels = ratings.levels();

  out.edges.resize(ratings.size());
  std::vector<double> beliefs(n);
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    EdgeSummary& edge = out.edges[e];
    edge.trustor = ratings.entry(e).trustor;
    edge.trustee = ratings.entry(e).trustee;
    double sa = 0.0, sb = 0.0, sg = 0.0, se = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const GibbsState& s = trace.samples[t];
      const Opinion& op = s.opinions[e];
      sa += static_cast<double>(op.alpha);
      sb += static_cast<double>(op.beta);
      sg += static_cast<double>(op.gamma);
      beliefs[t] = expected_belief(
          op, s.biases[static_cast<std::size_t>(edge.trustor)]);
      se += beliefs[t];
    }
    edge.alpha_mean = sa * inv_n;
    edge.beta_mean = sb * inv_n;
    edge.gamma_mean = sg * inv_n;
    edge.expected_belief_mean = se * inv_n;
    std::sort(beliefs.begin(), beliefs.end());
    edge.ci90_lo = quantile_sorted(beliefs, 0.05);
    edge.ci90_hi = quantile_sorted(beliefs, 0.95);
    edge.rounded = nearest_composition(edge.alpha_mean, edge.beta_mean, edge.gamma_mean);
  }

  const auto num_trustees = static_cast<std::size_t>(ratings.num_trustees());
  out.behavior_means.assign(num_trustees, {0.0, 0.0, 0.0});
  for (const GibbsState& s : trace.samples) {
    for (std::size_t j = 0; j < num_trustees; ++j) {
      out.behavior_means[j][0] += s.behaviors[j].b * inv_n;
      out.behavior_means[j][1] += s.behaviors[j].d * inv_n;
      out.behavior_means[j][2] += s.behaviors[j].n * inv_n;
    }
  }
  const auto num_trustors = static_cast<std::size_t>(ratings.num_trustors());
  out.bias_means.assign(num_trustors, 0.0);
  for (const GibbsState& s : trace.samples) {
    for (std::size_t i = 0; i < num_trustors; ++i) {
      out.bias_means[i] += s.biases[i].a * inv_n;
    }
  }
  out.theta_means.assign(trace.samples.front().logit.theta.size(), 0.0);
  for (const GibbsState& s : trace.samples) {
    out.epsilon_mean += s.logit.epsilon * inv_n;
    for (std::size_t l = 0; l < out.theta_means.size(); ++l) {
      out.theta_means[l] += s.logit.theta[l] * inv_n;
    }
  }
  return out;
}

}  // namespace opinionforge
