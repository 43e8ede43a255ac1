#pragma once

#include <cstdint>
#include <vector>

#include "opinionforge/rng.hpp"
#include "opinionforge/types.hpp"

namespace opinionforge {

struct LambdaEntry {
  int trustor = 0;
  int trustee = 0;
  std::int64_t lambda = 1;
};

// Known generative parameters for a synthetic network. The edge set and the
// per-edge evidence totals are inputs: which pairs interact, and how much,
// is experiment design rather than part of the model.
struct GroundTruth {
  std::vector<Behavior> behaviors;   // per trustee
  std::vector<Bias> biases;          // per trustor
  std::vector<LambdaEntry> lambdas;  // sorted by (trustor, trustee)
  LogitParams logit;

  int num_trustors() const { return static_cast<int>(biases.size()); }
  int num_trustees() const { return static_cast<int>(behaviors.size()); }

  void validate(std::int64_t lambda_max) const;
};

// Draws evidence counts ~ Mul(behavior, lambda) as lambda categorical pulls.
Opinion forward_sample_opinion(const Behavior& behavior, std::int64_t lambda,
                               StreamRng& rng);

// Draws a rating level with probabilities
// ordered_logit_pmf(expected_belief(op, bias), logit).
int forward_sample_rating(const Opinion& op, const Bias& bias,
                          const LogitParams& logit, StreamRng& rng);

struct GeneratedNetwork {
  RatingMatrix ratings;
  std::vector<Opinion> opinions;  // aligned with ratings.entries()
};

// Samples an opinion and then a rating for every edge in truth.lambdas.
// Each edge consumes an independent stream keyed by (seed, trustor, trustee),
// so edges can be generated in any order or in parallel with identical
// results. The latent opinions are returned for recovery scoring.
GeneratedNetwork forward_generate_network(const GroundTruth& truth, std::uint64_t seed);

// Convenience for experiments and the CLI: behaviors ~ Dirichlet(1,1,1),
// biases ~ U[0,1], lambdas uniform in [lambda_lo, lambda_hi] over a complete
// trustor x trustee edge set. epsilon/theta are taken as given.
GroundTruth sample_ground_truth(int num_trustors, int num_trustees,
                                std::int64_t lambda_lo, std::int64_t lambda_hi,
                                const LogitParams& logit, std::uint64_t seed);

}  // namespace opinionforge
