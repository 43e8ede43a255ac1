#include "opinionforge/generative.hpp"

#include <algorithm>
#include <stdexcept>

#include "opinionforge/kernels.hpp"

namespace opinionforge {

void GroundTruth::validate(std::int64_t lambda_max) const {
  logit.validate();
  for (const Behavior& b : behaviors) b.validate();
  for (const Bias& a : biases) a.validate();
  for (const LambdaEntry& e : lambdas) {
    if (e.trustor < 0 || e.trustor >= num_trustors() || e.trustee < 0 ||
        e.trustee >= num_trustees()) {
      throw std::invalid_argument("ground-truth edge out of range");
    }
    if (e.lambda < 1 || e.lambda > lambda_max) {
      throw std::invalid_argument("ground-truth lambda outside [1, lambda_max]");
    }
  }
}

Opinion forward_sample_opinion(const Behavior& behavior, std::int64_t lambda,
                               StreamRng& rng) {
  behavior.validate();
  if (lambda < 1) {
    throw std::invalid_argument("forward_sample_opinion requires lambda >= 1");
  }
  const double probs[3] = {behavior.b, behavior.d, behavior.n};
  Opinion op;
  for (std::int64_t k = 0; k < lambda; ++k) {
    switch (categorical_from_probs(probs, rng)) {
      case 0: ++op.alpha; break;
      case 1: ++op.beta; break;
      default: ++op.gamma; break;
    }
  }
  return op;
}

int forward_sample_rating(const Opinion& op, const Bias& bias,
                          const LogitParams& logit, StreamRng& rng) {
  const std::vector<double> pmf = ordered_logit_pmf(expected_belief(op, bias), logit);
  return categorical_from_probs(pmf, rng) + 1;
}

GeneratedNetwork forward_generate_network(const GroundTruth& truth, std::uint64_t seed) {
  GeneratedNetwork out;
  out.ratings = RatingMatrix(truth.num_trustors(), truth.num_trustees(),
                             truth.logit.levels);
  out.opinions.reserve(truth.lambdas.size());
  for (const LambdaEntry& e : truth.lambdas) {
    StreamRng rng = derive_stream(seed, stream_tag::kForwardEdge,
                                  static_cast<std::uint64_t>(e.trustor),
                                  static_cast<std::uint64_t>(e.trustee));
    const Behavior& behavior = truth.behaviors[static_cast<std::size_t>(e.trustee)];
    const Bias& bias = truth.biases[static_cast<std::size_t>(e.trustor)];
    Opinion op = forward_sample_opinion(behavior, e.lambda, rng);
    int rating = forward_sample_rating(op, bias, truth.logit, rng);
    out.ratings.add(e.trustor, e.trustee, rating);
    out.opinions.push_back(op);
  }
  // truth.lambdas is sorted by (trustor, trustee), so positions line up with
  // the matrix's entry order.
  return out;
}

GroundTruth sample_ground_truth(int num_trustors, int num_trustees,
                                std::int64_t lambda_lo, std::int64_t lambda_hi,
                                const LogitParams& logit, std::uint64_t seed) {
  if (num_trustors < 1 || num_trustees < 1) {
    throw std::invalid_argument("network needs at least one trustor and trustee");
  }
  if (lambda_lo < 1 || lambda_hi < lambda_lo) {
    throw std::invalid_argument("lambda range must satisfy 1 <= lo <= hi");
  }
  logit.validate();
  GroundTruth truth;
  truth.logit = logit;
  StreamRng rng = derive_stream(seed, stream_tag::kTruth, 0, 0);
  truth.behaviors.reserve(static_cast<std::size_t>(num_trustees));
  for (int j = 0; j < num_trustees; ++j) {
    truth.behaviors.push_back(dirichlet_sample(1, 1, 1, rng));
  }
  truth.biases.reserve(static_cast<std::size_t>(num_trustors));
  for (int i = 0; i < num_trustors; ++i) {
    truth.biases.push_back(Bias{rng.next_double()});
  }
  for (int i = 0; i < num_trustors; ++i) {
    for (int j = 0; j < num_trustees; ++j) {
      truth.lambdas.push_back(LambdaEntry{i, j, rng.next_int(lambda_lo, lambda_hi)});
    }
  }
  return truth;
}

}  // namespace opinionforge
