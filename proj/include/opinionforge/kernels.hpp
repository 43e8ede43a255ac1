#pragma once

#include <cstdint>
#include <vector>

#include "opinionforge/types.hpp"

namespace opinionforge {

// log(n!) with a cached table for small n.
double log_factorial(std::int64_t n);

// Numerically stable logistic sigma(z) = 1 / (1 + exp(-z)).
double logistic(double z);

// log(sigma(z)) without overflow for large |z|.
double log_logistic(double z);

// Expected belief E(omega) = (alpha + a * gamma) / (alpha + beta + gamma).
// Throws std::invalid_argument on a degenerate opinion (lambda == 0).
double expected_belief(const Opinion& op, const Bias& bias);

// log P(y = level | x) for the ordered logit model
//   P(y > l) = sigma(epsilon * x + theta_l),
// expanded to the per-level differences. Computed in log space so that far
// tail levels keep graded (tiny) probabilities instead of collapsing to zero.
// `level` is 1-based.
double ordered_logit_log_level(double x, const LogitParams& params, int level);

// The full probability vector [P(y=1), ..., P(y=L)]. Components are
// nonnegative and sum to 1 within 1e-12 for valid params.
std::vector<double> ordered_logit_pmf(double x, const LogitParams& params);

// log of the multinomial pmf of the evidence counts (alpha, beta, gamma)
// under behavior (b, d, n):
//   log[ lambda! / (alpha! beta! gamma!) * b^alpha d^beta n^gamma ]
// Returns -inf when a category with zero probability has a positive count.
double multinomial_log_pmf(const Opinion& op, const Behavior& behavior);

// log density of Dirichlet(alpha, beta, gamma) at the simplex point
// (b, d, n). All three parameters must be >= 1 (the density exponents are
// alpha - 1 etc.); otherwise throws std::invalid_argument.
double dirichlet_log_pdf(const Behavior& point, const Opinion& params);

// Number of compositions of lambda into three nonnegative parts.
std::int64_t composition_count(std::int64_t lambda);

// All (alpha, beta, gamma) with alpha + beta + gamma = lambda, enumerated in
// a fixed order: alpha descending, then beta descending. The order is part
// of the reproducibility contract (categorical indices over compositions
// must agree across runs and implementations).
std::vector<Opinion> enumerate_compositions(std::int64_t lambda);

}  // namespace opinionforge
