#include "opinionforge/kernels.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace opinionforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(4096);
    t[0] = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) {
      t[n] = t[n - 1] + std::log(static_cast<double>(n));
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) {
    throw std::invalid_argument("log_factorial of a negative number");
  }
  const auto& table = log_factorial_table();
  if (n < static_cast<std::int64_t>(table.size())) {
    return table[static_cast<std::size_t>(n)];
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_logistic(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double expected_belief(const Opinion& op, const Bias& bias) {
  op.validate();
  bias.validate();
  const std::int64_t lambda = op.lambda();
  if (lambda == 0) {
    throw std::invalid_argument("expected_belief of a degenerate opinion (lambda = 0)");
  }
  return (static_cast<double>(op.alpha) + bias.a * static_cast<double>(op.gamma)) /
         static_cast<double>(lambda);
}

double ordered_logit_log_level(double x, const LogitParams& params, int level) {
  params.validate();
  if (level < 1 || level > params.levels) {
    throw std::invalid_argument("rating level out of range");
  }
  const double ex = params.epsilon * x;
  if (level == 1) {
    // P(y = 1) = 1 - sigma(ex + theta_1) = sigma(-(ex + theta_1))
    return log_logistic(-(ex + params.theta.front()));
  }
  if (level == params.levels) {
    return log_logistic(ex + params.theta.back());
  }
  // P(y = l) = sigma(u) - sigma(v) with u = ex + theta_{l-1} >= v = ex + theta_l,
  // rewritten as sigma(u) sigma(-v) (1 - exp(v - u)) to avoid cancellation.
  const double u = ex + params.theta[static_cast<std::size_t>(level - 2)];
  const double v = ex + params.theta[static_cast<std::size_t>(level - 1)];
  if (v >= u) {
    return kNegInf;
  }
  return log_logistic(u) + log_logistic(-v) + std::log1p(-std::exp(v - u));
}

std::vector<double> ordered_logit_pmf(double x, const LogitParams& params) {
  params.validate();
  std::vector<double> pmf(static_cast<std::size_t>(params.levels));
  for (int l = 1; l <= params.levels; ++l) {
    pmf[static_cast<std::size_t>(l - 1)] = std::exp(ordered_logit_log_level(x, params, l));
  }
  return pmf;
}

double multinomial_log_pmf(const Opinion& op, const Behavior& behavior) {
  op.validate();
  behavior.validate();
  double logp = log_factorial(op.lambda()) - log_factorial(op.alpha) -
                log_factorial(op.beta) - log_factorial(op.gamma);
  const std::array<std::pair<std::int64_t, double>, 3> terms{
      {{op.alpha, behavior.b}, {op.beta, behavior.d}, {op.gamma, behavior.n}}};
  for (const auto& [count, prob] : terms) {
    if (count == 0) continue;  // 0 * log(0) treated as 0
    if (prob <= 0.0) return kNegInf;
    logp += static_cast<double>(count) * std::log(prob);
  }
  return logp;
}

double dirichlet_log_pdf(const Behavior& point, const Opinion& params) {
  point.validate();
  if (params.alpha < 1 || params.beta < 1 || params.gamma < 1) {
    throw std::invalid_argument("dirichlet_log_pdf requires all parameters >= 1");
  }
  double logp = log_factorial(params.lambda() - 1) - log_factorial(params.alpha - 1) -
                log_factorial(params.beta - 1) - log_factorial(params.gamma - 1);
  const std::array<std::pair<std::int64_t, double>, 3> terms{
      {{params.alpha, point.b}, {params.beta, point.d}, {params.gamma, point.n}}};
  for (const auto& [param, coord] : terms) {
    const double exponent = static_cast<double>(param - 1);
    if (exponent == 0.0) continue;
    if (coord <= 0.0) return kNegInf;
    logp += exponent * std::log(coord);
  }
  return logp;
}

std::int64_t composition_count(std::int64_t lambda) {
  if (lambda < 0) {
    throw std::invalid_argument("composition_count of a negative total");
  }
  return (lambda + 1) * (lambda + 2) / 2;
}

std::vector<Opinion> enumerate_compositions(std::int64_t lambda) {
  if (lambda < 0) {
    throw std::invalid_argument("enumerate_compositions of a negative total");
  }
  std::vector<Opinion> out;
  out.reserve(static_cast<std::size_t>(composition_count(lambda)));
  for (std::int64_t alpha = lambda; alpha >= 0; --alpha) {
    for (std::int64_t beta = lambda - alpha; beta >= 0; --beta) {
      out.push_back(Opinion{alpha, beta, lambda - alpha - beta});
    }
  }
  return out;
}

}  // namespace opinionforge
