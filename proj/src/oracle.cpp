#include "opinionforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "opinionforge/kernels.hpp"

namespace opinionforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool strictly_decreasing(const std::vector<double>& theta) {
  for (std::size_t l = 0; l + 1 < theta.size(); ++l) {
    if (!(theta[l] > theta[l + 1])) return false;
  }
  return true;
}

// All strictly decreasing (levels - 1)-tuples of theta grid midpoints, in
// lexicographic cell order. This is the cutpoint support of the discretized
// joint.
std::vector<std::vector<double>> ordered_theta_tuples(const GridSpec& grid, int levels) {
  const std::vector<double> mids = grid.midpoints();
  std::vector<std::vector<double>> tuples;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == levels - 1) {
      std::vector<double> t;
      t.reserve(pick.size());
      for (int c : pick) t.push_back(mids[static_cast<std::size_t>(c)]);
      tuples.push_back(std::move(t));
      return;
    }
    for (int c = start; c < grid.cells; ++c) {
      pick.push_back(c);
      rec(c + 1);
      pick.pop_back();
    }
  };
  rec(0);
  // Cells were chosen increasing; cutpoints are the same combinations read
  // decreasing.
  for (auto& t : tuples) std::reverse(t.begin(), t.end());
  return tuples;
}

double binomial(double n, double k) {
  double r = 1.0;
  for (int i = 0; i < static_cast<int>(k); ++i) {
    r = r * (n - i) / (i + 1.0);
  }
  return r;
}

}  // namespace

void OracleConfig::validate() const {
  if (lambda_max < 1 || lambda_max > 4) {
    throw std::invalid_argument("oracle lambda_max must lie in [1, 4]");
  }
  if (bias_grid < 2 || bias_grid > 11 || epsilon_grid < 2 || epsilon_grid > 11 ||
      theta_grid < 2 || theta_grid > 11) {
    throw std::invalid_argument("oracle grids must lie in [2, 11]");
  }
  if (behavior_grid < 1 || behavior_grid > 10) {
    throw std::invalid_argument("oracle behavior grid must lie in [1, 10]");
  }
  bias_grid_spec().validate();
  epsilon_grid_spec().validate();
  theta_grid_spec().validate();
  if (lambda_mode == LambdaMode::kPaperLiteral) {
    throw std::invalid_argument("the literal lambda move has no joint to enumerate");
  }
}

SamplerConfig OracleConfig::matching_sampler_config() const {
  SamplerConfig config;
  config.lambda_max = lambda_max;
  config.bias_grid = bias_grid;
  config.epsilon_grid = epsilon_grid;
  config.theta_grid = theta_grid;
  config.epsilon_lo = epsilon_lo;
  config.epsilon_hi = epsilon_hi;
  config.theta_lo = theta_lo;
  config.theta_hi = theta_hi;
  config.lambda_mode = lambda_mode;
  return config;
}

std::vector<Behavior> simplex_centroids(int subdivisions) {
  if (subdivisions < 1) {
    throw std::invalid_argument("simplex subdivision count must be positive");
  }
  const int k = subdivisions;
  std::vector<Behavior> points;
  points.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  const double scale = 1.0 / (3.0 * k);
  // Upward triangles: vertices (i,j,l)+e1,e2,e3 over i+j+l = k-1.
  for (int i = 0; i + 1 <= k; ++i) {
    for (int j = 0; i + j + 1 <= k; ++j) {
      const int l = k - 1 - i - j;
      points.push_back(Behavior{(3 * i + 1) * scale, (3 * j + 1) * scale,
                                (3 * l + 1) * scale});
    }
  }
  // Downward triangles over i+j+l = k-2.
  for (int i = 0; i + 2 <= k; ++i) {
    for (int j = 0; i + j + 2 <= k; ++j) {
      const int l = k - 2 - i - j;
      points.push_back(Behavior{(3 * i + 2) * scale, (3 * j + 2) * scale,
                                (3 * l + 2) * scale});
    }
  }
  return points;
}

double oracle_state_count(const RatingMatrix& ratings, const OracleConfig& config) {
  const double behavior_points =
      static_cast<double>(config.behavior_grid) * config.behavior_grid;
  const int cuts = ratings.levels() - 1;
  double count = static_cast<double>(config.epsilon_grid) *
                 binomial(config.theta_grid, cuts);
  count *= std::pow(behavior_points, ratings.num_trustees());
  count *= std::pow(static_cast<double>(config.bias_grid), ratings.num_trustors());
  double edge_support = 0.0;
  for (std::int64_t l = 1; l <= config.lambda_max; ++l) {
    edge_support += static_cast<double>(composition_count(l));
  }
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    if (config.lambda_mode == LambdaMode::kFixed) {
      count *= static_cast<double>(composition_count(config.fixed_lambdas.at(e)));
    } else {
      count *= edge_support;
    }
  }
  return count;
}

double log_joint(const GibbsState& state, const RatingMatrix& ratings) {
  if (!strictly_decreasing(state.logit.theta)) {
    return kNegInf;
  }
  double logp = 0.0;
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    const RatingEntry& entry = ratings.entry(e);
    const Opinion& op = state.opinions[e];
    const Behavior& behavior = state.behaviors[static_cast<std::size_t>(entry.trustee)];
    const Bias& bias = state.biases[static_cast<std::size_t>(entry.trustor)];
    logp += multinomial_log_pmf(op, behavior);
    if (logp == kNegInf) return kNegInf;
    logp += ordered_logit_log_level(expected_belief(op, bias), state.logit, entry.rating);
    if (logp == kNegInf) return kNegInf;
  }
  return logp;
}

// ---------------------------------------------------------------------------
// Full enumeration.
// ---------------------------------------------------------------------------

namespace {

// Per-edge candidate table: support opinions with their multinomial-free
// data (expected belief depends on the bias, so it is recomputed per bias
// candidate).
struct EdgeSupport {
  std::vector<Opinion> support;
};

// Everything indexed by the outer (epsilon, theta, behaviors) assignment is
// recomputed in the inner loops; the instance sizes the oracle accepts keep
// that affordable.
struct Workspace {
  std::vector<EdgeSupport> edges;
  std::vector<Behavior> behavior_points;
  std::vector<double> bias_points;
  std::vector<double> epsilon_points;
  std::vector<std::vector<double>> theta_tuples;
};

}  // namespace

ExactPosterior exact_posterior(const RatingMatrix& ratings, const OracleConfig& config) {
  config.validate();
  if (ratings.empty()) {
    throw std::invalid_argument("exact_posterior needs a nonempty rating matrix");
  }
  if (config.lambda_mode == LambdaMode::kFixed &&
      config.fixed_lambdas.size() != ratings.size()) {
    throw std::invalid_argument("fixed mode needs one lambda per observed edge");
  }
  if (oracle_state_count(ratings, config) > 1e8) {
    throw DataError("instance too large: discrete joint exceeds 1e8 states");
  }

  Workspace ws;
  ws.behavior_points = simplex_centroids(config.behavior_grid);
  ws.bias_points = config.bias_grid_spec().midpoints();
  ws.epsilon_points = config.epsilon_grid_spec().midpoints();
  ws.theta_tuples = ordered_theta_tuples(config.theta_grid_spec(), ratings.levels());
  ws.edges.resize(ratings.size());
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    if (config.lambda_mode == LambdaMode::kFixed) {
      ws.edges[e].support = enumerate_compositions(config.fixed_lambdas[e]);
    } else {
      ws.edges[e].support = blocked_lambda_support(config.lambda_max);
    }
  }

  const auto num_trustors = static_cast<std::size_t>(ratings.num_trustors());
  const auto num_trustees = static_cast<std::size_t>(ratings.num_trustees());
  const std::size_t nb = ws.behavior_points.size();
  const std::size_t na = ws.bias_points.size();

  ExactPosterior out;
  out.edge_supports.resize(ratings.size());
  out.edge_marginals.resize(ratings.size());
  out.edge_expected_belief_mean.assign(ratings.size(), 0.0);
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    out.edge_supports[e] = ws.edges[e].support;
    out.edge_marginals[e].assign(ws.edges[e].support.size(), 0.0);
  }
  out.behavior_marginals.assign(num_trustees, std::vector<double>(nb, 0.0));
  out.bias_marginals.assign(num_trustors, std::vector<double>(na, 0.0));
  out.epsilon_marginal.assign(ws.epsilon_points.size(), 0.0);
  out.theta_marginals.assign(ws.theta_tuples.empty() ? 0 : ws.theta_tuples[0].size(),
                             std::vector<double>(config.theta_grid, 0.0));
  const std::vector<double> theta_mids = config.theta_grid_spec().midpoints();

  LogitParams logit;
  logit.levels = ratings.levels();

  // Behavior assignment = one centroid index per trustee, enumerated as a
  // mixed-radix counter.
  std::vector<std::size_t> b_idx(num_trustees, 0);

  // Per (epsilon, theta, behaviors): for trustor i and bias candidate a,
  // edge_sum[i][a][e over i's edges] are the per-edge support sums, and the
  // per-candidate pmf tables are kept so marginals can be accumulated with
  // the right partial products.
  double total_mass = 0.0;

  for (std::size_t ei = 0; ei < ws.epsilon_points.size(); ++ei) {
    logit.epsilon = ws.epsilon_points[ei];
    for (std::size_t ti = 0; ti < ws.theta_tuples.size(); ++ti) {
      logit.theta = ws.theta_tuples[ti];
      std::fill(b_idx.begin(), b_idx.end(), 0);
      while (true) {
        // --- evaluate this (epsilon, theta, B) block ---------------------
        // edge_tables[e][k] = Mul(omega_k | B_j) * P(r | omega_k, a) is split:
        // mult part depends on B only, level part on (a, epsilon, theta).
        // For each trustor, Z_i(a) = prod_{e in edges(i)} sum_k table.
        // The block's contribution to the joint is prod_i sum_a Z_i(a) / na.
        std::vector<std::vector<double>> mult(ratings.size());
        for (std::size_t e = 0; e < ratings.size(); ++e) {
          const Behavior& bj =
              ws.behavior_points[b_idx[static_cast<std::size_t>(
                  ratings.entry(e).trustee)]];
          mult[e].resize(ws.edges[e].support.size());
          for (std::size_t k = 0; k < ws.edges[e].support.size(); ++k) {
            mult[e][k] = std::exp(multinomial_log_pmf(ws.edges[e].support[k], bj));
          }
        }
        // Per trustor: per bias candidate, per edge: the support pmf rows
        // (unnormalized) and their sums.
        std::vector<std::vector<std::vector<std::vector<double>>>> rows(num_trustors);
        std::vector<std::vector<double>> z_of_a(num_trustors);
        std::vector<double> z_i(num_trustors, 0.0);
        for (std::size_t i = 0; i < num_trustors; ++i) {
          const auto& edges = ratings.edges_of_trustor()[i];
          rows[i].resize(na);
          z_of_a[i].assign(na, 1.0);
          for (std::size_t ai = 0; ai < na; ++ai) {
            const Bias bias{ws.bias_points[ai]};
            rows[i][ai].resize(edges.size());
            for (std::size_t eo = 0; eo < edges.size(); ++eo) {
              const auto e = static_cast<std::size_t>(edges[eo]);
              const RatingEntry& entry = ratings.entry(e);
              auto& row = rows[i][ai][eo];
              row.resize(ws.edges[e].support.size());
              double sum = 0.0;
              for (std::size_t k = 0; k < ws.edges[e].support.size(); ++k) {
                const double lev = std::exp(ordered_logit_log_level(
                    expected_belief(ws.edges[e].support[k], bias), logit,
                    entry.rating));
                row[k] = mult[e][k] * lev;
                sum += row[k];
              }
              z_of_a[i][ai] *= sum;
            }
            z_i[i] += z_of_a[i][ai];
          }
        }
        double block = 1.0;
        for (std::size_t i = 0; i < num_trustors; ++i) block *= z_i[i];
        total_mass += block;

        // --- marginal accumulation ---------------------------------------
        if (block > 0.0) {
          out.epsilon_marginal[ei] += block;
          for (std::size_t l = 0; l < logit.theta.size(); ++l) {
            const auto cell = static_cast<std::size_t>(
                std::find(theta_mids.begin(), theta_mids.end(), logit.theta[l]) -
                theta_mids.begin());
            out.theta_marginals[l][cell] += block;
          }
          for (std::size_t j = 0; j < num_trustees; ++j) {
            out.behavior_marginals[j][b_idx[j]] += block;
          }
          for (std::size_t i = 0; i < num_trustors; ++i) {
            const double others = z_i[i] > 0.0 ? block / z_i[i] : 0.0;
            const auto& edges = ratings.edges_of_trustor()[i];
            for (std::size_t ai = 0; ai < na; ++ai) {
              out.bias_marginals[i][ai] += others * z_of_a[i][ai];
              if (z_of_a[i][ai] <= 0.0) continue;
              const Bias bias{ws.bias_points[ai]};
              for (std::size_t eo = 0; eo < edges.size(); ++eo) {
                const auto e = static_cast<std::size_t>(edges[eo]);
                double edge_sum = 0.0;
                for (double w : rows[i][ai][eo]) edge_sum += w;
                if (edge_sum <= 0.0) continue;
                const double scale = others * z_of_a[i][ai] / edge_sum;
                for (std::size_t k = 0; k < rows[i][ai][eo].size(); ++k) {
                  const double mass = scale * rows[i][ai][eo][k];
                  out.edge_marginals[e][k] += mass;
                  out.edge_expected_belief_mean[e] +=
                      mass * expected_belief(ws.edges[e].support[k], bias);
                }
              }
            }
          }
        }

        // --- advance the behavior counter ---------------------------------
        std::size_t pos = 0;
        while (pos < num_trustees) {
          if (++b_idx[pos] < nb) break;
          b_idx[pos] = 0;
          ++pos;
        }
        if (pos == num_trustees) break;
      }
    }
  }

  if (!(total_mass > 0.0)) {
    throw NumericalError("zero normalizer: the discrete joint carries no mass");
  }

  auto normalize = [total_mass](std::vector<double>& v) {
    for (double& x : v) x /= total_mass;
  };
  normalize(out.epsilon_marginal);
  for (auto& m : out.theta_marginals) normalize(m);
  for (auto& m : out.behavior_marginals) normalize(m);
  for (auto& m : out.bias_marginals) normalize(m);
  for (auto& m : out.edge_marginals) normalize(m);
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    out.edge_expected_belief_mean[e] /= total_mass;
  }

  out.epsilon_mean = 0.0;
  for (std::size_t k = 0; k < ws.epsilon_points.size(); ++k) {
    out.epsilon_mean += ws.epsilon_points[k] * out.epsilon_marginal[k];
  }
  out.theta_means.assign(out.theta_marginals.size(), 0.0);
  for (std::size_t l = 0; l < out.theta_marginals.size(); ++l) {
    for (std::size_t c = 0; c < theta_mids.size(); ++c) {
      out.theta_means[l] += theta_mids[c] * out.theta_marginals[l][c];
    }
  }
  out.behavior_means.assign(num_trustees, {0.0, 0.0, 0.0});
  for (std::size_t j = 0; j < num_trustees; ++j) {
    for (std::size_t p = 0; p < nb; ++p) {
      out.behavior_means[j][0] += ws.behavior_points[p].b * out.behavior_marginals[j][p];
      out.behavior_means[j][1] += ws.behavior_points[p].d * out.behavior_marginals[j][p];
      out.behavior_means[j][2] += ws.behavior_points[p].n * out.behavior_marginals[j][p];
    }
  }
  out.bias_means.assign(num_trustors, 0.0);
  for (std::size_t i = 0; i < num_trustors; ++i) {
    for (std::size_t ai = 0; ai < na; ++ai) {
      out.bias_means[i] += ws.bias_points[ai] * out.bias_marginals[i][ai];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional Bayes quotients.
// ---------------------------------------------------------------------------

std::vector<double> conditional_pmf_oracle(OracleTarget target, int entity,
                                           const GibbsState& state,
                                           const RatingMatrix& ratings,
                                           const OracleConfig& config) {
  GibbsState probe = state;
  std::vector<double> log_weights;

  switch (target) {
    case OracleTarget::kOpinion: {
      const auto e = static_cast<std::size_t>(entity);
      for (const Opinion& c :
           enumerate_compositions(state.opinions.at(e).lambda())) {
        probe.opinions[e] = c;
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
    case OracleTarget::kLambdaOpinion: {
      const auto e = static_cast<std::size_t>(entity);
      for (const Opinion& c : blocked_lambda_support(config.lambda_max)) {
        probe.opinions[e] = c;
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
    case OracleTarget::kBehavior: {
      const auto j = static_cast<std::size_t>(entity);
      for (const Behavior& c : simplex_centroids(config.behavior_grid)) {
        probe.behaviors[j] = c;
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
    case OracleTarget::kBias: {
      const auto i = static_cast<std::size_t>(entity);
      for (double c : config.bias_grid_spec().midpoints()) {
        probe.biases[i] = Bias{c};
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
    case OracleTarget::kEpsilon: {
      for (double c : config.epsilon_grid_spec().midpoints()) {
        probe.logit.epsilon = c;
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
    case OracleTarget::kTheta: {
      const auto l = static_cast<std::size_t>(entity - 1);
      for (double c : config.theta_grid_spec().midpoints()) {
        probe.logit.theta[l] = c;
        log_weights.push_back(log_joint(probe, ratings));
      }
      break;
    }
  }
  return normalize_log_weights(log_weights);
}

}  // namespace opinionforge
