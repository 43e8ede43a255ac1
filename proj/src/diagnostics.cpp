#include "opinionforge/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "opinionforge/kernels.hpp"

namespace opinionforge {

namespace {

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size());
}

}  // namespace

double effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) {
    throw std::invalid_argument("effective_sample_size needs at least 10 points");
  }
  const double mean = mean_of(series);
  const double c0 = variance_of(series, mean);
  if (c0 <= 0.0) {
    // A constant series carries no autocorrelation signal; treat it as n
    // independent observations of its (exactly known) value.
    return static_cast<double>(n);
  }
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      s += (series[t] - mean) * (series[t + lag] - mean);
    }
    return s / static_cast<double>(n);
  };
  // Initial positive sequence: accumulate rho in adjacent pairs while the
  // pair sums stay positive.
  double tau = 1.0;
  for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0);
  return static_cast<double>(n) / tau;
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman needs two equally sized series (n >= 2)");
  }
  auto ranks = [](std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t s = 0;
    while (s < n) {
      std::size_t e = s;
      while (e + 1 < n && v[order[e + 1]] == v[order[s]]) ++e;
      const double avg = 0.5 * static_cast<double>(s + e) + 1.0;  // average rank
      for (std::size_t k = s; k <= e; ++k) r[order[k]] = avg;
      s = e + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double mx = mean_of(rx), my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    return 0.0;  // a constant input has no ranking to agree with
  }
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Monitored scalars.
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> scalar_names(int num_cutpoints) {
  std::vector<std::string> names = {"mean_expected_belief", "mean_behavior_b",
                                    "mean_behavior_d", "mean_bias", "epsilon"};
  for (int l = 1; l <= num_cutpoints; ++l) {
    names.push_back("theta_" + std::to_string(l));
  }
  names.push_back("mean_lambda");
  return names;
}

std::vector<double> state_scalars(const GibbsState& state, const RatingMatrix& ratings) {
  std::vector<double> out;
  double se = 0.0, slam = 0.0;
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    se += expected_belief(state.opinions[e],
                          state.biases[static_cast<std::size_t>(ratings.entry(e).trustor)]);
    slam += static_cast<double>(state.opinions[e].lambda());
  }
  const double ne = std::max<double>(1.0, static_cast<double>(ratings.size()));
  out.push_back(se / ne);
  double sb = 0.0, sd = 0.0;
  for (const Behavior& b : state.behaviors) {
    sb += b.b;
    sd += b.d;
  }
  const double nj = std::max<double>(1.0, static_cast<double>(state.behaviors.size()));
  out.push_back(sb / nj);
  out.push_back(sd / nj);
  double sa = 0.0;
  for (const Bias& a : state.biases) sa += a.a;
  out.push_back(sa / std::max<double>(1.0, static_cast<double>(state.biases.size())));
  out.push_back(state.logit.epsilon);
  for (double t : state.logit.theta) out.push_back(t);
  out.push_back(slam / ne);
  return out;
}

}  // namespace

MonitoredSeries monitored_scalars(const Trace& trace, const RatingMatrix& ratings) {
  if (trace.samples.empty()) {
    throw std::invalid_argument("empty trace");
  }
  MonitoredSeries out;
  out.names = scalar_names(ratings.levels() - 1);
  out.series.assign(out.names.size(), {});
  for (auto& s : out.series) s.reserve(trace.samples.size());
  out.iterations.reserve(trace.samples.size());
  for (const GibbsState& state : trace.samples) {
    const std::vector<double> vals = state_scalars(state, ratings);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      out.series[k].push_back(vals[k]);
    }
    out.iterations.push_back(state.iteration);
  }
  return out;
}

ChainStats trace_diagnostics(const Trace& trace, const RatingMatrix& ratings) {
  const MonitoredSeries mon = monitored_scalars(trace, ratings);
  ChainStats stats;
  stats.names = mon.names;
  stats.samples = trace.samples.size();
  stats.thin = trace.config.thin;
  for (const auto& series : mon.series) {
    stats.ess.push_back(effective_sample_size(series));
    // Within-chain z: first 10% against last 50%, ESS-adjusted.
    const std::size_t n = series.size();
    const std::size_t na = std::max<std::size_t>(10, n / 10);
    const std::size_t nb = std::max<std::size_t>(10, n / 2);
    std::span<const double> head(series.data(), na);
    std::span<const double> tail(series.data() + (n - nb), nb);
    const double ma = mean_of(head), mb = mean_of(tail);
    const double va = variance_of(head, ma) / effective_sample_size(head);
    const double vb = variance_of(tail, mb) / effective_sample_size(tail);
    const double denom = std::sqrt(va + vb);
    stats.geweke_z.push_back(denom > 0.0 ? (ma - mb) / denom : 0.0);
  }
  return stats;
}

std::string plot_data_csv(const MonitoredSeries& series) {
  std::ostringstream out;
  out << "iteration,statistic,value\n";
  char buf[64];
  for (std::size_t k = 0; k < series.names.size(); ++k) {
    for (std::size_t t = 0; t < series.series[k].size(); ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g", series.series[k][t]);
      out << series.iterations[t] << ',' << series.names[k] << ',' << buf << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Joint-distribution kernel validation.
// ---------------------------------------------------------------------------

namespace {

RatingMatrix instance_matrix(const GewekeInstance& instance) {
  RatingMatrix m(instance.num_trustors, instance.num_trustees, instance.levels);
  if (instance.edges.empty()) {
    for (int i = 0; i < instance.num_trustors; ++i) {
      for (int j = 0; j < instance.num_trustees; ++j) {
        m.add(i, j, 1);
      }
    }
  } else {
    for (auto [i, j] : instance.edges) m.add(i, j, 1);
  }
  return m;
}

void redraw_ratings(RatingMatrix& ratings, const GibbsState& state, std::uint64_t seed,
                    std::uint64_t round) {
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    StreamRng rng = derive_stream(seed, round, stream_tag::kGewekeData, e);
    const RatingEntry& entry = ratings.entry(e);
    const int rating = forward_sample_rating(
        state.opinions[e], state.biases[static_cast<std::size_t>(entry.trustor)],
        state.logit, rng);
    ratings.set_rating(e, rating);
  }
}

// The eight monitored statistics of one (latents, data) configuration:
// mean E(omega), mean b, mean d, mean a, epsilon, mean theta, mean rating,
// share of top-level ratings.
std::vector<double> joint_statistics(const GibbsState& state, const RatingMatrix& ratings) {
  std::vector<double> out;
  const auto ne = static_cast<double>(ratings.size());
  double se = 0.0;
  for (std::size_t e = 0; e < ratings.size(); ++e) {
    se += expected_belief(state.opinions[e],
                          state.biases[static_cast<std::size_t>(ratings.entry(e).trustor)]);
  }
  out.push_back(se / ne);
  double sb = 0.0, sd = 0.0;
  for (const Behavior& b : state.behaviors) {
    sb += b.b;
    sd += b.d;
  }
  out.push_back(sb / static_cast<double>(state.behaviors.size()));
  out.push_back(sd / static_cast<double>(state.behaviors.size()));
  double sa = 0.0;
  for (const Bias& a : state.biases) sa += a.a;
  out.push_back(sa / static_cast<double>(state.biases.size()));
  out.push_back(state.logit.epsilon);
  out.push_back(mean_of(state.logit.theta));
  double sr = 0.0, stop = 0.0;
  for (const RatingEntry& entry : ratings.entries()) {
    sr += entry.rating;
    if (entry.rating == ratings.levels()) stop += 1.0;
  }
  out.push_back(sr / ne);
  out.push_back(stop / ne);
  return out;
}

const std::vector<std::string> kJointStatNames = {
    "mean_expected_belief", "mean_behavior_b", "mean_behavior_d", "mean_bias",
    "epsilon",              "mean_theta",      "mean_rating",     "top_level_share"};

}  // namespace

ChainStats geweke_joint_test(const GewekeInstance& instance, const SamplerConfig& config,
                             std::int64_t rounds, GewekeKernel kernel) {
  if (rounds < 1000) {
    throw std::invalid_argument("joint-distribution test needs at least 1000 rounds");
  }
  config.validate();
  const std::size_t num_stats = kJointStatNames.size();

  // Marginal-conditional: independent prior draws.
  RatingMatrix mc_ratings = instance_matrix(instance);
  std::vector<std::vector<double>> mc(num_stats);
  for (std::int64_t r = 0; r < rounds; ++r) {
    StreamRng rng = derive_stream(config.seed, static_cast<std::uint64_t>(r),
                                  stream_tag::kTruth, 1);
    const GibbsState state = sample_state_from_prior(mc_ratings, config, rng);
    redraw_ratings(mc_ratings, state, config.seed ^ 0x5bd1e995u,
                   static_cast<std::uint64_t>(r));
    const std::vector<double> stats = joint_statistics(state, mc_ratings);
    for (std::size_t k = 0; k < num_stats; ++k) mc[k].push_back(stats[k]);
  }

  // Successive-conditional: start at the prior (stationary for a correct
  // kernel), then alternate one Gibbs sweep with a data redraw.
  RatingMatrix sc_ratings = instance_matrix(instance);
  const std::uint64_t sc_seed = config.seed ^ 0x9e3779b9u;
  StreamRng sc_init = derive_stream(sc_seed, 0, stream_tag::kTruth, 2);
  GibbsState state = sample_state_from_prior(sc_ratings, config, sc_init);
  redraw_ratings(sc_ratings, state, sc_seed, 0);
  SamplerConfig sc_config = config;
  sc_config.seed = sc_seed;
  SweepOptions options;
  options.corrupt_opinion_weights = (kernel == GewekeKernel::kCorruptOpinionWeights);
  std::vector<std::vector<double>> sc(num_stats);
  for (std::int64_t r = 1; r <= rounds; ++r) {
    state = gibbs_step(state, sc_ratings, sc_config, options);
    redraw_ratings(sc_ratings, state, sc_seed, static_cast<std::uint64_t>(r));
    const std::vector<double> stats = joint_statistics(state, sc_ratings);
    for (std::size_t k = 0; k < num_stats; ++k) sc[k].push_back(stats[k]);
  }

  ChainStats result;
  result.names = kJointStatNames;
  result.samples = static_cast<std::size_t>(rounds);
  result.thin = 1;
  for (std::size_t k = 0; k < num_stats; ++k) {
    const double m_mc = mean_of(mc[k]);
    const double m_sc = mean_of(sc[k]);
    const double v_mc = variance_of(mc[k], m_mc) / static_cast<double>(rounds);
    const double ess_sc = effective_sample_size(sc[k]);
    const double v_sc = variance_of(sc[k], m_sc) / ess_sc;
    const double denom = std::sqrt(v_mc + v_sc);
    result.ess.push_back(ess_sc);
    result.geweke_z.push_back(denom > 0.0 ? (m_mc - m_sc) / denom : 0.0);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Recovery scoring.
// ---------------------------------------------------------------------------

RecoveryScore recovery_score(const GroundTruth& truth,
                             const std::vector<Opinion>& true_opinions,
                             const PosteriorSummary& summary) {
  if (true_opinions.size() != truth.lambdas.size() ||
      summary.edges.size() != truth.lambdas.size()) {
    throw std::invalid_argument("recovery_score: edge sets differ in size");
  }
  for (std::size_t e = 0; e < summary.edges.size(); ++e) {
    if (summary.edges[e].trustor != truth.lambdas[e].trustor ||
        summary.edges[e].trustee != truth.lambdas[e].trustee) {
      throw std::invalid_argument("recovery_score: edge keys do not match");
    }
  }
  if (static_cast<int>(summary.behavior_means.size()) != truth.num_trustees() ||
      static_cast<int>(summary.bias_means.size()) != truth.num_trustors() ||
      summary.theta_means.size() != truth.logit.theta.size()) {
    throw std::invalid_argument("recovery_score: parameter shapes do not match");
  }

  RecoveryScore score;
  std::vector<double> true_beliefs(summary.edges.size());
  std::vector<double> estimated(summary.edges.size());
  for (std::size_t e = 0; e < summary.edges.size(); ++e) {
    true_beliefs[e] = expected_belief(
        true_opinions[e],
        truth.biases[static_cast<std::size_t>(truth.lambdas[e].trustor)]);
    estimated[e] = summary.edges[e].expected_belief_mean;
  }
  score.spearman = spearman_correlation(true_beliefs, estimated);
  score.epsilon_abs_error = std::abs(summary.epsilon_mean - truth.logit.epsilon);
  for (std::size_t l = 0; l < summary.theta_means.size(); ++l) {
    score.theta_abs_errors.push_back(
        std::abs(summary.theta_means[l] - truth.logit.theta[l]));
  }
  for (std::size_t j = 0; j < summary.behavior_means.size(); ++j) {
    const Behavior& b = truth.behaviors[j];
    score.behavior_abs_errors.push_back((std::abs(summary.behavior_means[j][0] - b.b) +
                                         std::abs(summary.behavior_means[j][1] - b.d) +
                                         std::abs(summary.behavior_means[j][2] - b.n)) /
                                        3.0);
  }
  for (std::size_t i = 0; i < summary.bias_means.size(); ++i) {
    score.bias_abs_errors.push_back(std::abs(summary.bias_means[i] - truth.biases[i].a));
  }
  return score;
}

}  // namespace opinionforge
