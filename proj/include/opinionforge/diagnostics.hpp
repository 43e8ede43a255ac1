#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opinionforge/generative.hpp"
#include "opinionforge/inference.hpp"

namespace opinionforge {

// Effective sample size via the initial-positive-sequence estimate: sum
// autocorrelations in adjacent pairs until a pair goes nonpositive. A
// zero-variance series has ESS defined as its length. Throws
// std::invalid_argument for series shorter than 10.
double effective_sample_size(std::span<const double> series);

// Spearman rank correlation (average ranks on ties).
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct ChainStats {
  std::vector<std::string> names;
  std::vector<double> ess;
  std::vector<double> geweke_z;
  std::size_t samples = 0;
  std::int64_t thin = 1;
};

// The scalar series monitored by diagnostics, one vector per retained
// sample: mean expected belief, mean behavior b, mean behavior d, mean bias,
// epsilon, each cutpoint, mean lambda.
struct MonitoredSeries {
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // series[k][t]
  std::vector<std::int64_t> iterations;
};

MonitoredSeries monitored_scalars(const Trace& trace, const RatingMatrix& ratings);

// Per-scalar ESS plus the classic within-chain z (first 10% of the trace
// against the last 50%, ESS-adjusted standard errors).
ChainStats trace_diagnostics(const Trace& trace, const RatingMatrix& ratings);

// Plot-ready long-format CSV: iteration,statistic,value.
std::string plot_data_csv(const MonitoredSeries& series);

// ---------------------------------------------------------------------------
// Joint-distribution (Geweke-style) kernel validation.
// ---------------------------------------------------------------------------

struct GewekeInstance {
  int num_trustors = 3;
  int num_trustees = 2;
  int levels = 4;
  // Empty means the complete trustor x trustee edge set.
  std::vector<std::pair<int, int>> edges;
};

enum class GewekeKernel { kCorrect, kCorruptOpinionWeights };

// Compares two simulators of the joint (latents, data) distribution:
// marginal-conditional (prior draws, i.i.d.) versus successive-conditional
// (Gibbs updates interleaved with data redraws). If the kernel is correct
// both target the same joint, so the means of the monitored statistics agree
// up to Monte Carlo error. Returns one z-score per statistic:
//   mean E(omega), mean b, mean d, mean a, epsilon, mean theta,
//   mean rating, share of ratings at the top level.
// The successive-conditional standard error is ESS-adjusted. Throws
// std::invalid_argument if rounds < 1000.
ChainStats geweke_joint_test(const GewekeInstance& instance, const SamplerConfig& config,
                             std::int64_t rounds,
                             GewekeKernel kernel = GewekeKernel::kCorrect);

// ---------------------------------------------------------------------------
// Recovery scoring.
// ---------------------------------------------------------------------------

struct RecoveryScore {
  // Rank agreement between true and posterior-mean expected beliefs.
  double spearman = 0.0;
  double epsilon_abs_error = 0.0;
  std::vector<double> theta_abs_errors;
  std::vector<double> behavior_abs_errors;  // per trustee, mean |delta| over (b,d,n)
  std::vector<double> bias_abs_errors;      // per trustor
};

// Scores a posterior summary against the ground truth that generated the
// data. true_opinions must be aligned with the summary's edges (same key
// set); otherwise throws std::invalid_argument.
RecoveryScore recovery_score(const GroundTruth& truth,
                             const std::vector<Opinion>& true_opinions,
                             const PosteriorSummary& summary);

}  // namespace opinionforge
