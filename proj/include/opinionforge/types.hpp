#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "opinionforge/errors.hpp"

namespace opinionforge {

// Evidence counts for one trustor->trustee edge: how often the trustee acted
// as expected (alpha), not as expected (beta), or ambiguously (gamma).
struct Opinion {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
  std::int64_t gamma = 0;

  std::int64_t lambda() const { return alpha + beta + gamma; }

  void validate() const;

  friend bool operator==(const Opinion&, const Opinion&) = default;
};

// A trustee's intrinsic tendency to act as expected / not / unknown.
// Point on the 3-simplex: b + d + n = 1 within 1e-12.
struct Behavior {
  double b = 0.0;
  double d = 0.0;
  double n = 0.0;

  void validate() const;

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

// Fraction of neutral evidence a trustor counts toward belief, in [0, 1].
struct Bias {
  double a = 0.0;

  void validate() const;

  friend bool operator==(const Bias&, const Bias&) = default;
};

// Ordered-logit link parameters: slope epsilon and one cutpoint per level
// boundary. Cutpoints must be non-increasing (theta[l] >= theta[l+1]);
// otherwise the per-level probabilities go negative.
struct LogitParams {
  double epsilon = 0.0;
  std::vector<double> theta;
  int levels = 2;

  void validate() const;

  friend bool operator==(const LogitParams&, const LogitParams&) = default;
};

struct RatingEntry {
  int trustor = 0;
  int trustee = 0;
  int rating = 0;
};

// Sparse set of observed ordinal ratings r_ij in {1..levels}. Entries are
// kept sorted by (trustor, trustee); their position in entries() is the
// canonical edge index used throughout the sampler.
class RatingMatrix {
 public:
  RatingMatrix() = default;
  RatingMatrix(int num_trustors, int num_trustees, int levels);

  // Throws DataError on out-of-range indices/ratings or duplicate edges.
  void add(int trustor, int trustee, int rating);

  // Replaces the rating of an existing entry (used when data is resampled
  // in place, e.g. by the joint-distribution validation harness).
  void set_rating(std::size_t edge_index, int rating);

  int num_trustors() const { return num_trustors_; }
  int num_trustees() const { return num_trustees_; }
  int levels() const { return levels_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<RatingEntry>& entries() const { return entries_; }
  const RatingEntry& entry(std::size_t edge_index) const { return entries_.at(edge_index); }

  // Edge index for (trustor, trustee), or -1 if unobserved.
  std::int64_t find(int trustor, int trustee) const;

  // Edge indices grouped by trustor / by trustee, for conditional sweeps.
  const std::vector<std::vector<int>>& edges_of_trustor() const { return by_trustor_; }
  const std::vector<std::vector<int>>& edges_of_trustee() const { return by_trustee_; }

 private:
  int num_trustors_ = 0;
  int num_trustees_ = 0;
  int levels_ = 2;
  std::vector<RatingEntry> entries_;
  std::unordered_map<std::int64_t, int> index_;
  std::vector<std::vector<int>> by_trustor_;
  std::vector<std::vector<int>> by_trustee_;
};

// One full assignment of all latent variables. opinions[e] belongs to the
// edge at RatingMatrix::entries()[e].
struct GibbsState {
  std::vector<Opinion> opinions;
  std::vector<Behavior> behaviors;
  std::vector<Bias> biases;
  LogitParams logit;
  std::int64_t iteration = 0;
};

// Checks state/ratings consistency: aligned opinion set, entity counts,
// opinion lambdas in [1, lambda_max], valid parameter values.
void validate_state(const GibbsState& state, const RatingMatrix& ratings,
                    std::int64_t lambda_max);

}  // namespace opinionforge
