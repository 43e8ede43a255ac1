#include "opinionforge/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace opinionforge {

namespace {

std::int64_t pack(int trustor, int trustee) {
  return (static_cast<std::int64_t>(trustor) << 32) | static_cast<std::uint32_t>(trustee);
}

}  // namespace

void Opinion::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0) {
    throw std::invalid_argument("Opinion counts must be nonnegative");
  }
}

void Behavior::validate() const {
  for (double v : {b, d, n}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Behavior components must lie in [0, 1]");
    }
  }
  if (std::abs(b + d + n - 1.0) > 1e-12) {
    throw std::invalid_argument("Behavior components must sum to 1");
  }
}

void Bias::validate() const {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::invalid_argument("Bias must lie in [0, 1]");
  }
}

void LogitParams::validate() const {
  if (levels < 2) {
    throw std::invalid_argument("LogitParams requires at least 2 levels");
  }
  if (static_cast<int>(theta.size()) != levels - 1) {
    throw std::invalid_argument("LogitParams needs levels - 1 cutpoints, got " +
                                std::to_string(theta.size()));
  }
  if (!std::isfinite(epsilon)) {
    throw std::invalid_argument("LogitParams epsilon must be finite");
  }
  for (std::size_t l = 0; l + 1 < theta.size(); ++l) {
    if (!(theta[l] >= theta[l + 1])) {
      throw std::invalid_argument("LogitParams cutpoints must be non-increasing");
    }
  }
}

RatingMatrix::RatingMatrix(int num_trustors, int num_trustees, int levels)
    : num_trustors_(num_trustors),
      num_trustees_(num_trustees),
      levels_(levels),
      by_trustor_(static_cast<std::size_t>(std::max(num_trustors, 0))),
      by_trustee_(static_cast<std::size_t>(std::max(num_trustees, 0))) {
  if (num_trustors < 0 || num_trustees < 0) {
    throw DataError("matrix dimensions must be nonnegative");
  }
  if (levels < 2) {
    throw DataError("rating levels must be at least 2");
  }
}

void RatingMatrix::add(int trustor, int trustee, int rating) {
  if (trustor < 0 || trustor >= num_trustors_ || trustee < 0 || trustee >= num_trustees_) {
    throw DataError("edge (" + std::to_string(trustor) + ", " + std::to_string(trustee) +
                    ") out of range");
  }
  if (rating < 1 || rating > levels_) {
    throw DataError("rating " + std::to_string(rating) + " outside {1.." +
                    std::to_string(levels_) + "}");
  }
  if (index_.count(pack(trustor, trustee)) != 0) {
    throw DataError("duplicate edge (" + std::to_string(trustor) + ", " +
                    std::to_string(trustee) + ")");
  }
  RatingEntry entry{trustor, trustee, rating};
  auto pos = std::lower_bound(entries_.begin(), entries_.end(), entry,
                              [](const RatingEntry& a, const RatingEntry& b) {
                                return std::pair(a.trustor, a.trustee) <
                                       std::pair(b.trustor, b.trustee);
                              });
  entries_.insert(pos, entry);
  // Indices shift on insert; rebuild the lookup tables.
  index_.clear();
  for (auto& v : by_trustor_) v.clear();
  for (auto& v : by_trustee_) v.clear();
  for (int e = 0; e < static_cast<int>(entries_.size()); ++e) {
    const RatingEntry& r = entries_[static_cast<std::size_t>(e)];
    index_[pack(r.trustor, r.trustee)] = e;
    by_trustor_[static_cast<std::size_t>(r.trustor)].push_back(e);
    by_trustee_[static_cast<std::size_t>(r.trustee)].push_back(e);
  }
}

void RatingMatrix::set_rating(std::size_t edge_index, int rating) {
  if (rating < 1 || rating > levels_) {
    throw DataError("rating " + std::to_string(rating) + " outside {1.." +
                    std::to_string(levels_) + "}");
  }
  entries_.at(edge_index).rating = rating;
}

std::int64_t RatingMatrix::find(int trustor, int trustee) const {
  auto it = index_.find(pack(trustor, trustee));
  return it == index_.end() ? -1 : it->second;
}

void validate_state(const GibbsState& state, const RatingMatrix& ratings,
                    std::int64_t lambda_max) {
  if (state.opinions.size() != ratings.size()) {
    throw std::invalid_argument("state opinions do not match the observed edge set");
  }
  if (static_cast<int>(state.behaviors.size()) != ratings.num_trustees() ||
      static_cast<int>(state.biases.size()) != ratings.num_trustors()) {
    throw std::invalid_argument("state entity counts do not match the matrix");
  }
  if (state.logit.levels != ratings.levels()) {
    throw std::invalid_argument("state levels do not match the matrix");
  }
  state.logit.validate();
  for (const Opinion& op : state.opinions) {
    op.validate();
    if (op.lambda() < 1 || op.lambda() > lambda_max) {
      throw std::invalid_argument("opinion lambda outside [1, lambda_max]");
    }
  }
  for (const Behavior& b : state.behaviors) b.validate();
  for (const Bias& a : state.biases) a.validate();
}

}  // namespace opinionforge
