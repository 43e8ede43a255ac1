#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "opinionforge/types.hpp"

namespace opinionforge {

// SplitMix64 bit finalizer (stateless avalanche of one word).
std::uint64_t mix64(std::uint64_t x);

// Deterministic keyed random stream. Streams derived from distinct keys are
// statistically independent for our purposes; the same key always replays
// the same sequence, which is what makes parallel and serial sweep schedules
// bit-identical.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : state_(mix64(key ^ 0x6a09e667f3bcc909ull)) {}

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 random bits.
  double next_double();

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

// Stream keys are derived by hashing (seed, a, b, c); the sampler keys its
// per-entity streams as (seed, iteration, stage, entity index) and the
// forward generator as (seed, trustor, trustee).
StreamRng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c);

// Stage tags used when deriving per-entity streams.
namespace stream_tag {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kBehavior = 2;
inline constexpr std::uint64_t kOpinion = 3;
inline constexpr std::uint64_t kBias = 4;
inline constexpr std::uint64_t kLambda = 5;
inline constexpr std::uint64_t kTheta = 6;
inline constexpr std::uint64_t kEpsilon = 7;
inline constexpr std::uint64_t kForwardEdge = 8;
inline constexpr std::uint64_t kGewekeData = 9;
inline constexpr std::uint64_t kTruth = 10;
}  // namespace stream_tag

// Normalizes log weights into probabilities via log-sum-exp.
// Throws NumericalError if every weight is -inf (zero normalizer).
std::vector<double> normalize_log_weights(std::span<const double> log_weights);

// Categorical draw by cumulative-sum inversion with strict inequality:
// returns the smallest k with u < p[0] + ... + p[k]. Guaranteed to land on
// an index with positive mass.
int categorical_from_probs(std::span<const double> probs, StreamRng& rng);

int categorical_from_log_weights(std::span<const double> log_weights, StreamRng& rng);

// Dirichlet draw with positive integer concentration parameters, via sums
// of exponentials (Erlang construction). Depends only on this stream's
// uniforms, so runs reproduce exactly.
Behavior dirichlet_sample(std::int64_t alpha, std::int64_t beta, std::int64_t gamma,
                          StreamRng& rng);

}  // namespace opinionforge
