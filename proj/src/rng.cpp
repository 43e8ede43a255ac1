#include "opinionforge/rng.hpp"

#include <algorithm>
#include <cmath>

#include "opinionforge/errors.hpp"

namespace opinionforge {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t StreamRng::next_u64() {
  // SplitMix64 step.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double StreamRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t StreamRng::next_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Multiply-shift bounded draw; bias is ~span / 2^64, irrelevant here.
  const std::uint64_t r = next_u64();
  const auto scaled = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(r) * span) >> 64);
  return lo + static_cast<std::int64_t>(scaled);
}

namespace {

std::uint64_t key_combine(std::uint64_t h, std::uint64_t w) {
  return mix64(h ^ (w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

}  // namespace

StreamRng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) {
  std::uint64_t h = mix64(seed);
  h = key_combine(h, a);
  h = key_combine(h, b);
  h = key_combine(h, c);
  return StreamRng(h);
}

std::vector<double> normalize_log_weights(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw NumericalError("empty support");
  }
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (!(m > -std::numeric_limits<double>::infinity()) || std::isnan(m)) {
    throw NumericalError("zero normalizer: all conditional weights vanished");
  }
  std::vector<double> probs(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    probs[i] = std::exp(log_weights[i] - m);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

int categorical_from_probs(std::span<const double> probs, StreamRng& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) {
      return probs[i] > 0.0 ? static_cast<int>(i) : last_positive;
    }
  }
  // u landed in the rounding slack past the final cumulative sum.
  if (last_positive < 0) {
    throw NumericalError("categorical draw over all-zero probabilities");
  }
  return last_positive;
}

int categorical_from_log_weights(std::span<const double> log_weights, StreamRng& rng) {
  const std::vector<double> probs = normalize_log_weights(log_weights);
  return categorical_from_probs(probs, rng);
}

Behavior dirichlet_sample(std::int64_t alpha, std::int64_t beta, std::int64_t gamma,
                          StreamRng& rng) {
  if (alpha < 1 || beta < 1 || gamma < 1) {
    throw std::invalid_argument("dirichlet_sample requires integer parameters >= 1");
  }
  auto erlang = [&rng](std::int64_t k) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
      sum += -std::log1p(-rng.next_double());
    }
    return sum;
  };
  const double ga = erlang(alpha);
  const double gb = erlang(beta);
  const double gc = erlang(gamma);
  const double total = ga + gb + gc;
  return Behavior{ga / total, gb / total, gc / total};
}

}  // namespace opinionforge
